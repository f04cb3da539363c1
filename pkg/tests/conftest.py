import itertools

import pytest

from signedcut.graph import Sign, SignedGraph

N, P = Sign.NEGATIVE, Sign.POSITIVE


def neg_clique(n):
    return SignedGraph.from_edges(n, [(i, j, N) for i, j in itertools.combinations(range(n), 2)])


def neg_cycle(n):
    return SignedGraph.from_edges(n, [(i, (i + 1) % n, N) for i in range(n)])


def neg_path(n):
    return SignedGraph.from_edges(n, [(i, i + 1, N) for i in range(n - 1)])


@pytest.fixture
def k5():
    return neg_clique(5)


@pytest.fixture
def c5():
    return neg_cycle(5)
