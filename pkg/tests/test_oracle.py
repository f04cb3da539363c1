import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import N, P, neg_clique, neg_cycle, neg_path
from signedcut.generators import random_clique_forest, random_signed_graph
from signedcut.graph import SignedGraph, switch
from signedcut.oracle import (
    OracleCapExceeded,
    QuarterValue,
    StructureError,
    answer_exact,
    beta,
    beta_exact,
    consistent_edge_count,
    is_balanced,
    mcwv_cliqueforest,
    mcwv_exact,
    pt,
    verify_lemma_beta,
)

TRIANGLE = SignedGraph.from_edges(3, [(0, 1, N), (1, 2, N), (0, 2, N)])
BALANCED_TRIANGLE = SignedGraph.from_edges(3, [(0, 1, N), (1, 2, N), (0, 2, P)])


def test_consistent_count():
    assert consistent_edge_count(TRIANGLE, {0: 1, 1: 2, 2: 2}) == 2
    allpos = SignedGraph.from_edges(3, [(0, 1, P), (1, 2, P)])
    assert consistent_edge_count(allpos, {0: 1, 1: 1, 2: 1}) == 2
    assert consistent_edge_count(neg_clique(5), {0: 1, 1: 1, 2: 1, 3: 2, 4: 2}) == 6


def test_beta_values():
    assert beta(neg_clique(5)) == 6
    assert beta(SignedGraph.from_edges(2, [(0, 1, P)])) == 1
    assert beta(neg_cycle(5)) == 4
    value, side = beta_exact(neg_cycle(5))
    assert consistent_edge_count(neg_cycle(5), side) == value


def test_pt_quarters():
    assert pt(neg_clique(5)) == QuarterValue(24)
    assert pt(SignedGraph.from_edges(1, [])).q == 0
    assert pt(SignedGraph.from_edges(4, [(0, 1, N), (2, 3, N)])).q == 6


def test_answer_examples():
    assert not answer_exact(neg_clique(5), 1)
    assert answer_exact(SignedGraph.from_edges(2, [(0, 1, N)]), 1)
    assert answer_exact(BALANCED_TRIANGLE, 4)
    assert not answer_exact(BALANCED_TRIANGLE, 5)


def test_answer_needs_connected():
    with pytest.raises(ValueError):
        answer_exact(SignedGraph.from_edges(4, [(0, 1, N), (2, 3, N)]), 1)


def test_cap_refusal():
    with pytest.raises(OracleCapExceeded):
        beta_exact(random_signed_graph(30, 0.1, 0.5, 1))


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_odd_clique_is_tight(n):
    g = neg_clique(n)
    assert 4 * beta(g) == pt(g).q == n * n - 1


def test_balance_examples():
    allpos = SignedGraph.from_edges(4, [(0, 1, P), (1, 2, P), (2, 3, P)])
    cert = is_balanced(allpos)
    assert cert.balanced and set(cert.assignment.values()) == {1}
    cert = is_balanced(TRIANGLE)
    assert not cert.balanced and cert.verify(TRIANGLE)
    assert sorted(u for u, _, _ in cert.cycle) == [0, 1, 2]
    assert sum(s == N for _, _, s in cert.cycle) % 2 == 1
    assert is_balanced(neg_cycle(4)).balanced


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 7), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32))
def test_harary(n, p, q, seed):
    g = random_signed_graph(n, p, q, seed)
    cert = is_balanced(g)
    assert cert.balanced == (beta(g) == g.m)
    assert cert.verify(g)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32))
def test_beta_switching_invariant_and_above_pt(n, p, q, seed):
    g = random_signed_graph(n, p, q, seed)
    U = [v for v in g.vertices if (v * 7 + seed) % 3 == 0]
    assert beta(switch(g, U)) == beta(g)
    assert 4 * beta(g) >= pt(g).q


def test_mcwv_examples():
    x = SignedGraph.from_edges(1, [])
    assert mcwv_exact(x, {0: 1}, {}) == 1
    e = SignedGraph.from_edges(2, [(0, 1, N)])
    assert mcwv_exact(e, {0: 1}, {1: 1}) == 3
    assert mcwv_cliqueforest(e, {0: 1}, {1: 1}) == 3
    assert mcwv_exact(TRIANGLE, {}, {}) == 2 == mcwv_cliqueforest(TRIANGLE, {}, {})
    assert mcwv_cliqueforest(neg_path(4), {}, {}) == 3


def test_mcwv_dp_rejects_non_forest():
    with pytest.raises(StructureError):
        mcwv_cliqueforest(neg_cycle(5), {}, {})
    with pytest.raises(StructureError):
        mcwv_cliqueforest(BALANCED_TRIANGLE, {}, {})


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32), st.integers(0, 2**32))
def test_mcwv_dp_matches_enumeration(n, seed, wseed):
    t = random_clique_forest(n, seed)
    w1 = {v: (wseed >> v) % 3 for v in t.vertices}
    w2 = {v: (wseed >> (v + 12)) % 2 for v in t.vertices}
    assert mcwv_cliqueforest(t, w1, w2) == mcwv_exact(t, w1, w2)


def test_lemma_examples():
    assert verify_lemma_beta(neg_path(3), [1]).holds
    for U in ([0, 1], [2, 4], [1, 3]):
        assert verify_lemma_beta(neg_clique(5), U).holds


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 8), st.floats(0.1, 1), st.floats(0, 1), st.integers(0, 2**32))
def test_lemma_random(n, p, q, seed):
    g = random_signed_graph(n, p, q, seed)
    U = [v for v in g.vertices if (seed >> v) & 1] or [0]
    if len(U) == n:
        U = U[:-1]
    assert verify_lemma_beta(g, U).holds
