import itertools

import networkx as nx
import pytest

from conftest import N, neg_clique
from signedcut.generators import (
    GeneratorError,
    GenSpec,
    gen_dsplit,
    gen_negative_clique,
    gen_rl,
    generate,
    random_clique_forest,
    random_rule_setting,
    random_signed_graph,
    solve_1star_split,
    standard_corpus,
    transform_bodlaender,
    transform_double,
)
from signedcut.graph import SignedGraph, is_connected, is_negative_clique_forest, verify_dsplit, verify_partition
from signedcut.oracle import StructureError, beta, pt


@pytest.mark.parametrize("n, b", [(3, 2), (5, 6)])
def test_negative_clique(n, b):
    g = gen_negative_clique(n)
    assert beta(g) == b and 4 * b == pt(g).q


def test_negative_clique_even():
    with pytest.raises(GeneratorError):
        gen_negative_clique(4)


def test_rl_shapes():
    gen = gen_rl(1, 1, [3], [3], 0.5, 0.2, 4)
    assert verify_partition(gen.graph, gen.independent, gen.cliques) == []
    assert gen_rl(0, 1, [], [5], 0.5, 0.0, 1).graph == gen_negative_clique(5)
    gen = gen_rl(2, 1, [4, 3], [3], 0.3, 0.3, 99)
    assert gen.graph.n == 10 and is_connected(gen.graph)
    assert verify_partition(gen.graph, gen.independent, gen.cliques) == []


def test_rl_errors():
    with pytest.raises(GeneratorError):
        gen_rl(1, 1, [0], [0], 0.5, 0.0, 1)
    with pytest.raises(GeneratorError):
        gen_rl(1, 0, [3], [], 0.5, 0.0, 1)


def test_dsplit():
    gen = gen_dsplit(1, 4, 2, 0.5, 3)
    K, I = gen.cliques[0], gen.independent[0]
    assert verify_dsplit(gen.graph, K, I, 1) == []
    for v in K:
        assert any(len(gen.graph.neighbors(x)) == 1 for x in gen.graph.neighbors(v) & I)
    gen = gen_dsplit(2, 6, 9, 0.0, 7)
    assert verify_dsplit(gen.graph, gen.cliques[0], gen.independent[0], 2) == []
    with pytest.raises(GeneratorError):
        gen_dsplit(0, 3, 3, 0.0, 1)


def test_random_signed_graph():
    assert random_signed_graph(6, 1.0, 0.0, 1) == neg_clique(6)
    tree = random_signed_graph(7, 0.0, 0.5, 2)
    assert tree.m == 6 and is_connected(tree)
    assert random_signed_graph(9, 0.3, 0.4, 123) == random_signed_graph(9, 0.3, 0.4, 123)


def test_double():
    e = SignedGraph.from_edges(2, [(0, 1, N)])
    d = transform_double(e)
    assert d.n == 4 and d.m == 2 and beta(d) == 2
    assert not is_connected(d)


def test_bodlaender_p3():
    p3 = SignedGraph.from_edges(3, [(0, 1, N), (1, 2, N)])
    with pytest.raises(GeneratorError):
        transform_bodlaender(p3)  # vertex 1 is universal
    # the construction itself on P3 (ignoring the universal-vertex guard)
    H = SignedGraph.from_edges(4, [(0, 1, N), (0, 2, N), (1, 2, N), (0, 3, N), (2, 3, N)])
    assert beta(H) == 4 == 2 * 1 + beta(p3)


def test_bodlaender_structure():
    c5 = SignedGraph.from_edges(5, [(i, (i + 1) % 5, N) for i in range(5)])
    gen = transform_bodlaender(c5)
    K, I = gen.cliques[0], gen.independent[0]
    assert len(I) == 5
    assert verify_dsplit(gen.graph, K, I, 2) == []
    assert all(len(gen.graph.neighbors(x)) == 2 for x in I)
    assert beta(gen.graph) == 2 * 5 + beta(c5)


@pytest.mark.parametrize("q, value", [(3, 5), (2, 3), (1, 1)])
def test_one_star_solver(q, value):
    edges = [(i, j, N) for i, j in itertools.combinations(range(q), 2)] + [(i, q + i, N) for i in range(q)]
    g = SignedGraph.from_edges(2 * q, edges)
    got, side = solve_1star_split(g, range(q), range(q, 2 * q))
    assert got == value == beta(g)


def test_one_star_solver_structure_error():
    with pytest.raises(StructureError):
        solve_1star_split(neg_clique(3), [0, 1], [2])


def test_generate_dispatch():
    spec = GenSpec("dsplit", d=2, k_size=6, i_size=9, seed=7)
    assert generate(spec).graph == generate(spec).graph
    with pytest.raises(GeneratorError):
        generate(GenSpec("nope"))


def test_clique_forest_generator():
    for seed in range(30):
        assert is_negative_clique_forest(random_clique_forest(1 + seed % 12, seed))


def test_rule_setting_shape():
    for seed in range(30):
        g, S = random_rule_setting(seed)
        assert is_connected(g) and is_negative_clique_forest(g.remove_vertices(S))


def test_standard_corpus_deterministic():
    a = standard_corpus(3, per_family=5)
    b = standard_corpus(3, per_family=5)
    assert [e.instance for e in a] == [e.instance for e in b]
    assert all(e.instance.graph.n <= 11 for e in a)


def test_bodlaender_against_networkx_maxcut():
    # unsigned cross-check: all-negative beta is plain max cut
    g = nx.cycle_graph(6)
    sg = SignedGraph.from_edges(6, [(u, v, N) for u, v in g.edges])
    best = max(nx.cut_size(g, [v for v in range(6) if m >> v & 1]) for m in range(64))
    assert beta(sg) == best
