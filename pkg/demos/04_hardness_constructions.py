"""
Max Cut stays hard on 2*-split graphs
=====================================

Max Cut is Signed Max Cut with every edge negative.  Doubling a graph
removes universal vertices without changing the problem, and the
non-edge construction turns any graph into a 2*-split graph whose optimum
is shifted by exactly twice the number of non-edges.
"""
import networkx as nx

from signedcut import Sign, SignedGraph, beta
from signedcut.generators import gen_dsplit, solve_1star_split, transform_bodlaender, transform_double

N = Sign.NEGATIVE
checked = 0
for h in nx.graph_atlas_g()[1:]:
    n = h.number_of_nodes()
    if n > 5 or not nx.is_connected(h):
        continue
    g = SignedGraph.from_edges(n, [(u, v, N) for u, v in h.edges])
    assert beta(transform_double(g)) == 2 * beta(g)
    if all(h.degree(v) < n - 1 for v in h):
        H = transform_bodlaender(g).graph
        assert beta(H) == 2 * (n * (n - 1) // 2 - g.m) + beta(g)
        checked += 1
print(f"non-edge construction verified on {checked} connected graphs with n <= 5")

# With d = 1 the problem is easy: split the clique evenly, pendants go opposite.
gen = gen_dsplit(d=1, k_size=5, i_size=3, p_pos=0.3, seed=2)
value, side = solve_1star_split(gen.graph, gen.cliques[0], gen.independent[0])
print(f"1*-split instance n={gen.graph.n}: solver {value}, brute force {beta(gen.graph)}")
