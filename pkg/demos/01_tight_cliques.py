"""
Where the lower bound is tight
==============================

Every connected signed graph has a balanced subgraph with at least
pt(G) = m/2 + (n-1)/4 edges.  Odd all-negative cliques meet that bound
exactly, which makes them the natural NO instances for every k >= 1.
"""
from signedcut import beta, pt
from signedcut.generators import gen_negative_clique, random_signed_graph
from signedcut.oracle import slack_quarters

# All quantities are kept in quarter units so nothing is ever rounded.
for n in (3, 5, 7, 9):
    g = gen_negative_clique(n)
    print(f"K_{n}: beta = {beta(g):3d}   4*beta = {4 * beta(g):3d}   4*pt = {pt(g).q:3d}")

# A random graph usually sits comfortably above the bound.  The slack
# 4*beta - 4*pt is the largest k for which (G, k) is a YES instance.
g = random_signed_graph(10, 0.4, 0.3, seed=1)
print(f"\nrandom n=10, m={g.m}: slack = {slack_quarters(g)} quarter-edges")
