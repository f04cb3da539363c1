"""
d*-split graphs have a linear kernel
====================================

A d*-split graph is a negative clique K plus an independent set I whose
vertices have at most d neighbours, all in K, and every clique vertex has
a neighbour in I.  Once n >= 4(d+1)k the answer is always YES, and the
two certificate procedures below show why.
"""
from signedcut import Instance, answer_exact
from signedcut.drivers import certificate_clique_side, certificate_independent_side, linear_kernel_dsplit
from signedcut.generators import gen_dsplit

gen = gen_dsplit(d=2, k_size=6, i_size=9, p_pos=0.0, seed=7)
K, I = gen.cliques[0], gen.independent[0]
inst = Instance(gen.graph, 1)
rep = linear_kernel_dsplit(inst, 2, K, I)
print(f"n = {gen.graph.n}, threshold 4(d+1)k = 12 -> {rep.outcome}")
print(f"oracle agrees: {answer_exact(gen.graph, 1)}")

# Large clique side: peel stars and pendants until the parameter is used up.
trace = certificate_clique_side(inst, K, I, 2)
print("\nclique-side certificate:")
for step in trace:
    print(f"   {step.rule.value}: remove {list(step.removed)}, k -= {step.delta_k}")

# Large independent side: repeatedly cut out a clique vertex with its heavy neighbours.
gen = gen_dsplit(d=3, k_size=4, i_size=8, p_pos=0.2, seed=21)
inst = Instance(gen.graph, 1)
trace = certificate_independent_side(inst, gen.cliques[0], gen.independent[0], 3)
print("\nindependent-side certificate:")
for step in trace:
    print(f"   {step.rule.value}: remove {list(step.removed)}, k -= {step.delta_k}")
print(f"final k = {trace.replay(inst).k}")
