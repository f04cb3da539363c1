"""
Following the kernelization pipeline
====================================

The pipeline first splits G into a small set S plus a forest of negative
cliques, then shrinks the forest with the kernel rules.  Each step is
recorded in a trace that can be replayed.
"""
from signedcut import Instance, Sign, SignedGraph, answer_exact, kernelize
from signedcut.generators import gen_negative_clique, random_signed_graph

N = Sign.NEGATIVE


def show(name, inst):
    rep = kernelize(inst)
    print(f"{name} (n={inst.graph.n}, k={inst.k}) -> {rep.outcome} [{rep.reason}]")
    dec = rep.decomposition
    if dec is not None:
        print(f"   decompose: credit {dec.credit}, |S| = {len(dec.S)}, steps {[s.rule.value for s in dec.trace]}")
    for step in rep.trace:
        print(f"   {step.rule.value:>4}: remove {list(step.removed)}  k -= {step.delta_k}")
    if rep.kernel_instance is not None:
        kern = rep.kernel_instance
        print(f"   kernel n={kern.graph.n}, k={kern.k}; replay ok: {rep.replay_matches()}")
    print(f"   oracle on the input: {'YES' if answer_exact(inst.graph, inst.k) else 'NO'}\n")


# K5 is already a negative clique-forest, so S is empty and Rule 8 halves it twice.
show("K5", Instance(gen_negative_clique(5), 1))

# The 5-cycle has a path on three vertices worth one unit of credit.
c5 = SignedGraph.from_edges(5, [(i, (i + 1) % 5, N) for i in range(5)])
show("C5", Instance(c5, 1))
show("C5", Instance(c5, 3))

# A larger random instance: small k is settled during decomposition, while a k
# just above the true slack (14 here) leaves a kernel to hand to an exact solver.
g = random_signed_graph(11, 0.35, 0.2, seed=4)
show("random", Instance(g, 4))
show("random", Instance(g, 15))
