"""Two-way reduction rules applied relative to a fixed vertex set ``S``.

``G - S`` is a clique-forest without positive edges throughout.  Each
``apply_rule*`` validates its preconditions, raising :class:`RuleNotApplicable`
with the failing clause, and returns a new :class:`RuleContext` whose trace
records the step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .graph import (
    BlockDecomposition,
    Instance,
    Sign,
    SignedGraph,
    block_decomposition,
    connected_components,
    is_negative_clique_forest,
)
from .oracle import mcwv_cliqueforest, pt
from .trace import RuleId, RuleTrace, TraceStep


class RuleNotApplicable(ValueError):
    def __init__(self, rule: str, clause: str):
        super().__init__(f"{rule} not applicable: {clause}")
        self.rule = rule
        self.clause = clause


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class RuleContext:
    graph: SignedGraph
    k: int
    S: frozenset[int]
    trace: RuleTrace = field(default_factory=RuleTrace)
    next_id: int = -1

    def __post_init__(self):
        object.__setattr__(self, "S", frozenset(self.S))
        if not self.S <= set(self.graph.vertices):
            raise ValueError("S must be a subset of V(G)")
        if self.next_id < 0:
            object.__setattr__(self, "next_id", max(self.graph.vertices, default=-1) + 1)

    @cached_property
    def blocks(self) -> BlockDecomposition:
        return block_decomposition(self.graph, self.S)

    @cached_property
    def rest(self) -> SignedGraph:
        return self.graph.remove_vertices(self.S)

    @property
    def instance(self) -> Instance:
        return Instance(self.graph, self.k)

    def s_signature(self, x: int) -> tuple[frozenset[int], frozenset[int]]:
        g = self.graph
        return (
            g.signed_neighbors(x, Sign.POSITIVE) & self.S,
            g.signed_neighbors(x, Sign.NEGATIVE) & self.S,
        )

    def s_neighbors(self, xs: Iterable[int]) -> frozenset[int]:
        return self.graph.set_neighbors(xs) & self.S

    def check_invariant(self) -> None:
        if not is_negative_clique_forest(self.rest):
            raise InvariantViolation("G - S is no longer a clique-forest without positive edges")

    def step(self, step: TraceStep) -> "RuleContext":
        g, k = step.apply(self.graph, self.k)
        nxt = max([self.next_id - 1, *step.added], default=self.next_id - 1) + 1
        out = RuleContext(g, k, self.S, self.trace.append(step), nxt)
        out.check_invariant()
        return out


def _block(ctx: RuleContext, C: Iterable[int], rule: str) -> tuple[int, frozenset[int]]:
    C = frozenset(C)
    try:
        return ctx.blocks.index(C), C
    except ValueError:
        raise RuleNotApplicable(rule, "C is not a block of G - S") from None


def apply_rule8(ctx: RuleContext, C: Iterable[int], X: Iterable[int]) -> RuleContext:
    """Two interior twins (w.r.t. S) of a large enough class are deleted; k unchanged."""
    i, C = _block(ctx, C, "R8")
    X = frozenset(X)
    if not X or not X <= ctx.blocks.interior[i]:
        raise RuleNotApplicable("R8", "X is not a non-empty subset of interior(C)")
    sigs = {ctx.s_signature(x) for x in X}
    if len(sigs) != 1:
        raise RuleNotApplicable("R8", "vertices of X differ in their signed S-neighbourhoods")
    ns = len(ctx.s_neighbors(X))
    if not 2 * len(X) > len(C) + ns:
        raise RuleNotApplicable("R8", "|X| <= (|V(C)| + |N(X) & S|)/2")
    if not len(C) + ns >= 2:
        raise RuleNotApplicable("R8", "(|V(C)| + |N(X) & S|)/2 < 1")
    if ctx.graph.n <= 2:
        # pt of the empty graph breaks the slack bookkeeping
        raise RuleNotApplicable("R8", "would delete the whole graph")
    x1, x2 = sorted(X)[:2]
    return ctx.step(TraceStep(RuleId.R8, removed=(x1, x2), info={"block": sorted(C), "X": sorted(X)}))


def apply_rule9(ctx: RuleContext, C: Iterable[int], X: Iterable[int]) -> RuleContext:
    """Even block with half of it interior and S-free: delete one vertex, k - 1."""
    i, C = _block(ctx, C, "R9")
    X = frozenset(X)
    if len(C) % 2:
        raise RuleNotApplicable("R9", "|V(C)| is odd")
    if not X <= ctx.blocks.interior[i]:
        raise RuleNotApplicable("R9", "X is not a subset of interior(C)")
    if 2 * len(X) != len(C):
        raise RuleNotApplicable("R9", "|X| != |V(C)|/2")
    if ctx.s_neighbors(X):
        raise RuleNotApplicable("R9", "N(X) & S is not empty")
    x = min(X)
    return ctx.step(TraceStep(RuleId.R9, removed=(x,), delta_k=1, info={"block": sorted(C), "X": sorted(X)}))


def rule10_center(ctx: RuleContext, C: frozenset[int]) -> int | None:
    """Smallest ``u`` of a 3-vertex block whose whole neighbourhood is the other two."""
    if len(C) != 3:
        return None
    for u in sorted(C):
        if ctx.graph.neighbors(u) == C - {u}:
            return u
    return None


def apply_rule10(ctx: RuleContext, C: Iterable[int], u: int | None = None) -> RuleContext:
    """Triangle block with a degree-2 vertex ``u``.

    If ``{x, y}`` is a bridge of ``G - u`` the triangle collapses into a fresh
    vertex ``z`` inheriting the signed outside neighbourhood of ``x`` and ``y``
    (k unchanged); otherwise ``u`` and the edge ``{x, y}`` go and k drops by 1.
    """
    _, C = _block(ctx, C, "R10")
    if len(C) != 3:
        raise RuleNotApplicable("R10", "block does not have exactly three vertices")
    if u is None:
        u = rule10_center(ctx, C)
        if u is None:
            raise RuleNotApplicable("R10", "no vertex u of C with N(u) = C - u")
    elif u not in C or ctx.graph.neighbors(u) != C - {u}:
        raise RuleNotApplicable("R10", "N(u) != C - u")
    x, y = sorted(C - {u})
    g = ctx.graph
    xy_edges = tuple(e for e in g.sorted_edges if e[0] == x and e[1] == y)
    h = g.remove_vertices([u]).remove_edges(xy_edges)
    if _reachable(h, x, y):
        return ctx.step(
            TraceStep(RuleId.R10B, removed=(u,), removed_edges=xy_edges, delta_k=1,
                      info={"block": sorted(C), "u": u})
        )
    gu = g.remove_vertices([u])
    z = ctx.next_id
    new_edges = tuple(sorted(
        [(min(z, w), max(z, w), Sign.POSITIVE) for w in gu.set_neighbors([x, y], Sign.POSITIVE)]
        + [(min(z, w), max(z, w), Sign.NEGATIVE) for w in gu.set_neighbors([x, y], Sign.NEGATIVE)]
    ))
    return ctx.step(
        TraceStep(RuleId.R10A, removed=(x, y, u), added=(z,), added_edges=new_edges,
                  info={"block": sorted(C), "u": u})
    )


def _reachable(g: SignedGraph, a: int, b: int) -> bool:
    seen, stack = {a}, [a]
    while stack:
        v = stack.pop()
        if v == b:
            return True
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def rule11_value(ctx: RuleContext, T: frozenset[int], s: int) -> int:
    """``4*beta - 4*pt`` of ``G[T + s]`` via weighted max cut on the clique-forest ``T``."""
    g = ctx.graph
    w1 = {x: 1 for x in g.signed_neighbors(s, Sign.POSITIVE) & T}
    w2 = {x: 1 for x in g.signed_neighbors(s, Sign.NEGATIVE) & T}
    beta_ts = mcwv_cliqueforest(g.subgraph(T), w1, w2)
    return 4 * beta_ts - pt(g.subgraph(T | {s})).q


def apply_rule11(ctx: RuleContext, T: Iterable[int], s: int) -> RuleContext:
    """Delete a component ``T`` of ``G - S`` hanging from the single ``s`` in S; k - p."""
    T = frozenset(T)
    if T not in connected_components(ctx.rest):
        raise RuleNotApplicable("R11", "T is not a connected component of G - S")
    if ctx.s_neighbors(T) != {s}:
        raise RuleNotApplicable("R11", "N(T) & S != {s}")
    p = rule11_value(ctx, T, s)
    return ctx.step(TraceStep(RuleId.R11, removed=tuple(sorted(T)), delta_k=p, info={"s": s, "p": p}))


# ---------------------------------------------------------------------------
# applicability search


def applicable_instances(ctx: RuleContext) -> Iterator[tuple[RuleId, dict]]:
    """All rule instances in the fixed scan order R8, R9, R10, R11.

    Blocks and components are visited by ascending smallest vertex; R8/R9
    candidates come from the classes of interior vertices sharing the same
    signed S-neighbourhood, trimmed to the smallest admissible prefix.
    """
    bd = ctx.blocks
    for i, C in enumerate(bd.blocks):
        classes: dict = {}
        for x in sorted(bd.interior[i]):
            classes.setdefault(ctx.s_signature(x), []).append(x)
        for sig, xs in sorted(classes.items(), key=lambda kv: kv[1][0]):
            ns = len(sig[0] | sig[1])
            need = (len(C) + ns) // 2 + 1
            if len(C) + ns >= 2 and len(xs) >= need and ctx.graph.n > 2:
                yield RuleId.R8, {"C": C, "X": frozenset(xs[:need])}
    for i, C in enumerate(bd.blocks):
        if len(C) % 2:
            continue
        free = [x for x in sorted(bd.interior[i]) if not ctx.s_neighbors([x])]
        if len(free) >= len(C) // 2:
            yield RuleId.R9, {"C": C, "X": frozenset(free[: len(C) // 2])}
    for C in bd.blocks:
        u = rule10_center(ctx, C)
        if u is not None:
            yield RuleId.R10A, {"C": C, "u": u}
    for T in connected_components(ctx.rest):
        ns = ctx.s_neighbors(T)
        if len(ns) == 1:
            yield RuleId.R11, {"T": T, "s": next(iter(ns))}


def find_applicable(ctx: RuleContext) -> tuple[RuleId, dict] | None:
    """First applicable rule instance, or ``None`` when the context is reduced.

    R10 is reported as ``R10a``; which branch fires is decided on application.
    """
    return next(applicable_instances(ctx), None)


def apply_found(ctx: RuleContext, rule: RuleId, args: dict) -> RuleContext:
    if rule == RuleId.R8:
        return apply_rule8(ctx, args["C"], args["X"])
    if rule == RuleId.R9:
        return apply_rule9(ctx, args["C"], args["X"])
    if rule in (RuleId.R10A, RuleId.R10B):
        return apply_rule10(ctx, args["C"], args.get("u"))
    if rule == RuleId.R11:
        return apply_rule11(ctx, args["T"], args["s"])
    raise ValueError(f"not a kernel rule: {rule}")


def reduce_exhaustively(ctx: RuleContext, stop_at_nonpositive_k: bool = True) -> RuleContext:
    while not (stop_at_nonpositive_k and ctx.k <= 0):
        found = find_applicable(ctx)
        if found is None:
            break
        ctx = apply_found(ctx, *found)
    return ctx
