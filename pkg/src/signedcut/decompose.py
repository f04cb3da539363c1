"""One-way reductions and the split into ``S`` plus a negative clique-forest.

``decompose`` either certifies YES (accumulated credit reaches ``k``) or
returns a set ``S`` with ``|S| <= 3k`` such that ``G - S`` is a clique-forest
without positive edges.  It works on a shrinking copy ``H`` of the graph:

* ``CliquePeel`` (two-way): a component ``C`` of ``H - v`` with ``H[C + v]`` an
  all-negative clique is deleted; credit 1 when ``|C|`` is odd, else 0.  The
  peeled vertices stay outside ``S``; they hang from single vertices, so they
  are clique blocks of ``G - S``.
* ``RuleA`` on a pendant whose edge is positive (two-way, credit 1); the
  pendant goes to ``S``.
* ``CreditedSet`` (one-way): a connected ``X`` with ``H - X`` connected and
  ``4 beta(H[X]) - 4 pt(H[X]) - 1 >= 1``.  Triples are tried first, inside
  the deepest leaf blocks first; larger sets must satisfy ``|X| <= 3 * credit``
  so that ``|S|`` stays below ``3k``.

* ``Absorb`` (last resort, no credit): the smallest lexicographic ``Y`` with
  ``H - Y`` a negative clique-forest is moved to ``S`` when ``|S| + |Y| <= 3k``.

Anything else raises :class:`DecompositionStuck` with the residual graph.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import networkx as nx

from .graph import (
    Instance,
    Sign,
    SignedGraph,
    _blocks_of,
    connected_components,
    is_clique,
    is_connected,
    is_negative_clique_forest,
)
from .oracle import beta, pt
from .rules import RuleNotApplicable
from .trace import RuleId, RuleTrace, TraceStep

DEFAULT_MAX_SET = 6


class DecompositionStuck(RuntimeError):
    def __init__(self, residual: SignedGraph, trace: RuleTrace, removed: frozenset[int]):
        super().__init__(
            f"decomposition stuck: residual graph with n={residual.n}, m={residual.m} "
            "is not a negative clique-forest and admits no credited deletion"
        )
        self.residual = residual
        self.trace = trace
        self.removed = removed


# ---------------------------------------------------------------------------
# single rules


def rule6plus_step(g: SignedGraph, v: int, leaves: Iterable[int]) -> TraceStep:
    leaves = tuple(sorted(set(leaves)))
    c = len(leaves)
    if c < 2:
        raise RuleNotApplicable("Rule6Plus", "fewer than two leaves")
    if v in leaves or v not in g:
        raise RuleNotApplicable("Rule6Plus", "v must be a vertex distinct from the leaves")
    if not set(leaves) <= g.neighbors(v):
        raise RuleNotApplicable("Rule6Plus", "leaves are not all neighbours of v")
    if any(g.has_edge(a, b) for a, b in itertools.combinations(leaves, 2)):
        raise RuleNotApplicable("Rule6Plus", "leaves are not pairwise non-adjacent")
    rest = g.remove_vertices((v, *leaves))
    if rest.n == 0:
        raise RuleNotApplicable("Rule6Plus", "remainder is empty")
    if not is_connected(rest):
        raise RuleNotApplicable("Rule6Plus", "remainder is disconnected")
    return TraceStep(RuleId.RULE6PLUS, removed=tuple(sorted((v, *leaves))), delta_k=c - 1,
                     info={"center": v, "leaves": list(leaves)})


def apply_rule6plus(inst: Instance, v: int, leaves: Iterable[int]) -> Instance:
    """Delete a star ``v + leaves`` with connected remainder; ``k' = k - c + 1`` (one-way)."""
    return rule6plus_step(inst.graph, v, leaves).apply_to(inst)


def rulea_step(g: SignedGraph, v: int) -> TraceStep:
    if v not in g or g.degree(v) != 1:
        raise RuleNotApplicable("RuleA", "deg(v) != 1")
    if g.n < 2:
        raise RuleNotApplicable("RuleA", "graph has fewer than two vertices")
    return TraceStep(RuleId.RULEA, removed=(v,), delta_k=1)


def apply_ruleA(inst: Instance, v: int) -> Instance:
    """Delete a degree-1 vertex; ``k' = k - 1`` (two-way)."""
    return rulea_step(inst.graph, v).apply_to(inst)


def credit_of_set(g: SignedGraph, X: Iterable[int]) -> int | None:
    """k-gain ``4 beta(G[X]) - 4 pt(G[X]) - 1`` of deleting ``X``, or None if not positive.

    Preconditions: ``G``, ``G[X]`` and the non-empty ``G - X`` all connected.
    """
    X = frozenset(X)
    if not is_connected(g):
        raise ValueError("G must be connected")
    gx = g.subgraph(X)
    if not is_connected(gx):
        raise ValueError("G[X] must be connected")
    rest = g.remove_vertices(X)
    if rest.n == 0 or not is_connected(rest):
        raise ValueError("G - X must be connected and non-empty")
    credit = _raw_credit(gx)
    return credit if credit > 0 else None


def _raw_credit(gx: SignedGraph) -> int:
    return 4 * beta(gx) - pt(gx).q - 1


def credited_set_step(g: SignedGraph, X: Iterable[int]) -> TraceStep:
    X = frozenset(X)
    credit = credit_of_set(g, X)
    if credit is None:
        raise RuleNotApplicable("CreditedSet", "credit is not positive")
    gx = g.subgraph(X)
    return TraceStep(RuleId.CREDITED_SET, removed=tuple(sorted(X)), delta_k=credit,
                     info={"beta_q": 4 * beta(gx), "pt_q": pt(gx).q})


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class DecompositionOutcome:
    yes: bool
    trace: RuleTrace
    credit: int
    S: frozenset[int] = frozenset()
    residual: SignedGraph | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def kind(self) -> str:
        return "YES" if self.yes else "S"


_S_RULES = (RuleId.RULEA, RuleId.CREDITED_SET, RuleId.RULE6PLUS, RuleId.ABSORB)
ABSORB_SUBSET_LIMIT = 200_000


def decompose(inst: Instance, max_set_size: int = DEFAULT_MAX_SET) -> DecompositionOutcome:
    g = inst.graph
    if not is_connected(g):
        raise ValueError("decompose needs a connected graph")
    h = g
    trace = RuleTrace()
    credit = 0
    S: set[int] = set()
    while True:
        if credit >= inst.k:
            return DecompositionOutcome(True, trace, credit)
        if is_negative_clique_forest(h):
            S_ = frozenset(S)
            residual = g.remove_vertices(S_)
            if len(S_) > 3 * max(inst.k, 0) or not is_negative_clique_forest(residual):
                raise AssertionError("decomposition produced an invalid S")
            return DecompositionOutcome(False, trace, credit, S_, residual)
        step = _next_step(h, max_set_size)
        if step is None:
            step = _find_absorb(h, 3 * inst.k - len(S))
        if step is None:
            raise DecompositionStuck(h, trace, frozenset(g.vertices) - frozenset(h.vertices))
        h, _ = step.apply(h, 0)
        trace = trace.append(step)
        credit += step.delta_k
        if step.rule in _S_RULES:
            S.update(step.removed)


def _next_step(h: SignedGraph, max_set_size: int) -> TraceStep | None:
    return (
        _find_peel(h)
        or _find_positive_pendant(h)
        or _find_credited_set(h, max_set_size)
    )


def _find_peel(h: SignedGraph) -> TraceStep | None:
    for v in sorted(nx.articulation_points(h.to_networkx())):
        sub = h.remove_vertices([v])
        for C in connected_components(sub):
            piece = h.subgraph(C | {v})
            if not piece.has_positive_edge and is_clique(piece, piece.vertices):
                return TraceStep(RuleId.CLIQUE_PEEL, removed=tuple(sorted(C)),
                                 delta_k=len(C) % 2, info={"attach": v})
    return None


def _find_positive_pendant(h: SignedGraph) -> TraceStep | None:
    if h.n < 2:
        return None
    for v in h.vertices:
        if h.degree(v) == 1 and h.incident(v)[0][1] == Sign.POSITIVE:
            return rulea_step(h, v)
    return None


def _connected_without(h: SignedGraph, X: frozenset[int]) -> bool:
    rest = [v for v in h.vertices if v not in X]
    if not rest:
        return False
    seen = {rest[0]}
    queue = deque([rest[0]])
    while queue:
        v = queue.popleft()
        for w in h.neighbors(v):
            if w not in X and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(rest)


def _leaf_blocks_deepest_first(h: SignedGraph) -> list[frozenset[int]]:
    blocks = [b for b in _blocks_of(h) if len(b) >= 3]
    if not blocks:
        return []
    all_blocks = _blocks_of(h)
    member: dict[int, list[int]] = {}
    for i, b in enumerate(all_blocks):
        for v in b:
            member.setdefault(v, []).append(i)
    root = member[min(h.vertices)][0]
    depth = {root: 0}
    queue = deque([root])
    while queue:
        i = queue.popleft()
        for v in all_blocks[i]:
            for j in member[v]:
                if j not in depth:
                    depth[j] = depth[i] + 1
                    queue.append(j)
    leaves = [i for i, b in enumerate(all_blocks)
              if len(b) >= 3 and sum(1 for v in b if len(member[v]) > 1) <= 1]
    leaves.sort(key=lambda i: (-depth[i], min(all_blocks[i])))
    return [all_blocks[i] for i in leaves]


def _connected_triples(h: SignedGraph, within: frozenset[int] | None = None) -> Iterator[frozenset[int]]:
    vs = sorted(within) if within is not None else list(h.vertices)
    for a, b, c in itertools.combinations(vs, 3):
        adj = h.has_edge(a, b) + h.has_edge(a, c) + h.has_edge(b, c)
        if adj >= 2:
            yield frozenset((a, b, c))


def _connected_subsets(h: SignedGraph, size: int) -> Iterator[frozenset[int]]:
    # extension-set enumeration: each connected set is produced once, rooted at its minimum
    for root in h.vertices:
        ext = {w for w in h.neighbors(root) if w > root}
        yield from _extend(h, frozenset([root]), ext, root, size)


def _extend(h, current, ext, root, size):
    if len(current) == size:
        yield current
        return
    ext = set(ext)
    while ext:
        w = min(ext)
        ext.discard(w)
        nbhd = set()
        for x in current:
            nbhd |= h.neighbors(x)
        new_ext = ext | {u for u in h.neighbors(w) if u > root and u not in current and u not in nbhd}
        yield from _extend(h, current | {w}, new_ext, root, size)


def _find_credited_set(h: SignedGraph, max_set_size: int) -> TraceStep | None:
    tried: set[frozenset[int]] = set()
    sources = [_connected_triples(h, b) for b in _leaf_blocks_deepest_first(h)]
    sources.append(_connected_triples(h))
    for source in sources:
        for X in source:
            if X in tried:
                continue
            tried.add(X)
            step = _try_set(h, X, 3)
            if step is not None:
                return step
    for size in range(4, max_set_size + 1):
        if size >= h.n:
            break
        for X in _connected_subsets(h, size):
            step = _try_set(h, X, size)
            if step is not None:
                return step
    return None


def _try_set(h: SignedGraph, X: frozenset[int], size: int) -> TraceStep | None:
    if not _connected_without(h, X):
        return None
    gx = h.subgraph(X)
    credit = _raw_credit(gx)
    if credit < 1 or size > 3 * credit:
        return None
    return TraceStep(RuleId.CREDITED_SET, removed=tuple(sorted(X)), delta_k=credit,
                     info={"beta_q": 4 * beta(gx), "pt_q": pt(gx).q})


def _find_absorb(h: SignedGraph, budget: int) -> TraceStep | None:
    seen = 0
    for size in range(1, min(budget, h.n) + 1):
        for Y in itertools.combinations(h.vertices, size):
            seen += 1
            if seen > ABSORB_SUBSET_LIMIT:
                return None
            if is_negative_clique_forest(h.remove_vertices(Y)):
                return TraceStep(RuleId.ABSORB, removed=Y, delta_k=0)
    return None
