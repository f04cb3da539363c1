"""Exact ground truth: balance, beta(G), the Poljak-Turzik bound and weighted max cut.

Everything that mixes ``m/2``, ``(n-t)/4`` and ``k/4`` is kept in integer
quarter units, so the decision ``beta >= pt + k/4`` becomes ``4*beta >= 4*pt + k``.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .graph import (
    Sign,
    SignedGraph,
    _blocks_of,
    connected_components,
    is_connected,
    is_clique,
)

DEFAULT_CAP = 24
CAP_ENV = "SIGNEDCUT_ORACLE_CAP"

# rows * columns of the per-chunk bit matrix
_CHUNK_CELLS = 1 << 22


class OracleCapExceeded(RuntimeError):
    pass


class StructureError(ValueError):
    """An input violates a structural precondition (e.g. not a clique-forest)."""


def oracle_cap() -> int:
    return int(os.environ.get(CAP_ENV, DEFAULT_CAP))


def _check_cap(n: int, cap: int | None) -> None:
    cap = oracle_cap() if cap is None else cap
    if n > cap:
        raise OracleCapExceeded(
            f"exact oracle refuses n={n} > cap {cap} (set {CAP_ENV} to override)"
        )


@dataclass(frozen=True, order=True)
class QuarterValue:
    """An edge-count expression scaled by 4 (``q == 4 * value``)."""

    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.q, 4)

    def __float__(self) -> float:
        return self.q / 4

    def __add__(self, other: "QuarterValue") -> "QuarterValue":
        return QuarterValue(self.q + other.q)

    def __sub__(self, other: "QuarterValue") -> "QuarterValue":
        return QuarterValue(self.q - other.q)


def pt(g: SignedGraph) -> QuarterValue:
    """Poljak-Turzik bound ``m/2 + (n - t)/4`` in quarter units."""
    t = len(connected_components(g))
    return QuarterValue(2 * g.m + g.n - t)


def consistent_edge_count(g: SignedGraph, side: Mapping[int, int]) -> int:
    """Edges kept by the balanced subgraph induced by a side assignment (sides 1/2)."""
    count = 0
    for u, v, s in g.edges:
        same = side[u] == side[v]
        if same == (s == Sign.POSITIVE):
            count += 1
    return count


def _edge_arrays(g: SignedGraph):
    pos = {v: i for i, v in enumerate(g.vertices)}
    es = g.sorted_edges
    U = np.fromiter((pos[u] for u, _, _ in es), dtype=np.intp, count=len(es))
    V = np.fromiter((pos[v] for _, v, _ in es), dtype=np.intp, count=len(es))
    P = np.fromiter((s == Sign.POSITIVE for _, _, s in es), dtype=np.uint8, count=len(es))
    return U, V, P


def _bit_rows(n: int, start: int, stop: int) -> np.ndarray:
    # vertex at position i reads bit (n-1-i): ascending row index is then
    # lexicographic order over (side[v0], side[v1], ...)
    x = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((x[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def _rows_to_assignment(g: SignedGraph, row: int) -> dict[int, int]:
    n = g.n
    return {v: 1 + ((row >> (n - 1 - i)) & 1) for i, v in enumerate(g.vertices)}


def beta_exact(g: SignedGraph, cap: int | None = None) -> tuple[int, dict[int, int]]:
    """Maximum balanced subgraph size and the lexicographically smallest optimum.

    The first vertex is pinned to side 1 and the remaining ``2**(n-1)``
    assignments are scanned in chunks.
    """
    _check_cap(g.n, cap)
    if g.n == 0:
        return 0, {}
    U, V, P = _edge_arrays(g)
    total = 1 << (g.n - 1)
    step = max(1, _CHUNK_CELLS // max(g.m + g.n, 1))
    best, best_row = -1, 0
    for start in range(0, total, step):
        bits = _bit_rows(g.n, start, min(total, start + step))
        score = (bits[:, U] ^ bits[:, V] ^ P).sum(axis=1, dtype=np.int64)
        i = int(np.argmax(score))
        if score[i] > best:
            best, best_row = int(score[i]), start + i
    return best, _rows_to_assignment(g, best_row)


def beta(g: SignedGraph, cap: int | None = None) -> int:
    return beta_exact(g, cap)[0]


def slack_quarters(g: SignedGraph, cap: int | None = None) -> int:
    """``4*beta(G) - 4*pt(G)``: the largest ``k`` for which ``(G, k)`` is a YES-instance."""
    return 4 * beta(g, cap) - pt(g).q


def answer_exact(g: SignedGraph, k: int, cap: int | None = None) -> bool:
    """Decide ``beta(G) >= m/2 + (n-1)/4 + k/4`` for a connected ``G``."""
    if not is_connected(g):
        raise ValueError("answer_exact needs a connected graph")
    return 4 * beta(g, cap) >= 2 * g.m + g.n - 1 + k


# ---------------------------------------------------------------------------
# balance


@dataclass(frozen=True)
class BalanceCertificate:
    balanced: bool
    assignment: dict[int, int] | None = None
    cycle: tuple[tuple[int, int, Sign], ...] | None = None

    def verify(self, g: SignedGraph) -> bool:
        if self.balanced:
            return (
                self.assignment is not None
                and set(self.assignment) == set(g.vertices)
                and consistent_edge_count(g, self.assignment) == g.m
            )
        if not self.cycle:
            return False
        walk = [(u, v) for u, v, _ in self.cycle]
        if any((min(u, v), max(u, v), s) not in g.edges for u, v, s in self.cycle):
            return False
        closed = all(walk[i][1] == walk[(i + 1) % len(walk)][0] for i in range(len(walk)))
        negatives = sum(1 for *_, s in self.cycle if s == Sign.NEGATIVE)
        return closed and negatives % 2 == 1


def is_balanced(g: SignedGraph) -> BalanceCertificate:
    """Parity 2-colouring by BFS; on the first conflict return a negative cycle.

    The cycle is given as oriented edges ``(a, b, sign)`` forming a closed walk.
    """
    side: dict[int, int] = {}
    parent: dict[int, tuple[int, Sign] | None] = {}
    depth: dict[int, int] = {}
    for root in g.vertices:
        if root in side:
            continue
        side[root], parent[root], depth[root] = 1, None, 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w, s in g.incident(u):
                want = side[u] if s == Sign.POSITIVE else 3 - side[u]
                if w not in side:
                    side[w], parent[w], depth[w] = want, (u, s), depth[u] + 1
                    queue.append(w)
                elif side[w] != want:
                    return BalanceCertificate(False, cycle=_conflict_cycle(u, w, s, parent, depth))
    return BalanceCertificate(True, assignment=side)


def _conflict_cycle(u, w, s, parent, depth):
    # tree paths u -> lca and w -> lca, closed by the conflicting edge (u, w)
    left, right = [], []
    a, b = u, w
    while depth[a] > depth[b]:
        p, sa = parent[a]
        left.append((a, p, sa))
        a = p
    while depth[b] > depth[a]:
        p, sb = parent[b]
        right.append((b, p, sb))
        b = p
    while a != b:
        p, sa = parent[a]
        left.append((a, p, sa))
        a = p
        q, sb = parent[b]
        right.append((b, q, sb))
        b = q
    # walk: u -> ... -> lca -> ... -> w -> u
    back = [(y, x, sg) for x, y, sg in reversed(right)]
    return tuple(left + back + [(w, u, s)])


# ---------------------------------------------------------------------------
# Max Cut with Weighted Vertices


def _weights(g: SignedGraph, w: Mapping[int, int] | None) -> np.ndarray:
    w = w or {}
    return np.array([int(w.get(v, 0)) for v in g.vertices], dtype=np.int64)


def mcwv_exact(
    t: SignedGraph,
    w1: Mapping[int, int] | None = None,
    w2: Mapping[int, int] | None = None,
    cap: int | None = None,
) -> int:
    """Brute-force ``max_f sum_edges |f(x)-f(y)| + sum_{f=1} w1 + sum_{f=2} w2``."""
    _check_cap(t.n, cap)
    if t.n == 0:
        return 0
    U, V, _ = _edge_arrays(t)
    a1, a2 = _weights(t, w1), _weights(t, w2)
    total = 1 << t.n
    step = max(1, _CHUNK_CELLS // max(t.m + t.n, 1))
    best = None
    for start in range(0, total, step):
        bits = _bit_rows(t.n, start, min(total, start + step))
        cut = (bits[:, U] ^ bits[:, V]).sum(axis=1, dtype=np.int64)
        on2 = bits.astype(np.int64)
        score = cut + (1 - on2) @ a1 + on2 @ a2
        top = int(score.max())
        best = top if best is None else max(best, top)
    return best


def mcwv_cliqueforest(
    t: SignedGraph,
    w1: Mapping[int, int] | None = None,
    w2: Mapping[int, int] | None = None,
) -> int:
    """Weighted max cut on a negative clique-forest by DP over the block-cut tree.

    For a clique block of size ``q`` with ``a`` vertices on side 1 the block
    contributes ``a * (q - a)`` cut edges, so once the parent cut vertex is
    placed, only the number of children sent to side 1 matters; the best
    children for that count are the ones with the largest side-1 advantage.
    """
    all_blocks = _blocks_of(t)
    if t.has_positive_edge or not all(is_clique(t, b) for b in all_blocks):
        raise StructureError("mcwv_cliqueforest needs a clique-forest without positive edges")
    w1 = w1 or {}
    w2 = w2 or {}
    blocks = [b for b in all_blocks if len(b) > 1]
    member: dict[int, list[int]] = {v: [] for v in t.vertices}
    for i, b in enumerate(blocks):
        for v in b:
            member[v].append(i)

    seen_v: set[int] = set()
    seen_b: set[int] = set()
    child_blocks: dict[int, list[int]] = {}
    total = 0
    for root in t.vertices:
        if root in seen_v:
            continue
        order = []
        queue = deque([root])
        seen_v.add(root)
        while queue:
            v = queue.popleft()
            order.append(v)
            child_blocks[v] = []
            for bi in member[v]:
                if bi in seen_b:
                    continue
                seen_b.add(bi)
                child_blocks[v].append(bi)
                for c in sorted(blocks[bi] - {v}):
                    seen_v.add(c)
                    queue.append(c)
        val: dict[int, tuple[int, int]] = {}
        for v in reversed(order):
            on1, on2 = int(w1.get(v, 0)), int(w2.get(v, 0))
            for bi in child_blocks[v]:
                kids = [val[c] for c in blocks[bi] if c != v]
                on1 += _best_block(kids, parent_on_1=True)
                on2 += _best_block(kids, parent_on_1=False)
            val[v] = (on1, on2)
        total += max(val[root])
    return total


def _best_block(kids: list[tuple[int, int]], parent_on_1: bool) -> int:
    q = len(kids) + 1
    base = sum(b for _, b in kids)
    gains = sorted((a - b for a, b in kids), reverse=True)
    best = None
    run = 0
    for j in range(len(kids) + 1):
        if j:
            run += gains[j - 1]
        a = j + (1 if parent_on_1 else 0)
        value = base + run + a * (q - a)
        if best is None or value > best:
            best = value
    return best


# ---------------------------------------------------------------------------
# subadditivity of beta over a vertex bipartition


@dataclass(frozen=True)
class LemmaReport:
    beta_g: int
    beta_u: int
    beta_w: int
    cross_edges: int
    k1: int
    k2: int
    c1: int
    c2: int
    pt_g: int
    split_holds: bool
    slack_holds: bool

    @property
    def holds(self) -> bool:
        return self.split_holds and self.slack_holds


def verify_lemma_beta(g: SignedGraph, U: Iterable[int], cap: int | None = None) -> LemmaReport:
    """Check ``beta(G) >= beta(G[U]) + beta(G[W]) + |E(U,W)|/2`` and its slack form.

    The slack form: with ``k_i = 4 beta - 4 pt`` of each side and ``c_i`` its
    component count, ``4 beta(G) >= 4 pt(G) + k1 + k2 - (c1 + c2 - 1)``.
    """
    U = frozenset(U)
    W = frozenset(g.vertices) - U
    if not U or not W or not U <= set(g.vertices):
        raise ValueError("U must be a non-empty proper subset of V(G)")
    if not is_connected(g):
        raise ValueError("G must be connected")
    gu, gw = g.subgraph(U), g.subgraph(W)
    bg, bu, bw = beta(g, cap), beta(gu, cap), beta(gw, cap)
    cross = g.edges_between(U, W)
    k1, k2 = 4 * bu - pt(gu).q, 4 * bw - pt(gw).q
    c1, c2 = len(connected_components(gu)), len(connected_components(gw))
    ptg = pt(g).q
    return LemmaReport(
        beta_g=bg,
        beta_u=bu,
        beta_w=bw,
        cross_edges=cross,
        k1=k1,
        k2=k2,
        c1=c1,
        c2=c2,
        pt_g=ptg,
        split_holds=4 * bg >= 4 * bu + 4 * bw + 2 * cross,
        slack_holds=4 * bg >= ptg + k1 + k2 - (c1 + c2 - 1),
    )
