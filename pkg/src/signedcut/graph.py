"""Signed graphs, the ``sgraph`` text format and block structure.

A :class:`SignedGraph` is immutable.  Vertices are non-negative integers kept
in ascending order; graphs read from disk always use the dense ids
``0..n-1`` but reductions may delete vertices or add fresh ones, so labels are
not required to stay dense.  Serialization relabels to dense ids by rank.

A vertex pair may carry one positive and one negative edge at the same time
(the replacement vertex of one of the kernel rules can inherit both signs);
``m`` counts such a pair twice.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import Iterable

import networkx as nx


class Sign(IntEnum):
    NEGATIVE = -1
    POSITIVE = 1

    @property
    def symbol(self) -> str:
        return "+" if self is Sign.POSITIVE else "-"

    @classmethod
    def parse(cls, token: str) -> "Sign":
        if token == "+":
            return cls.POSITIVE
        if token == "-":
            return cls.NEGATIVE
        raise ValueError(f"bad sign {token!r}")


Edge = tuple[int, int, Sign]


class GraphFormatError(ValueError):
    """Raised for malformed ``sgraph`` input; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _normalize_edge(u: int, v: int, s) -> Edge:
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    if u > v:
        u, v = v, u
    return (int(u), int(v), Sign(s))


@dataclass(frozen=True)
class SignedGraph:
    vertices: tuple[int, ...]
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        vs = tuple(sorted(set(self.vertices)))
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        object.__setattr__(self, "vertices", vs)
        vset = set(vs)
        es = frozenset(self.edges)
        for u, v, s in es:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u > v or u not in vset or v not in vset or not isinstance(s, Sign):
                raise ValueError(f"malformed edge {(u, v, s)}")
        object.__setattr__(self, "edges", es)

    # -- construction -------------------------------------------------
    @classmethod
    def from_edges(cls, vertices: int | Iterable[int], edges: Iterable) -> "SignedGraph":
        """Build a graph; ``vertices`` is either a count ``n`` or an id iterable.

        Edges are ``(u, v, sign)`` with sign a :class:`Sign`, ``+1``/``-1``
        or ``"+"``/``"-"``.  Duplicate same-sign edges and loops raise.
        """
        vs = tuple(range(vertices)) if isinstance(vertices, int) else tuple(vertices)
        seen: set[Edge] = set()
        for u, v, s in edges:
            if isinstance(s, str):
                s = Sign.parse(s)
            e = _normalize_edge(u, v, s)
            if e in seen:
                raise ValueError(f"duplicate edge {e[0]} {e[1]} {e[2].symbol}")
            seen.add(e)
        return cls(vs, frozenset(seen))

    # -- basic queries ------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def _adj(self) -> dict[int, tuple[tuple[int, Sign], ...]]:
        adj: dict[int, list] = {v: [] for v in self.vertices}
        for u, v, s in self.sorted_edges:
            adj[u].append((v, s))
            adj[v].append((u, s))
        return {v: tuple(sorted(a)) for v, a in adj.items()}

    @cached_property
    def _nbrs(self) -> dict[int, frozenset[int]]:
        return {v: frozenset(w for w, _ in a) for v, a in self._adj.items()}

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def incident(self, v: int) -> tuple[tuple[int, Sign], ...]:
        return self._adj[v]

    def neighbors(self, v: int) -> frozenset[int]:
        return self._nbrs[v]

    def signed_neighbors(self, v: int, sign: Sign) -> frozenset[int]:
        return frozenset(w for w, s in self._adj[v] if s == sign)

    def degree(self, v: int) -> int:
        """Number of incident signed edges (an opposite-sign pair counts twice)."""
        return len(self._adj[v])

    def set_neighbors(self, xs: Iterable[int], sign: Sign | None = None) -> frozenset[int]:
        """Neighbors of the vertex set ``xs`` outside ``xs``, optionally by sign."""
        xs = set(xs)
        out = set()
        for x in xs:
            for w, s in self._adj[x]:
                if w not in xs and (sign is None or s == sign):
                    out.add(w)
        return frozenset(out)

    def has_edge(self, u: int, v: int, sign: Sign | None = None) -> bool:
        if sign is None:
            return v in self._nbrs.get(u, ())
        u, v = min(u, v), max(u, v)
        return (u, v, sign) in self.edges

    def edges_between(self, us: Iterable[int], ws: Iterable[int]) -> int:
        us, ws = set(us), set(ws)
        return sum(1 for u, v, _ in self.edges if (u in us and v in ws) or (u in ws and v in us))

    @property
    def has_positive_edge(self) -> bool:
        return any(s == Sign.POSITIVE for _, _, s in self.edges)

    # -- derived graphs -----------------------------------------------
    def subgraph(self, keep: Iterable[int]) -> "SignedGraph":
        keep = set(keep)
        return SignedGraph(
            tuple(v for v in self.vertices if v in keep),
            frozenset(e for e in self.edges if e[0] in keep and e[1] in keep),
        )

    def remove_vertices(self, drop: Iterable[int]) -> "SignedGraph":
        drop = set(drop)
        return self.subgraph(v for v in self.vertices if v not in drop)

    def remove_edges(self, drop: Iterable[Edge]) -> "SignedGraph":
        drop = {_normalize_edge(*e) for e in drop}
        return SignedGraph(self.vertices, self.edges - drop)

    def add_vertex(self, v: int, edges: Iterable = ()) -> "SignedGraph":
        if v in self:
            raise ValueError(f"vertex {v} already present")
        new = {_normalize_edge(a, b, s) for a, b, s in edges}
        return SignedGraph(self.vertices + (v,), self.edges | new)

    def relabeled(self) -> tuple["SignedGraph", dict[int, int]]:
        """Dense copy with ids ``0..n-1`` assigned by rank, plus the old->new map."""
        rank = {v: i for i, v in enumerate(self.vertices)}
        es = frozenset((rank[u], rank[v], s) for u, v, s in self.edges)
        return SignedGraph(tuple(range(self.n)), es), rank

    def with_all_signs(self, sign: Sign) -> "SignedGraph":
        return SignedGraph(self.vertices, frozenset((u, v, sign) for u, v, _ in self.edges))

    def to_networkx(self) -> nx.Graph:
        """Underlying simple graph; signs and opposite-sign pairs collapse."""
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((u, v) for u, v, _ in self.edges)
        return g

    def __repr__(self) -> str:
        es = " ".join(f"{u}{s.symbol}{v}" for u, v, s in self.sorted_edges)
        return f"SignedGraph(n={self.n}, m={self.m}: {es})"


# ---------------------------------------------------------------------------
# text format


def load_graph(text: str | bytes) -> SignedGraph:
    """Parse the ``sgraph`` text format.

    Header ``p sgraph <n> <m>``, then ``m`` edge lines ``e <u> <v> <+|->``;
    lines starting with ``c`` are comments.  Endpoints are accepted in either
    order.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = m = None
    seen: set[Edge] = set()
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphFormatError(lineno, "second header line")
            if len(parts) != 4 or parts[1] != "sgraph":
                raise GraphFormatError(lineno, "expected 'p sgraph <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(lineno, "non-integer vertex or edge count") from None
            if n < 0 or m < 0:
                raise GraphFormatError(lineno, "negative count")
            continue
        if parts[0] != "e":
            raise GraphFormatError(lineno, f"unknown line type {parts[0]!r}")
        if n is None:
            raise GraphFormatError(lineno, "edge before header")
        if len(parts) != 4:
            raise GraphFormatError(lineno, "expected 'e <u> <v> <+|->'")
        try:
            u, v = int(parts[1]), int(parts[2])
            s = Sign.parse(parts[3])
        except ValueError as exc:
            raise GraphFormatError(lineno, str(exc)) from None
        if u == v:
            raise GraphFormatError(lineno, f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(lineno, f"vertex id out of range 0..{n - 1}")
        e = _normalize_edge(u, v, s)
        if e in seen:
            raise GraphFormatError(lineno, f"duplicate edge {e[0]} {e[1]} {s.symbol}")
        seen.add(e)
    if n is None:
        raise GraphFormatError(0, "missing header")
    if len(seen) != m:
        raise GraphFormatError(0, f"header announces {m} edges, found {len(seen)}")
    return SignedGraph(tuple(range(n)), frozenset(seen))


def dump_graph(g: SignedGraph, comments: Iterable[str] = ()) -> str:
    """Canonical text: dense ids, edges sorted by ``(u, v, sign)``."""
    dense, _ = g.relabeled()
    lines = [f"c {c}" for c in comments]
    lines.append(f"p sgraph {dense.n} {dense.m}")
    lines += [f"e {u} {v} {s.symbol}" for u, v, s in dense.sorted_edges]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# connectivity and blocks


def connected_components(g: SignedGraph) -> list[frozenset[int]]:
    comps = [frozenset(c) for c in nx.connected_components(g.to_networkx())]
    return sorted(comps, key=min)


def is_connected(g: SignedGraph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


def _blocks_of(g: SignedGraph) -> list[frozenset[int]]:
    nxg = g.to_networkx()
    blocks = [frozenset(b) for b in nx.biconnected_components(nxg)]
    # isolated vertices are trivial one-vertex blocks
    blocks += [frozenset([v]) for v in g.vertices if nxg.degree(v) == 0]
    return sorted(blocks, key=lambda b: tuple(sorted(b)))


@dataclass(frozen=True)
class BlockDecomposition:
    """Blocks of ``G - S`` with the interior/exterior classification.

    ``interior[i]`` and ``exterior[i]`` belong to ``blocks[i]``; block-valued
    fields (``path_blocks``, ``leaf_blocks``) hold indices into ``blocks``.
    """

    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    interior: tuple[frozenset[int], ...]
    exterior: tuple[frozenset[int], ...]
    path_blocks: frozenset[int]
    path_vertices: frozenset[int]
    leaf_blocks: frozenset[int]
    S: frozenset[int] = frozenset()

    def index(self, block: Iterable[int]) -> int:
        return self.blocks.index(frozenset(block))

    def blocks_of_vertex(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]

    @property
    def non_path_blocks(self) -> list[int]:
        return [i for i in range(len(self.blocks)) if i not in self.path_blocks]


def block_decomposition(g: SignedGraph, S: Iterable[int] = ()) -> BlockDecomposition:
    S = frozenset(S)
    if not S <= set(g.vertices):
        raise ValueError("S must be a subset of V(G)")
    rest = g.remove_vertices(S)
    blocks = tuple(_blocks_of(rest))
    count: dict[int, int] = {}
    for b in blocks:
        for v in b:
            count[v] = count.get(v, 0) + 1
    cut = frozenset(v for v, c in count.items() if c > 1)
    interior, exterior = [], []
    for b in blocks:
        inside = frozenset(x for x in b if rest.neighbors(x) <= b)
        interior.append(inside)
        exterior.append(b - inside)
    path_blocks = frozenset(
        i for i, b in enumerate(blocks) if len(b) == 2 and exterior[i] == b
    )
    member: dict[int, list[int]] = {}
    for i, b in enumerate(blocks):
        for v in b:
            member.setdefault(v, []).append(i)
    path_vertices = frozenset(
        v for v, bs in member.items() if all(i in path_blocks for i in bs)
    )
    leaf_blocks = frozenset(i for i in range(len(blocks)) if len(exterior[i]) <= 1)
    return BlockDecomposition(
        blocks=blocks,
        cut_vertices=cut,
        interior=tuple(interior),
        exterior=tuple(exterior),
        path_blocks=path_blocks,
        path_vertices=path_vertices,
        leaf_blocks=leaf_blocks,
        S=S,
    )


def is_clique(g: SignedGraph, vs: Iterable[int]) -> bool:
    vs = list(vs)
    return all(g.has_edge(a, b) for i, a in enumerate(vs) for b in vs[i + 1:])


def is_negative_clique_forest(g: SignedGraph) -> bool:
    """True iff ``g`` has no positive edge and every block induces a clique."""
    if g.has_positive_edge:
        return False
    return all(is_clique(g, b) for b in _blocks_of(g))


def switch(g: SignedGraph, U: Iterable[int]) -> SignedGraph:
    """Flip the sign of every edge with exactly one endpoint in ``U``."""
    U = set(U)
    if not U <= set(g.vertices):
        raise ValueError("U must be a subset of V(G)")
    out = set()
    for u, v, s in g.edges:
        if (u in U) != (v in U):
            s = Sign(-s)
        out.add((u, v, s))
    if len(out) != len(g.edges):  # cannot happen: the flip is a bijection per pair
        raise AssertionError("switching collapsed an edge pair")
    return SignedGraph(g.vertices, frozenset(out))


def induced_is_split(g: SignedGraph, K: Iterable[int], I: Iterable[int]) -> bool:
    K, I = set(K), set(I)
    return K.isdisjoint(I) and K | I == set(g.vertices) and is_clique(g, K) and not any(
        g.has_edge(a, b) for a in I for b in I if a < b
    )


def verify_partition(
    g: SignedGraph,
    independent: Iterable[Iterable[int]] = (),
    cliques: Iterable[Iterable[int]] = (),
) -> list[str]:
    """Structural check of a planted (independent sets, cliques) partition.

    Returns a list of problems; empty means the partition is valid.
    """
    problems = []
    parts = [("I", frozenset(p)) for p in independent] + [("K", frozenset(p)) for p in cliques]
    covered: set[int] = set()
    for kind, p in parts:
        if covered & p:
            problems.append(f"{kind}-part {sorted(p)} overlaps another part")
        covered |= p
        if kind == "I" and any(g.has_edge(a, b) for a in p for b in p if a < b):
            problems.append(f"independent set {sorted(p)} induces an edge")
        if kind == "K" and not is_clique(g, p):
            problems.append(f"clique {sorted(p)} is not complete")
    if covered != set(g.vertices):
        problems.append("parts do not cover V(G)")
    return problems


def verify_dsplit(g: SignedGraph, K: Iterable[int], I: Iterable[int], d: int) -> list[str]:
    K, I = frozenset(K), frozenset(I)
    problems = verify_partition(g, [I], [K])
    for x in sorted(I):
        if len(g.neighbors(x)) > d:
            problems.append(f"I-vertex {x} has {len(g.neighbors(x))} neighbors > {d}")
    for v in sorted(K):
        if not g.neighbors(v) & I:
            problems.append(f"K-vertex {v} has no neighbor in I")
    return problems



@dataclass(frozen=True)
class Instance:
    """A connected signed graph with the parameter ``k`` (``k <= 0`` means YES)."""

    graph: SignedGraph
    k: int
