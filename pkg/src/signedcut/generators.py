"""Seeded instance generators, the hardness transforms and the 1*-split solver."""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field

import networkx as nx
import numpy as np

from .graph import Instance, Sign, SignedGraph, is_connected, verify_dsplit, verify_partition
from .oracle import StructureError


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    """Everything needed to regenerate a graph; equal specs give equal graphs."""

    family: str
    n: int = 0
    r: int = 0
    l: int = 0
    sizes: tuple[int, ...] = ()
    d: int = 0
    k_size: int = 0
    i_size: int = 0
    p_edge: float = 0.5
    p_pos: float = 0.0
    seed: int = 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["sizes"] = list(self.sizes)
        return out


@dataclass(frozen=True)
class Generated:
    graph: SignedGraph
    independent: tuple[frozenset[int], ...] = ()
    cliques: tuple[frozenset[int], ...] = ()
    meta: dict = field(default_factory=dict, compare=False)


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.uint64(seed & (2**64 - 1)))


def _sign(rng: np.random.Generator, p_pos: float) -> Sign:
    return Sign.POSITIVE if rng.random() < p_pos else Sign.NEGATIVE


def gen_negative_clique(n: int) -> SignedGraph:
    if n < 3 or n % 2 == 0:
        raise GeneratorError("negative clique fixture needs an odd n >= 3")
    return SignedGraph.from_edges(n, [(i, j, Sign.NEGATIVE) for i, j in itertools.combinations(range(n), 2)])


def _patch_connectivity(n, edges, allowed, rng, p_pos):
    """Join components with random allowed edges until connected."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((u, v) for u, v, _ in edges)
    comps = [sorted(c) for c in nx.connected_components(g)]
    comps.sort()
    while len(comps) > 1:
        a = comps[0]
        options = [(u, v) for u in a for c in comps[1:] for v in c if allowed(u, v)]
        if not options:
            raise GeneratorError("cannot connect the graph without breaking the class")
        u, v = options[int(rng.integers(len(options)))]
        edges.append((min(u, v), max(u, v), _sign(rng, p_pos)))
        g.add_edge(u, v)
        comps = sorted(sorted(c) for c in nx.connected_components(g))
    return edges


def random_signed_graph(n: int, p_edge: float, p_pos: float, seed: int) -> SignedGraph:
    """Erdos-Renyi signed graph, patched to be connected."""
    if n < 1:
        raise GeneratorError("n must be positive")
    rng = _rng(seed)
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p_edge:
            edges.append((u, v, _sign(rng, p_pos)))
    edges = _patch_connectivity(n, edges, lambda u, v: True, rng, p_pos)
    return SignedGraph.from_edges(n, edges)


def gen_rl(r: int, l: int, independent_sizes, clique_sizes, p_edge: float, p_pos: float, seed: int) -> Generated:
    """Graph with ``r`` planted independent sets and ``l`` planted cliques.

    Vertices are numbered part by part, independent sets first.  Cross-part
    edges appear with probability ``p_edge``; every sign is positive with
    probability ``p_pos``.
    """
    independent_sizes, clique_sizes = list(independent_sizes), list(clique_sizes)
    if len(independent_sizes) != r or len(clique_sizes) != l:
        raise GeneratorError("need one size per part")
    if any(s < 0 for s in independent_sizes + clique_sizes):
        raise GeneratorError("part sizes must be non-negative")
    n = sum(independent_sizes) + sum(clique_sizes)
    if n == 0:
        raise GeneratorError("all part sizes are zero")
    rng = _rng(seed)
    part = []
    for idx, s in enumerate(independent_sizes + clique_sizes):
        part += [idx] * s
    is_clique_part = [False] * r + [True] * l
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if part[u] == part[v]:
            if is_clique_part[part[u]]:
                edges.append((u, v, _sign(rng, p_pos)))
        elif rng.random() < p_edge:
            edges.append((u, v, _sign(rng, p_pos)))
    edges = _patch_connectivity(n, edges, lambda u, v: part[u] != part[v], rng, p_pos)
    g = SignedGraph.from_edges(n, edges)
    groups = [frozenset(v for v in range(n) if part[v] == i) for i in range(r + l)]
    out = Generated(g, tuple(groups[:r]), tuple(groups[r:]), {"r": r, "l": l, "seed": seed})
    problems = verify_partition(g, out.independent, out.cliques)
    if problems:
        raise AssertionError(f"generated rl graph fails its own partition: {problems}")
    return out


def gen_split(k_size: int, i_size: int, p_edge: float, p_pos: float, seed: int) -> Generated:
    return gen_rl(1, 1, [i_size], [k_size], p_edge, p_pos, seed)


def gen_dsplit(d: int, k_size: int, i_size: int, p_pos: float, seed: int) -> Generated:
    """d*-split graph: negative clique ``K = 0..k_size-1`` and independent set ``I``.

    Each independent vertex gets between 1 and ``d`` clique neighbours; clique
    vertices left without an independent neighbour receive a fresh pendant.
    """
    if d < 1:
        raise GeneratorError("d must be at least 1")
    if k_size < 1:
        raise GeneratorError("the clique side must be non-empty")
    rng = _rng(seed)
    K = list(range(k_size))
    edges = [(u, v, Sign.NEGATIVE) for u, v in itertools.combinations(K, 2)]
    covered = set()
    nxt = k_size
    for _ in range(i_size):
        deg = int(rng.integers(1, min(d, k_size) + 1))
        for w in sorted(rng.choice(k_size, size=deg, replace=False).tolist()):
            edges.append((w, nxt, _sign(rng, p_pos)))
            covered.add(w)
        nxt += 1
    for w in K:
        if w not in covered:
            edges.append((w, nxt, _sign(rng, p_pos)))
            nxt += 1
    g = SignedGraph.from_edges(nxt, edges)
    I = frozenset(range(k_size, nxt))
    problems = verify_dsplit(g, K, I, d)
    if problems:
        raise AssertionError(f"generated d*-split graph fails its own check: {problems}")
    return Generated(g, (I,), (frozenset(K),), {"d": d, "seed": seed, "repaired": nxt - k_size - i_size})


def transform_double(g: SignedGraph) -> SignedGraph:
    """Two disjoint copies; copy two is shifted by ``n``."""
    h, _ = g.relabeled()
    n = h.n
    edges = list(h.edges) + [(u + n, v + n, s) for u, v, s in h.edges]
    return SignedGraph.from_edges(2 * n, edges)


def transform_bodlaender(g: SignedGraph) -> Generated:
    """All-negative clique on ``V`` plus one degree-2 vertex per non-edge of ``G``.

    Signs of ``G`` are ignored.  Returns the graph with its partition
    (``K = V``, ``I`` = non-edge vertices).
    """
    h, _ = g.relabeled()
    n = h.n
    for v in range(n):
        if len(h.neighbors(v)) == n - 1:
            raise GeneratorError(f"vertex {v} is universal")
    edges = [(u, v, Sign.NEGATIVE) for u, v in itertools.combinations(range(n), 2)]
    nxt = n
    for u, v in itertools.combinations(range(n), 2):
        if not h.has_edge(u, v):
            edges += [(u, nxt, Sign.NEGATIVE), (v, nxt, Sign.NEGATIVE)]
            nxt += 1
    H = SignedGraph.from_edges(nxt, edges)
    return Generated(H, (frozenset(range(n, nxt)),), (frozenset(range(n)),), {"non_edges": nxt - n})


def solve_1star_split(g: SignedGraph, K, I) -> tuple[int, dict[int, int]]:
    """Exact optimum for a 1*-split graph with an all-negative clique side.

    The clique is split as evenly as possible and every pendant is placed so
    that its edge is consistent.
    """
    K, I = sorted(K), frozenset(I)
    problems = verify_dsplit(g, K, I, 1)
    if problems:
        raise StructureError("; ".join(problems))
    for u, v in itertools.combinations(K, 2):
        if g.has_edge(u, v, Sign.POSITIVE):
            raise StructureError("clique side has a positive edge")
    side = {v: 1 + (i % 2) for i, v in enumerate(K)}
    for x in sorted(I):
        ((w, s),) = g.incident(x)
        side[x] = side[w] if s == Sign.POSITIVE else 3 - side[w]
    q = len(K)
    return (q // 2) * (q - q // 2) + len(I), side


def generate(spec: GenSpec) -> Generated:
    """Dispatch a :class:`GenSpec` to its generator."""
    f = spec.family.replace("-", "_")
    if f == "negative_clique":
        return Generated(gen_negative_clique(spec.n))
    if f == "random_signed":
        return Generated(random_signed_graph(spec.n, spec.p_edge, spec.p_pos, spec.seed))
    if f == "split":
        return gen_split(spec.k_size, spec.i_size, spec.p_edge, spec.p_pos, spec.seed)
    if f == "rl":
        sizes = list(spec.sizes)
        if len(sizes) != spec.r + spec.l:
            raise GeneratorError("rl needs r + l part sizes")
        return gen_rl(spec.r, spec.l, sizes[: spec.r], sizes[spec.r:], spec.p_edge, spec.p_pos, spec.seed)
    if f == "dsplit":
        return gen_dsplit(spec.d, spec.k_size, spec.i_size, spec.p_pos, spec.seed)
    if f == "double":
        return Generated(transform_double(random_signed_graph(spec.n, spec.p_edge, 0.0, spec.seed)))
    if f == "bodlaender_split":
        return transform_bodlaender(random_signed_graph(spec.n, spec.p_edge, 0.0, spec.seed))
    raise GeneratorError(f"unknown family {spec.family!r}")


# ---------------------------------------------------------------------------
# corpora


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    instance: Instance
    kind: str = "general"
    independent: tuple[frozenset[int], ...] = ()
    cliques: tuple[frozenset[int], ...] = ()
    d: int = 0


def standard_corpus(seed: int = 2024, per_family: int = 60, max_n: int = 11) -> list[CorpusEntry]:
    """Mixed corpus of small connected instances with ``k`` in 1..4."""
    rng = _rng(seed)
    out: list[CorpusEntry] = []

    def ks():
        return int(rng.integers(1, 5))

    for n in (3, 5, 7, 9, 11):
        if n <= max_n:
            out.append(CorpusEntry(f"negclique-{n}", Instance(gen_negative_clique(n), 1)))
    for i in range(per_family):
        n = int(rng.integers(2, max_n + 1))
        p = float(rng.choice([0.15, 0.3, 0.5, 0.8]))
        pp = float(rng.choice([0.0, 0.2, 0.5]))
        g = random_signed_graph(n, p, pp, int(rng.integers(2**63)))
        out.append(CorpusEntry(f"random-{i}", Instance(g, ks())))
    for i in range(per_family):
        ksz = int(rng.integers(1, 6))
        isz = int(rng.integers(1, max(2, max_n - ksz + 1)))
        gen = gen_split(ksz, isz, float(rng.choice([0.2, 0.5])), float(rng.choice([0.0, 0.3])),
                        int(rng.integers(2**63)))
        out.append(CorpusEntry(f"split-{i}", Instance(gen.graph, ks()), "split", gen.independent, gen.cliques))
    for i in range(per_family):
        a, b, c = (int(x) for x in rng.integers(1, 4, size=3))
        if a + b + c > max_n:
            c = max(1, max_n - a - b)
        gen = gen_rl(2, 1, [a, b], [c], float(rng.choice([0.3, 0.6])), float(rng.choice([0.0, 0.3])),
                     int(rng.integers(2**63)))
        out.append(CorpusEntry(f"rl21-{i}", Instance(gen.graph, ks()), "rl", gen.independent, gen.cliques))
    for i in range(per_family):
        d = int(rng.integers(1, 4))
        ksz = int(rng.integers(1, 5))
        isz = int(rng.integers(0, max(1, max_n - ksz - 1)))
        gen = gen_dsplit(d, ksz, isz, float(rng.choice([0.0, 0.3])), int(rng.integers(2**63)))
        if gen.graph.n > max_n:
            continue
        out.append(CorpusEntry(f"dsplit-{i}", Instance(gen.graph, ks()), "dsplit", gen.independent,
                               gen.cliques, d))
    for e in out:
        if not is_connected(e.instance.graph):
            raise AssertionError(f"corpus entry {e.name} is disconnected")
    return out


def random_clique_forest(n: int, seed: int, max_block: int = 4, p_new_tree: float = 0.15) -> SignedGraph:
    """Random all-negative clique-forest on ``0..n-1`` (possibly disconnected)."""
    if n < 1:
        raise GeneratorError("n must be positive")
    rng = _rng(seed)
    edges = []
    placed = [0]
    while len(placed) < n:
        size = int(rng.integers(2, max_block + 1))
        size = min(size, n - len(placed) + 1)
        fresh = list(range(len(placed), len(placed) + size - 1))
        if rng.random() < p_new_tree:
            # start a new component: the block is all fresh vertices
            members = fresh
        else:
            members = [placed[int(rng.integers(len(placed)))]] + fresh
        edges += [(u, v, Sign.NEGATIVE) for u, v in itertools.combinations(sorted(members), 2)]
        placed += fresh
    return SignedGraph.from_edges(n, edges)


def random_rule_setting(seed: int, n_max: int = 10) -> tuple[SignedGraph, frozenset[int]]:
    """Connected graph with a set ``S`` such that ``G - S`` is a negative clique-forest."""
    rng = _rng(seed)
    s = int(rng.integers(1, 4))
    f = int(rng.integers(1, n_max - s + 1))
    forest = random_clique_forest(f, int(rng.integers(2**63)), max_block=int(rng.integers(2, 6)))
    S = list(range(f, f + s))
    p_att = float(rng.choice([0.1, 0.25, 0.5]))
    p_pos = float(rng.choice([0.0, 0.3, 0.6]))
    edges = list(forest.edges)
    for x in S:
        for v in range(f):
            if rng.random() < p_att:
                edges.append((v, x, _sign(rng, p_pos)))
    for x, y in itertools.combinations(S, 2):
        if rng.random() < 0.5:
            edges.append((x, y, _sign(rng, p_pos)))
    n = f + s
    # patching may only add edges touching S, so G - S keeps its shape
    edges = _patch_connectivity(n, edges, lambda u, v: u >= f or v >= f, rng, p_pos)
    return SignedGraph.from_edges(n, edges), frozenset(S)
