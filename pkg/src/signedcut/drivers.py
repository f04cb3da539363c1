"""Kernelization pipelines, YES-threshold checks and kernel size bounds."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .decompose import DEFAULT_MAX_SET, DecompositionOutcome, decompose, rule6plus_step, rulea_step
from .graph import (
    Instance,
    SignedGraph,
    connected_components,
    is_connected,
    verify_dsplit,
    verify_partition,
)
from .rules import RuleContext, apply_found, find_applicable
from .trace import RuleId, RuleTrace, TraceStep


class PartitionError(ValueError):
    pass


class KernelBoundViolation(AssertionError):
    pass


class CertificateError(RuntimeError):
    def __init__(self, message: str, state: dict):
        super().__init__(f"{message}; state={state}")
        self.state = state


# ---------------------------------------------------------------------------
# graph classes


@dataclass(frozen=True)
class ClassSpec:
    """Graph class of an instance, optionally with a planted partition.

    ``kind`` is one of ``general``, ``split``, ``rl`` and ``dsplit``.  For
    ``rl`` the partition is ``independent`` (at most ``r`` sets) plus
    ``cliques`` (at most ``l``); for ``split``/``dsplit`` it is one clique
    ``K`` and one independent set ``I``.  Without a partition the class is
    trusted and size assertions that need it are skipped.
    """

    kind: str = "general"
    r: int = 0
    l: int = 0
    d: int = 0
    independent: tuple[frozenset[int], ...] = ()
    cliques: tuple[frozenset[int], ...] = ()
    planted: bool = False

    @classmethod
    def general(cls) -> "ClassSpec":
        return cls()

    @classmethod
    def split(cls, K: Iterable[int] | None = None, I: Iterable[int] | None = None) -> "ClassSpec":
        if K is None:
            return cls("split", r=1, l=1)
        return cls("split", 1, 1, 0, (frozenset(I),), (frozenset(K),), True)

    @classmethod
    def rl(cls, r: int, l: int, independent=None, cliques=None) -> "ClassSpec":
        if independent is None and cliques is None:
            return cls("rl", r, l)
        ind = tuple(frozenset(p) for p in independent or ())
        cl = tuple(frozenset(p) for p in cliques or ())
        if len(ind) > r or len(cl) > l:
            raise PartitionError("more parts than (r, l) allows")
        return cls("rl", r, l, 0, ind, cl, True)

    @classmethod
    def dsplit(cls, d: int, K: Iterable[int] | None = None, I: Iterable[int] | None = None) -> "ClassSpec":
        if K is None:
            return cls("dsplit", 1, 1, d)
        return cls("dsplit", 1, 1, d, (frozenset(I),), (frozenset(K),), True)

    def problems(self, g: SignedGraph) -> list[str]:
        if not self.planted:
            return []
        if self.kind == "dsplit":
            return verify_dsplit(g, self.cliques[0], self.independent[0], self.d)
        return verify_partition(g, self.independent, self.cliques)

    def verify(self, g: SignedGraph) -> None:
        problems = self.problems(g)
        if problems:
            raise PartitionError("; ".join(problems))


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class BoundCheck:
    """``observed`` against ``threshold``.

    For YES-threshold checks ``triggered`` means the instance was certified;
    for recorded bounds ``triggered`` means the bound was exceeded.
    """

    name: str
    threshold: int
    observed: int
    triggered: bool
    armed: bool = True

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "threshold": self.threshold,
            "observed": self.observed,
            "triggered": self.triggered,
            "armed": self.armed,
        }


@dataclass(frozen=True)
class Counters:
    non_path_blocks: int = 0
    path_vertices: int = 0
    long_path_vertices: int = 0
    exterior_vertices: int = 0
    interior_attachment: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class KernelReport:
    outcome: str  # "YES" or "kernel"
    original: Instance
    kernel_instance: Instance | None
    trace: RuleTrace
    s_size: int
    S: frozenset[int] = frozenset()
    counters: Counters = field(default_factory=Counters)
    bound_checks: list[BoundCheck] = field(default_factory=list)
    reason: str = ""
    decomposition: DecompositionOutcome | None = None
    notes: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def is_yes(self) -> bool:
        return self.outcome == "YES"

    def replay_matches(self) -> bool:
        if self.kernel_instance is None:
            return True
        return self.trace.replay(self.original) == self.kernel_instance

    def to_dict(self) -> dict:
        from .graph import dump_graph

        kern = None
        if self.kernel_instance is not None:
            kg = self.kernel_instance.graph
            kern = {"n": kg.n, "m": kg.m, "k": self.kernel_instance.k, "graph": dump_graph(kg)}
        dec = None
        if self.decomposition is not None:
            dec = {
                "kind": self.decomposition.kind,
                "credit": self.decomposition.credit,
                "S": sorted(self.decomposition.S),
                "trace": self.decomposition.trace.to_list(),
            }
        return {
            "outcome": self.outcome,
            "reason": self.reason,
            "input": {"n": self.original.graph.n, "m": self.original.graph.m, "k": self.original.k},
            "kernel": kern,
            "s_size": self.s_size,
            "S": sorted(self.S),
            "trace": self.trace.to_list(),
            "decomposition": dec,
            "counters": self.counters.to_dict(),
            "bound_checks": [b.to_dict() for b in self.bound_checks],
            "notes": list(self.notes),
            "timings": dict(self.timings),
        }


# ---------------------------------------------------------------------------
# YES-threshold checks on a context reduced under the kernel rules


def _attachments(ctx: RuleContext) -> list[int]:
    bd = ctx.blocks
    return [len(ctx.s_neighbors(bd.interior[i])) for i in range(len(bd.blocks))]


def check_interior_attachment_threshold(ctx: RuleContext) -> BoundCheck:
    """Sum over non-path blocks of ``|N(C_int) & S|`` against ``|S|(2|S| - 3 + 2k) + 1``."""
    att = _attachments(ctx)
    total = sum(att[i] for i in ctx.blocks.non_path_blocks)
    s = len(ctx.S)
    rhs = s * (2 * s - 3 + 2 * ctx.k) + 1
    armed = s > 0 and rhs >= 1
    return BoundCheck("interior_attachment_yes", rhs, total, armed and total >= rhs, armed)


def check_block_size_threshold(ctx: RuleContext, i: int) -> BoundCheck:
    """Block ``i`` against ``2|C_ext| + |N(C_int) & S| (2|S| + 2k + 1)``."""
    bd = ctx.blocks
    a = len(ctx.s_neighbors(bd.interior[i]))
    rhs = 2 * len(bd.exterior[i]) + a * (2 * len(ctx.S) + 2 * ctx.k + 1)
    armed = len(ctx.S) > 0 and rhs >= 1
    size = len(bd.blocks[i])
    return BoundCheck(f"block_size_yes[{min(bd.blocks[i])}]", rhs, size, armed and size >= rhs, armed)


def long_path_vertex_count(ctx: RuleContext) -> int:
    """Path vertices lying in components of ``G[P]`` with at least three vertices."""
    P = ctx.blocks.path_vertices
    if not P:
        return 0
    comps = connected_components(ctx.graph.subgraph(P))
    return sum(len(c) for c in comps if len(c) >= 3)


def check_path_vertex_budget(ctx: RuleContext, k: int | None = None) -> BoundCheck:
    """YES once ``p/3 - 192k^2 + 1 >= k``, i.e. ``p >= 576k^2 + 3k - 3``."""
    k = ctx.k if k is None else k
    p = long_path_vertex_count(ctx)
    rhs = 576 * k * k + 3 * k - 3
    return BoundCheck("path_vertex_yes", rhs, p, p - 576 * k * k + 3 >= 3 * k)


def _counters(ctx: RuleContext) -> Counters:
    bd = ctx.blocks
    att = _attachments(ctx)
    npb = bd.non_path_blocks
    ext: set[int] = set()
    for i in npb:
        ext |= bd.exterior[i]
    return Counters(
        non_path_blocks=len(npb),
        path_vertices=len(bd.path_vertices),
        long_path_vertices=long_path_vertex_count(ctx),
        exterior_vertices=len(ext),
        interior_attachment=sum(att[i] for i in npb),
    )


def _recorded_bounds(ctx: RuleContext, counters: Counters, k: int) -> list[BoundCheck]:
    bd = ctx.blocks
    att = _attachments(ctx)
    worst = 0
    for i in range(len(bd.blocks)):
        excess = len(bd.blocks[i]) - (2 * len(bd.exterior[i]) + att[i] * (8 * k + 1))
        worst = max(worst, excess)
    return [
        BoundCheck("interior_attachment<=3k(8k-3)", 3 * k * (8 * k - 3), counters.interior_attachment,
                   counters.interior_attachment > 3 * k * (8 * k - 3)),
        BoundCheck("non_path_blocks<=6k(8k-3)", 6 * k * (8 * k - 3), counters.non_path_blocks,
                   counters.non_path_blocks > 6 * k * (8 * k - 3)),
        BoundCheck("exterior_vertices<=12k(8k-3)", 12 * k * (8 * k - 3), counters.exterior_vertices,
                   counters.exterior_vertices > 12 * k * (8 * k - 3)),
        BoundCheck("block_excess<=0", 0, worst, worst > 0),
        BoundCheck("long_path_vertices<=576k^2+3k-3", 576 * k * k + 3 * k - 3,
                   counters.long_path_vertices, counters.long_path_vertices > 576 * k * k + 3 * k - 3),
    ]


# ---------------------------------------------------------------------------
# pipelines


def kernelize(
    inst: Instance,
    spec: ClassSpec | None = None,
    max_set_size: int = DEFAULT_MAX_SET,
) -> KernelReport:
    """Decompose, then apply the kernel rules exhaustively relative to ``S``.

    The YES thresholds are evaluated once the rules reach their fixpoint, in
    the order interior attachment, block size, path-vertex budget.
    Raises :class:`~signedcut.decompose.DecompositionStuck` if no ``S`` is found.
    """
    spec = spec or ClassSpec.general()
    g = inst.graph
    if not is_connected(g):
        raise ValueError("kernelize needs a connected graph")
    if inst.k < 1:
        raise ValueError("k must be positive")
    spec.verify(g)
    timings: dict[str, float] = {}

    if spec.kind == "dsplit" and g.n >= 4 * (spec.d + 1) * inst.k:
        return KernelReport("YES", inst, None, RuleTrace(), 0, reason="dsplit_linear_threshold",
                            bound_checks=[BoundCheck("dsplit_n>=4(d+1)k", 4 * (spec.d + 1) * inst.k, g.n, True)])

    t0 = time.perf_counter()
    dec = decompose(inst, max_set_size=max_set_size)
    timings["decompose"] = time.perf_counter() - t0
    if dec.yes:
        return KernelReport("YES", inst, None, RuleTrace(), 0, reason="decompose",
                            decomposition=dec, timings=timings)

    notes: list[str] = []
    t0 = time.perf_counter()
    ctx = RuleContext(g, inst.k, dec.S)
    reason = ""
    while True:
        ctx = _drop_isolated(ctx, notes)
        if ctx.k <= 0:
            reason = "k<=0"
            break
        found = find_applicable(ctx)
        if found is None:
            break
        ctx = apply_found(ctx, *found)
    timings["rules"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    checks: list[BoundCheck] = []
    if not reason:
        checks.append(check_interior_attachment_threshold(ctx))
        if not checks[-1].triggered:
            for i in range(len(ctx.blocks.blocks)):
                c = check_block_size_threshold(ctx, i)
                if c.triggered:
                    checks.append(c)
                    break
        if not checks[-1].triggered:
            checks.append(check_path_vertex_budget(ctx))
        if checks[-1].triggered:
            reason = checks[-1].name
    counters = _counters(ctx)
    checks += _recorded_bounds(ctx, counters, inst.k)
    timings["checks"] = time.perf_counter() - t0

    if any(s.info.get("parallel_pair") for s in ctx.trace):
        notes.append("kernel contains an opposite-sign parallel pair")
    common = dict(
        original=inst,
        trace=ctx.trace,
        s_size=len(dec.S),
        S=dec.S,
        counters=counters,
        bound_checks=checks,
        decomposition=dec,
        notes=notes,
        timings=timings,
    )
    if reason:
        return KernelReport("YES", kernel_instance=None, reason=reason, **common)
    if not is_connected(ctx.graph):
        raise AssertionError(f"kernel rules disconnected the graph: {inst.graph} S={sorted(dec.S)} trace={[(s.rule.value, s.removed) for s in ctx.trace]} -> {ctx.graph}")
    return KernelReport("kernel", kernel_instance=ctx.instance, reason="reduced", **common)


def _drop_isolated(ctx: RuleContext, notes: list[str]) -> RuleContext:
    # isolated vertices of G - S without S-neighbours contribute nothing to a cut
    if ctx.graph.n < 2:
        return ctx
    bd = ctx.blocks
    for i, b in enumerate(bd.blocks):
        if len(b) == 1 and not ctx.s_neighbors(b):
            notes.append(
                "dropped an S-free isolated vertex with k unchanged (pt moves by 1/4)"
            )
            return _drop_isolated(ctx.step(TraceStep(RuleId.ISOLATED_DROP, removed=tuple(b))), notes)
    return ctx


def kernel_size_bound(spec: ClassSpec, k: int) -> int | None:
    if spec.kind == "split":
        return 168 * k * k - 48 * k
    if spec.kind == "rl":
        g = (2 * spec.r + 9 * spec.l) * 3 * k * (8 * k + 1)
        return 3 * k + g + 18 * k * (8 * k - 3) + (576 * k * k + 3 * k - 3)
    if spec.kind == "dsplit":
        return 4 * (spec.d + 1) * k - 1
    return None


def assert_kernel_size(report: KernelReport, spec: ClassSpec) -> BoundCheck:
    """Kernel vertex count against the class bound for the original ``k``."""
    if report.outcome != "kernel" or report.kernel_instance is None:
        raise ValueError("assert_kernel_size needs a kernel outcome")
    k = report.original.k
    bound = kernel_size_bound(spec, k)
    if bound is None:
        raise ValueError(f"no size bound for class {spec.kind!r}")
    n = report.kernel_instance.graph.n
    check = BoundCheck(f"kernel_size[{spec.kind}]", bound, n, n > bound)
    if check.triggered:
        raise KernelBoundViolation(f"kernel has {n} vertices > bound {bound} for {spec.kind}, k={k}")
    return check


def linear_kernel_dsplit(inst: Instance, d: int, K: Iterable[int] | None = None,
                         I: Iterable[int] | None = None) -> KernelReport:
    """YES when ``n >= 4(d+1)k``; otherwise the input itself is the kernel."""
    if d < 1:
        raise ValueError("d must be at least 1")
    g = inst.graph
    notes = []
    if K is not None:
        problems = verify_dsplit(g, K, I, d)
        if problems:
            raise PartitionError("; ".join(problems))
    else:
        notes.append("d*-split membership trusted, no partition supplied")
    threshold = 4 * (d + 1) * inst.k
    check = BoundCheck("dsplit_n>=4(d+1)k", threshold, g.n, g.n >= threshold)
    if check.triggered:
        return KernelReport("YES", inst, None, RuleTrace(), 0, bound_checks=[check],
                            reason="dsplit_linear_threshold", notes=notes)
    if not g.n < threshold:
        raise AssertionError("linear kernel larger than 4(d+1)k")
    return KernelReport("kernel", inst, inst, RuleTrace(), 0, bound_checks=[check],
                        reason="below_threshold", notes=notes)


# ---------------------------------------------------------------------------
# YES certificates for d*-split graphs


def certificate_clique_side(inst: Instance, K: Iterable[int], I: Iterable[int], d: int) -> RuleTrace:
    """Rule 6+/Rule A sequence reaching ``k' <= 0`` when ``|K| >= (d+1)k``.

    1. a clique vertex with ``c >= 2`` independent neighbours is removed with
       them (Rule 6+, ``k - c + 1``), repeatedly;
    2. degree-1 vertices are removed (Rule A);
    3. a clique vertex ``v`` with a single independent neighbour ``u`` is
       removed with ``u`` and a clique vertex ``w`` not adjacent to ``u``
       (Rule 6+ on the path ``u - v - w``), then back to 2.
    """
    K, I = set(K), set(I)
    if len(K) < (d + 1) * inst.k:
        raise ValueError(f"|K| = {len(K)} < (d+1)k = {(d + 1) * inst.k}")
    g, k = inst.graph, inst.k
    steps: list[TraceStep] = []

    def state():
        return {"n": g.n, "k": k, "K": sorted(K & set(g.vertices)), "I": sorted(I & set(g.vertices))}

    def run(step):
        nonlocal g, k
        g, k = step.apply(g, k)
        steps.append(step)

    while k > 0:
        v = next((v for v in sorted(K) if v in g and len(g.neighbors(v) & I) >= 2), None)
        if v is None:
            break
        leaves = sorted(g.neighbors(v) & I)
        try:
            run(rule6plus_step(g, v, leaves))
        except Exception as exc:
            raise CertificateError(f"step 1 failed: {exc}", state()) from exc
    while k > 0:
        pend = next((x for x in g.vertices if g.n >= 2 and g.degree(x) == 1), None)
        if pend is not None:
            run(rulea_step(g, pend))
            continue
        v = next((v for v in sorted(K) if v in g and len(g.neighbors(v) & I) == 1), None)
        if v is None:
            break
        (u,) = g.neighbors(v) & I
        w = next((w for w in sorted(K) if w in g and w != v and not g.has_edge(u, w)), None)
        if w is None:
            break
        try:
            run(rule6plus_step(g, v, [u, w]))
        except Exception as exc:
            raise CertificateError(f"step 3 failed: {exc}", state()) from exc
    if k > 0:
        raise CertificateError("procedure stopped with k > 0", state())
    return RuleTrace(tuple(steps))


def certificate_independent_side(inst: Instance, K: Iterable[int], I: Iterable[int], d: int) -> RuleTrace:
    """Iterated Rule 6+ on heavy clique vertices when ``|I_h| >= 2dk``.

    ``K_h`` are clique vertices with at least two independent neighbours and
    ``I_h = N_I(K_h)``.  Each round removes ``v_i`` with its neighbours
    ``N^i`` in the current ``I_h^i`` and discards from the bookkeeping the
    clique vertices left with at most one such neighbour (``D_K^i``), their
    independent neighbours (``D_I^i``) and the clique neighbours of those.
    Independent neighbours of ``v_i`` that would be left isolated are removed
    with it as extra leaves.
    """
    K, I = set(K), set(I)
    g, k = inst.graph, inst.k
    Kh = {v for v in K if len(g.neighbors(v) & I) >= 2}
    Ih = set().union(*(g.neighbors(v) & I for v in Kh)) if Kh else set()
    if len(Ih) < 2 * d * k:
        raise ValueError(f"|I_h| = {len(Ih)} < 2dk = {2 * d * k}")
    steps: list[TraceStep] = []
    rounds = []
    while Ih and k > 0:
        if not Kh:
            raise CertificateError("K_h exhausted before I_h", {"k": k, "I_h": sorted(Ih)})
        v = min(Kh)
        N = g.neighbors(v) & Ih
        c = len(N)
        if c < 2:
            raise CertificateError("c_i < 2", {"k": k, "v": v, "N": sorted(N)})
        stranded = {x for x in g.neighbors(v) & I if x not in N and g.neighbors(x) <= {v}}
        try:
            step = rule6plus_step(g, v, N | stranded)
        except Exception as exc:
            raise CertificateError(f"Rule 6+ failed: {exc}", {"k": k, "v": v}) from exc
        g, k = step.apply(g, k)
        steps.append(step)
        rest = Ih - N
        DK = {x for x in Kh - {v} if len(g.neighbors(x) & rest) <= 1}
        DI = set().union(*(g.neighbors(x) & rest for x in DK)) if DK else set()
        if len(DK) > (d - 1) * c or len(DI) > len(DK):
            raise CertificateError("D_K/D_I bookkeeping bound violated",
                                   {"c": c, "D_K": sorted(DK), "D_I": sorted(DI)})
        drop_k = {v} | DK | {x for x in Kh - {v} if g.neighbors(x) & DI}
        new_Ih = Ih - N - DI
        if len(Ih) - len(new_Ih) > d * c:
            raise CertificateError("|I_h^i| - |I_h^(i+1)| > d c_i", {"c": c})
        Kh = Kh - drop_k
        Ih = new_Ih
        rounds.append(c)
        bad = [x for x in Kh if len(g.neighbors(x) & Ih) < 2]
        if bad:
            raise CertificateError("K_h vertex with fewer than two I_h neighbours", {"K_h": sorted(bad)})
    if k > 0:
        raise CertificateError("procedure stopped with k > 0", {"k": k, "rounds": rounds})
    return RuleTrace(tuple(steps))
