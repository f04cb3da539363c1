"""Rule traces: ordered, replayable logs of reduction steps."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

from .graph import Edge, Instance, Sign, SignedGraph


class RuleId(str, Enum):
    R8 = "R8"
    R9 = "R9"
    R10A = "R10a"
    R10B = "R10b"
    R11 = "R11"
    RULE6PLUS = "Rule6Plus"
    RULEA = "RuleA"
    CREDITED_SET = "CreditedSet"
    CLIQUE_PEEL = "CliquePeel"
    ISOLATED_DROP = "IsolatedDrop"
    ABSORB = "Absorb"


@dataclass(frozen=True)
class TraceStep:
    """One reduction.  The parameter moves by ``k' = k - delta_k``."""

    rule: RuleId
    removed: tuple[int, ...] = ()
    removed_edges: tuple[Edge, ...] = ()
    added: tuple[int, ...] = ()
    added_edges: tuple[Edge, ...] = ()
    delta_k: int = 0
    info: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def apply(self, graph: SignedGraph, k: int) -> tuple[SignedGraph, int]:
        missing = [v for v in self.removed if v not in graph]
        if missing:
            raise ValueError(f"{self.rule.value}: vertices {missing} not in graph")
        absent = [e for e in self.removed_edges if e not in graph.edges]
        if absent:
            raise ValueError(f"{self.rule.value}: edges {absent} not in graph")
        g = graph.remove_edges(self.removed_edges).remove_vertices(self.removed)
        for z in self.added:
            g = g.add_vertex(z)
        if self.added_edges:
            g = SignedGraph(g.vertices, g.edges | frozenset(self.added_edges))
        return g, k - self.delta_k

    def apply_to(self, inst: Instance) -> Instance:
        g, k = self.apply(inst.graph, inst.k)
        return Instance(g, k)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "removed": list(self.removed),
            "removed_edges": [[u, v, s.symbol] for u, v, s in self.removed_edges],
            "added": list(self.added),
            "added_edges": [[u, v, s.symbol] for u, v, s in self.added_edges],
            "delta_k": self.delta_k,
            "info": self.info,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TraceStep":
        def edges(rows):
            return tuple((int(u), int(v), Sign.parse(s)) for u, v, s in rows)

        return cls(
            rule=RuleId(d["rule"]),
            removed=tuple(int(v) for v in d.get("removed", ())),
            removed_edges=edges(d.get("removed_edges", ())),
            added=tuple(int(v) for v in d.get("added", ())),
            added_edges=edges(d.get("added_edges", ())),
            delta_k=int(d.get("delta_k", 0)),
            info=dict(d.get("info", {})),
        )


@dataclass(frozen=True)
class RuleTrace:
    steps: tuple[TraceStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def extend(self, steps: Iterable[TraceStep]) -> "RuleTrace":
        return RuleTrace(self.steps + tuple(steps))

    def append(self, step: TraceStep) -> "RuleTrace":
        return RuleTrace(self.steps + (step,))

    @property
    def total_delta(self) -> int:
        return sum(s.delta_k for s in self.steps)

    def rules(self) -> list[str]:
        return [s.rule.value for s in self.steps]

    def replay(self, inst: Instance) -> Instance:
        for step in self.steps:
            inst = step.apply_to(inst)
        return inst

    def to_list(self) -> list[dict]:
        return [s.to_dict() for s in self.steps]

    @classmethod
    def from_list(cls, rows: Iterable[dict]) -> "RuleTrace":
        return cls(tuple(TraceStep.from_dict(r) for r in rows))
