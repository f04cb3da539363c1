"""Kernelization for Signed Max Cut above the Poljak-Turzik bound."""

__version__ = "0.1.0"

from .decompose import DecompositionOutcome, DecompositionStuck, decompose
from .drivers import ClassSpec, KernelReport, assert_kernel_size, kernelize, linear_kernel_dsplit
from .graph import Instance, Sign, SignedGraph, block_decomposition, dump_graph, load_graph
from .oracle import QuarterValue, answer_exact, beta, beta_exact, is_balanced, mcwv_cliqueforest, pt
from .trace import RuleId, RuleTrace, TraceStep

__all__ = [
    "ClassSpec",
    "DecompositionOutcome",
    "DecompositionStuck",
    "Instance",
    "KernelReport",
    "QuarterValue",
    "RuleId",
    "RuleTrace",
    "Sign",
    "SignedGraph",
    "TraceStep",
    "answer_exact",
    "assert_kernel_size",
    "beta",
    "beta_exact",
    "block_decomposition",
    "decompose",
    "dump_graph",
    "is_balanced",
    "kernelize",
    "linear_kernel_dsplit",
    "load_graph",
    "mcwv_cliqueforest",
    "pt",
]
