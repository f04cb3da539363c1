"""``signedcut`` command line: generate, solve, kernelize, verify.

Exit codes: 0 YES, 1 NO or kernel emitted, 2 usage/parse/cap error,
3 decomposition stuck, 4 invariant violation.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import networkx
import numpy

from . import __version__
from .decompose import DecompositionStuck, decompose
from .drivers import ClassSpec, KernelBoundViolation, PartitionError, kernelize, linear_kernel_dsplit
from .generators import GeneratorError, GenSpec, generate
from .graph import GraphFormatError, Instance, SignedGraph, dump_graph, is_connected, load_graph
from .oracle import OracleCapExceeded, beta_exact, is_balanced, oracle_cap, pt
from .rules import InvariantViolation
from .trace import RuleTrace

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_STUCK, EXIT_INVARIANT = 0, 1, 2, 3, 4
SCHEMA = 1


class UsageError(Exception):
    pass


def _versions() -> dict:
    return {
        "signedcut": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "networkx": networkx.__version__,
    }


def _read(path: str) -> tuple[SignedGraph, str]:
    data = Path(path).read_bytes()
    return load_graph(data), hashlib.sha256(data).hexdigest()


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    spec = GenSpec(
        family=args.family,
        n=args.n,
        r=args.r,
        l=args.l,
        sizes=tuple(args.sizes or ()),
        d=args.d,
        k_size=args.k_size,
        i_size=args.i_size,
        p_edge=args.p_edge,
        p_pos=args.p_pos,
        seed=args.seed,
    )
    gen = generate(spec)
    text = dump_graph(gen.graph, comments=[f"genspec {json.dumps(spec.to_dict(), sort_keys=True)}"])
    if args.out:
        Path(args.out).write_text(text)
        if gen.independent or gen.cliques:
            side = {
                "genspec": spec.to_dict(),
                "independent": [sorted(p) for p in gen.independent],
                "cliques": [sorted(p) for p in gen.cliques],
            }
            Path(args.out + ".partition.json").write_text(json.dumps(side, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(args) -> int:
    g, digest = _read(args.file)
    if not is_connected(g):
        raise UsageError("the input graph must be connected")
    t0 = time.perf_counter()
    b, _ = beta_exact(g)
    p = pt(g).q
    slack = 4 * b - p
    yes = slack >= args.k
    _emit(
        {
            "schema": SCHEMA,
            "command": "solve",
            "input": {"path": args.file, "sha256": digest, "n": g.n, "m": g.m},
            "k": args.k,
            "beta": b,
            "pt_quarters": p,
            "slack_quarters": slack,
            "verdict": "YES" if yes else "NO",
            "timings": {"oracle": time.perf_counter() - t0},
            "versions": _versions(),
        },
        args.json,
    )
    return EXIT_YES if yes else EXIT_NO


def _class_spec(args) -> ClassSpec:
    part = None
    if args.partition:
        part = json.loads(Path(args.partition).read_text())
    kind = args.graph_class
    if kind == "general":
        return ClassSpec.general()
    if kind == "split":
        return ClassSpec.split(part["cliques"][0], part["independent"][0]) if part else ClassSpec.split()
    if kind == "rl":
        if part:
            return ClassSpec.rl(args.r, args.l, part["independent"], part["cliques"])
        return ClassSpec.rl(args.r, args.l)
    if kind == "dsplit":
        if part:
            return ClassSpec.dsplit(args.d, part["cliques"][0], part["independent"][0])
        return ClassSpec.dsplit(args.d)
    raise UsageError(f"unknown class {kind!r}")


def cmd_kernelize(args) -> int:
    g, digest = _read(args.file)
    inst = Instance(g, args.k)
    out_dir = Path(args.out_dir) if args.out_dir else Path(args.file).parent
    stem = Path(args.file).stem
    t0 = time.perf_counter()
    try:
        if args.linear:
            if args.d is None or args.d < 1:
                raise UsageError("--linear needs --d >= 1")
            spec = _class_spec(args) if args.partition else ClassSpec.dsplit(args.d)
            K = spec.cliques[0] if spec.planted else None
            I = spec.independent[0] if spec.planted else None
            report = linear_kernel_dsplit(inst, args.d, K, I)
        else:
            report = kernelize(inst, _class_spec(args))
    except DecompositionStuck as exc:
        out_dir.mkdir(parents=True, exist_ok=True)
        residual = out_dir / f"{stem}.residual.sg"
        residual.write_text(dump_graph(exc.residual))
        print(f"decomposition stuck; residual graph written to {residual}", file=sys.stderr)
        return EXIT_STUCK
    wall = time.perf_counter() - t0
    record = {
        "schema": SCHEMA,
        "command": "kernelize",
        "input": {"path": os.path.abspath(args.file), "sha256": digest},
        "k": args.k,
        "class": args.graph_class if not args.linear else "dsplit-linear",
        "report": report.to_dict(),
        "timings": {"wall": wall, **report.timings},
        "versions": _versions(),
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    if report.kernel_instance is not None:
        kpath = out_dir / f"{stem}.kernel.sg"
        kpath.write_text(dump_graph(report.kernel_instance.graph, comments=[f"k {report.kernel_instance.k}"]))
        record["kernel_path"] = str(kpath)
    _emit(record, str(out_dir / f"{stem}.run.json"))
    return EXIT_YES if report.is_yes else EXIT_NO


# ---------------------------------------------------------------------------
# verify


def _verify_graph(path: str, k_min: int, k_max: int) -> dict:
    from .oracle import answer_exact

    g, _ = _read(path)
    res = {"path": path, "n": g.n, "checks": 0, "violations": []}
    if g.n > oracle_cap():
        res["skipped"] = "above oracle cap"
        return res
    b, side = beta_exact(g)
    cert = is_balanced(g)
    res["checks"] += 1
    if cert.balanced != (b == g.m) or not cert.verify(g):
        res["violations"].append("balance certificate disagrees with the oracle")
    if not is_connected(g):
        res["skipped"] = "disconnected"
        return res
    for k in range(k_min, k_max + 1):
        truth = answer_exact(g, k)
        inst = Instance(g, k)
        try:
            dec = decompose(inst)
            report = kernelize(inst)
        except DecompositionStuck:
            res["violations"].append(f"k={k}: decomposition stuck")
            continue
        res["checks"] += 3
        if dec.yes and not truth:
            res["violations"].append(f"k={k}: decompose claims YES on a NO instance")
        if not dec.yes and (len(dec.S) > 3 * k):
            res["violations"].append(f"k={k}: |S| > 3k")
        if report.is_yes:
            got = True
        else:
            ki = report.kernel_instance
            got = ki.k <= 0 or answer_exact(ki.graph, ki.k)
            res["checks"] += 1
            if not report.replay_matches():
                res["violations"].append(f"k={k}: trace replay mismatch")
        if got != truth:
            res["violations"].append(f"k={k}: kernel verdict {got} != oracle {truth}")
        # every step of the kernel trace must be two-way
        cur = inst
        for step in report.trace:
            nxt = step.apply_to(cur)
            a = answer_exact(cur.graph, cur.k) if cur.k > 0 else True
            c = answer_exact(nxt.graph, nxt.k) if nxt.k > 0 else True
            res["checks"] += 1
            if a != c:
                res["violations"].append(f"k={k}: {step.rule.value} changed the answer")
            cur = nxt
    return res


def _verify_record(path: str) -> dict:
    res = {"path": path, "checks": 1, "violations": []}
    try:
        rec = json.loads(Path(path).read_text())
        rep = rec["report"]
        g, digest = _read(rec["input"]["path"])
        if digest != rec["input"]["sha256"]:
            res["violations"].append("input hash mismatch")
        if rep.get("kernel"):
            trace = RuleTrace.from_list(rep["trace"])
            out = trace.replay(Instance(g, rec["k"]))
            if dump_graph(out.graph) != rep["kernel"]["graph"] or out.k != rep["kernel"]["k"]:
                res["violations"].append("replay mismatch: trace does not reproduce the kernel")
    except Exception as exc:  # any corruption is a reportable violation
        res["violations"].append(f"replay mismatch: {type(exc).__name__}: {exc}")
    return res


def _verify_one(item: tuple[str, int, int]) -> dict:
    path, k_min, k_max = item
    if path.endswith(".json"):
        return _verify_record(path)
    try:
        return _verify_graph(path, k_min, k_max)
    except (GraphFormatError, OracleCapExceeded) as exc:
        return {"path": path, "checks": 0, "violations": [f"{type(exc).__name__}: {exc}"]}


def cmd_verify(args) -> int:
    root = Path(args.path)
    if root.is_dir():
        files = sorted(str(p) for p in root.iterdir()
                       if p.suffix == ".sg" or p.name.endswith(".run.json"))
    elif root.exists():
        files = [str(root)]
    else:
        raise UsageError(f"{root} does not exist")
    items = [(f, args.k_min, args.k_max) for f in files]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_one, items))
    else:
        results = [_verify_one(it) for it in items]
    bad = [r for r in results if r["violations"]]
    width = max([len(Path(r["path"]).name) for r in results] + [4])
    print(f"{'file':<{width}}  checks  violations")
    for r in results:
        print(f"{Path(r['path']).name:<{width}}  {r['checks']:>6}  {len(r['violations']):>10}")
        for v in r["violations"]:
            print(f"    {v}")
    print(f"cases={len(results)} checks={sum(r['checks'] for r in results)} violations={sum(len(r['violations']) for r in bad)}")
    if args.json:
        Path(args.json).write_text(json.dumps({"schema": SCHEMA, "results": results}, indent=2) + "\n")
    return EXIT_NO if bad else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="signedcut", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated graph in sgraph format")
    g.add_argument("--family", required=True,
                   choices=["negative-clique", "random-signed", "split", "rl", "dsplit", "double",
                            "bodlaender-split"])
    g.add_argument("--n", type=int, default=0)
    g.add_argument("--r", type=int, default=0)
    g.add_argument("--l", type=int, default=0)
    g.add_argument("--sizes", type=int, nargs="*")
    g.add_argument("--d", type=int, default=0)
    g.add_argument("--k-size", type=int, default=0)
    g.add_argument("--i-size", type=int, default=0)
    g.add_argument("--p-edge", type=float, default=0.5)
    g.add_argument("--p-pos", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="exact answer by brute force")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--json")
    s.set_defaults(func=cmd_solve)

    k = sub.add_parser("kernelize", help="run the kernelization pipeline")
    k.add_argument("file")
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--class", dest="graph_class", default="general",
                   choices=["general", "split", "rl", "dsplit"])
    k.add_argument("--r", type=int, default=0)
    k.add_argument("--l", type=int, default=0)
    k.add_argument("--d", type=int)
    k.add_argument("--partition", help="partition sidecar written by generate")
    k.add_argument("--linear", action="store_true", help="linear kernel for d*-split graphs")
    k.add_argument("--out-dir")
    k.set_defaults(func=cmd_kernelize)

    v = sub.add_parser("verify", help="oracle and replay checks over a file or directory")
    v.add_argument("path")
    v.add_argument("--k-min", type=int, default=1)
    v.add_argument("--k-max", type=int, default=4)
    v.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    v.add_argument("--json")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        return args.func(args)
    except (UsageError, GeneratorError, GraphFormatError, PartitionError, OracleCapExceeded,
            FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantViolation, KernelBoundViolation) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
