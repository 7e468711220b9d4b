"""Command line interface: ``tensorring <verb> ...``.

Failures print a single ``error: <kind>: <message>`` line to stderr and
exit with a nonzero status.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bench
from .conversions import CanonicalTensor, cp_to_tr_optimal, cp_to_tt, tt_to_tr
from .dense import dense_norm
from .exceptions import DomainError, FormatError, TensorRingError
from .functions import NAMED_FUNCTIONS, GeneratorSpec, generate
from .graph import (
    GraphTensor,
    chorded_cycle_family,
    graph_to_dense,
    greedy_graph_select,
    skip_chain_family,
)
from .io import load_representation, read_dten, save_graph, save_tr, write_dten
from .linalg import divisors
from .ring import MAX_DENSE_ELEMENTS, TRTensor, tr_round, tr_to_dense

EXIT_USAGE = 2
EXIT_FAILURE = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _interval(text: str) -> tuple:
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"interval must be 'a,b', got {text!r}") from exc
    return a, b


def _emit(**fields) -> None:
    print(" ".join(f"{k}={_value(v)}" for k, v in fields.items()))


def _value(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def _cmd_generate(args) -> None:
    families = sorted(NAMED_FUNCTIONS) + ["random-polynomial"]
    if args.family not in families:
        raise DomainError(f"unknown family {args.family!r}; choose from {', '.join(families)}")
    spec = GeneratorSpec(args.family, d=args.d, n=args.n, interval=args.interval,
                         m_deg=args.mdeg, m_term=args.mterm, seed=args.seed)
    T = generate(spec)
    write_dten(args.out, T)
    _emit(out=args.out, shape=T.shape, norm=repr(dense_norm(T)))


def _cmd_compress(args) -> None:
    T = read_dten(args.input)
    t0 = time.perf_counter()
    rep = bench.METHODS[args.method](T, args.eps)
    elapsed = time.perf_counter() - t0
    save_tr(args.out, rep)
    _emit(out=args.out, ranks=rep.ranks, storage=rep.storage, time_s=f"{elapsed:.6f}")


def _dense_of(rep) -> np.ndarray:
    if isinstance(rep, TRTensor):
        return tr_to_dense(rep)
    if isinstance(rep, GraphTensor):
        return graph_to_dense(rep)
    return rep.full()


def _cmd_verify(args) -> None:
    T = read_dten(args.input)
    rep = load_representation(args.rep)
    if tuple(rep.shape) != T.shape:
        raise DomainError(f"representation shape {tuple(rep.shape)} differs from tensor shape {T.shape}")
    norm = dense_norm(T)
    err = dense_norm(_dense_of(rep) - T)
    _emit(rel_error=repr(err / norm if norm > 0 else err), storage=rep.storage)


def _cmd_bench(args) -> None:
    def progress(label):
        print(f"done {label}", file=sys.stderr, flush=True)

    if args.suite == "table3":
        report = bench.table3(args.eps, progress)
    elif args.suite == "table4":
        report = bench.table4(args.eps, progress)
    else:
        report = bench.table1(args.eps, range(args.seeds), progress)
    fmt = "json" if str(args.report).endswith(".json") else "csv"
    bench.emit_report(report, args.report, fmt)
    _emit(report=args.report, rows=len(report))
    if args.suite == "table1":
        _emit(**{f"mean_{k}": f"{v:.4f}" for k, v in bench.ensemble_summary(report).items()})


def _best_tt_to_tr(T: TRTensor, eps: float) -> TRTensor:
    best = None
    for r0 in divisors(T.ranks[1]):
        rep = tt_to_tr(T, r0, eps) if r0 > 1 else tr_round(T, eps)
        if best is None or rep.storage < best.storage:
            best = rep
    return best


def _cmd_convert(args) -> None:
    if args.to != "tr":
        raise DomainError(f"unsupported target format {args.to!r}")
    rep = load_representation(args.inp)
    if args.src == "cp":
        if not isinstance(rep, CanonicalTensor):
            raise FormatError(f"{args.inp} does not hold a canonical tensor")
        baseline = tr_round(cp_to_tt(rep), args.eps).storage
        out = cp_to_tr_optimal(rep, args.eps)
    else:
        if not isinstance(rep, TRTensor) or rep.ranks[0] != 1:
            raise FormatError(f"{args.inp} does not hold a tensor train (r_0 = 1)")
        baseline = tr_round(rep, args.eps).storage
        out = tt_to_tr(rep, args.r0, args.eps) if args.r0 else _best_tt_to_tr(rep, args.eps)
    save_tr(args.out, out)
    _emit(out=args.out, ranks=out.ranks, storage=out.storage,
          storage_quotient=f"{out.storage / baseline:.6f}")


def _cmd_graph_search(args) -> None:
    path = Path(args.inp)
    if path.is_dir():
        source = load_representation(path)
        d = source.d
    else:
        source = read_dten(path)
        d = source.ndim
    family = chorded_cycle_family(d) if args.family == "chorded-cycle" else skip_chain_family(d)
    if isinstance(source, np.ndarray):
        tt = bench.METHODS["tt"](source, args.eps)
    elif isinstance(source, CanonicalTensor):
        tt = tr_round(cp_to_tt(source), args.eps)
    elif isinstance(source, TRTensor):
        tt = tr_round(source, args.eps)
    else:
        raise FormatError(f"{path} cannot be used as graph-search input")
    history = []
    t0 = time.perf_counter()
    graph, rep = greedy_graph_select(source, family, eps=args.eps, history=history)
    elapsed = time.perf_counter() - t0

    rel = float("nan")
    if isinstance(source, np.ndarray) and math.prod(source.shape) <= MAX_DENSE_ELEMENTS:
        norm = dense_norm(source)
        rel = dense_norm(graph_to_dense(rep) - source) / norm if norm > 0 else 0.0
    label = path.name
    rows = [
        bench.ReportRow(label, "tt", tt.storage, 1.0, float("nan"), float("nan"), float("nan")),
        bench.ReportRow(label, "initial", int(history[0][1]), history[0][1] / tt.storage,
                        float("nan"), float("nan"), float("nan")),
        bench.ReportRow(label, args.family, rep.storage, rep.storage / tt.storage,
                        elapsed, float("nan"), rel),
    ]
    fmt = "json" if str(args.report).endswith(".json") else "csv"
    bench.emit_report(bench.ExperimentReport(rows), args.report, fmt)
    if args.out:
        save_graph(args.out, rep)
    edges = ";".join(f"{u + 1}-{v + 1}:{r}" for (u, v), r in graph.edges.items())
    _emit(report=args.report, storage=rep.storage, edges=edges)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tensorring", description="Tensor-ring compression toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="discretize a benchmark function into a DTEN file")
    g.add_argument("--family", required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--interval", type=_interval, default=(0.0, 1.0))
    g.add_argument("--mdeg", type=int)
    g.add_argument("--mterm", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_generate)

    c = sub.add_parser("compress", help="compress a DTEN tensor into a TR directory")
    c.add_argument("--input", required=True)
    c.add_argument("--method", choices=list(bench.METHODS), required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=_cmd_compress)

    v = sub.add_parser("verify", help="relative error of a stored representation")
    v.add_argument("--input", required=True)
    v.add_argument("--rep", required=True)
    v.set_defaults(func=_cmd_verify)

    b = sub.add_parser("bench", help="run a benchmark suite and write a report")
    b.add_argument("--suite", choices=["table3", "table4", "table1"], required=True)
    b.add_argument("--eps", type=float, default=1e-12)
    b.add_argument("--report", required=True)
    b.add_argument("--seeds", type=int, default=20, help="number of random-polynomial samples (table1)")
    b.set_defaults(func=_cmd_bench)

    cv = sub.add_parser("convert", help="convert a CP or TT representation into TR")
    cv.add_argument("--from", dest="src", choices=["cp", "tt"], required=True)
    cv.add_argument("--to", choices=["tr"], required=True)
    cv.add_argument("--eps", type=float, required=True)
    cv.add_argument("--in", dest="inp", required=True)
    cv.add_argument("--out", required=True)
    cv.add_argument("--r0", type=int, help="fixed end rank for --from tt")
    cv.set_defaults(func=_cmd_convert)

    gs = sub.add_parser("graph-search", help="greedy graph selection within a family")
    gs.add_argument("--family", choices=["chorded-cycle", "skip-chain"], required=True)
    gs.add_argument("--eps", type=float, required=True)
    gs.add_argument("--in", dest="inp", required=True, help="DTEN file or representation directory")
    gs.add_argument("--report", required=True)
    gs.add_argument("--out", help="optional directory for the selected graph representation")
    gs.set_defaults(func=_cmd_graph_search)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "eps", 0.0) is not None and getattr(args, "eps", 0.0) < 0:
            raise DomainError(f"eps must be non-negative, got {args.eps}")
        args.func(args)
    except _UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TensorRingError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (OSError, ValueError, MemoryError) as exc:
        print(f"error: {type(exc).__name__}: {exc}".replace("\n", " "), file=sys.stderr)
        return EXIT_FAILURE
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
