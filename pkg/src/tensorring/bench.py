"""Experiment runner and report emitter for the storage comparisons."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .decompose import (
    balanced_r0,
    core_delta,
    heuristic_tr_svd,
    reduced_storage_tr_svd,
    tr_svd,
    tr_svd_balanced,
    tr_svd_candidates,
    _FirstStep,
)
from .dense import as_tensor, cyclic_shift, dense_norm
from .exceptions import DomainError
from .functions import GeneratorSpec, generate
from .ring import tr_to_dense

__all__ = [
    "METHODS",
    "ReportRow",
    "ExperimentReport",
    "ShiftSweep",
    "run_comparison",
    "shift_sweep",
    "emit_report",
    "read_report",
    "TABLE3_SPECS",
    "TABLE4_SPECS",
    "table1_specs",
    "table3",
    "table4",
    "table1",
    "ensemble_summary",
]

METHODS: dict = {
    "tt": lambda T, eps: tr_svd(T, eps, 1),
    "tr-balanced": tr_svd_balanced,
    "tr-exhaustive": reduced_storage_tr_svd,
    "tr-heuristic": heuristic_tr_svd,
}

COLUMNS = ("generator", "method", "storage", "storage_quotient", "time_s", "time_quotient", "rel_error")


@dataclass
class ReportRow:
    generator: str
    method: str
    storage: int
    storage_quotient: float
    time_s: float
    time_quotient: float
    rel_error: float


@dataclass
class ExperimentReport:
    rows: list = field(default_factory=list)

    def extend(self, other: "ExperimentReport") -> "ExperimentReport":
        self.rows.extend(other.rows)
        return self

    def select(self, generator: Optional[str] = None, method: Optional[str] = None) -> list:
        return [
            r for r in self.rows
            if (generator is None or r.generator == generator) and (method is None or r.method == method)
        ]

    def quotient(self, generator: str, method: str) -> float:
        rows = self.select(generator, method)
        if len(rows) != 1:
            raise KeyError(f"{len(rows)} rows for ({generator!r}, {method!r})")
        return rows[0].storage_quotient

    def __len__(self):
        return len(self.rows)


@dataclass
class ShiftSweep:
    """Per-shift quotients; entry ``p`` belongs to the shift ``gamma^p``."""

    generator: str
    tt_storage: int
    exhaustive: tuple
    balanced: tuple

    def to_report(self) -> ExperimentReport:
        rows = []
        for p, (q_ex, q_bal) in enumerate(zip(self.exhaustive, self.balanced)):
            name = f"{self.generator}@shift{p}"
            rows.append(ReportRow(name, "tr-exhaustive", round(q_ex * self.tt_storage), q_ex,
                                  float("nan"), float("nan"), float("nan")))
            rows.append(ReportRow(name, "tr-balanced", round(q_bal * self.tt_storage), q_bal,
                                  float("nan"), float("nan"), float("nan")))
        return ExperimentReport(rows)


def _resolve(spec) -> tuple:
    if isinstance(spec, GeneratorSpec):
        return spec.label, generate(spec)
    label, T = spec
    return label, as_tensor(T)


def run_comparison(spec, eps: float, methods: Sequence[str] = tuple(METHODS)) -> ExperimentReport:
    """Run each method on one tensor and record storage, time and error.

    ``spec`` is a :class:`GeneratorSpec` or a ``(label, tensor)`` pair. The
    ``tt`` method is always run first and serves as the baseline.
    """
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    label, T = _resolve(spec)
    norm = dense_norm(T)
    order = ["tt"] + [m for m in methods if m != "tt"]
    results = []
    for m in order:
        if m not in METHODS:
            raise DomainError(f"unknown method {m!r}")
        t0 = time.perf_counter()
        rep = METHODS[m](T, eps)
        elapsed = time.perf_counter() - t0
        err = dense_norm(tr_to_dense(rep) - T) / norm if norm > 0 else 0.0
        results.append((m, rep.storage, elapsed, err))
    base_storage, base_time = results[0][1], results[0][2]
    rows = []
    for m, storage, elapsed, err in results:
        if m not in methods and m == "tt":
            continue
        rows.append(ReportRow(
            label, m, int(storage), storage / base_storage, elapsed,
            elapsed / base_time if base_time > 0 else float("nan"), err,
        ))
    return ExperimentReport(rows)


def shift_sweep(spec, eps: float) -> ShiftSweep:
    """Exhaustive-over-divisors and balanced quotients for every cyclic shift.

    Quotients are relative to the TT of the unshifted tensor.
    """
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    label, T = _resolve(spec)
    d = T.ndim
    tt = tr_svd(T, eps, 1).storage
    delta = core_delta(T, eps)
    exhaustive, balanced = [], []
    for k in range(1, d + 1):
        best = min(rep.storage for _, _, rep in tr_svd_candidates(T, eps, shifts=[k]))
        step = _FirstStep(np.asfortranarray(cyclic_shift(T, k)), delta)
        bal = max(step.build(r0).storage for r0 in balanced_r0(step.rank))
        exhaustive.append(best / tt)
        balanced.append(bal / tt)
    return ShiftSweep(label, tt, tuple(exhaustive), tuple(balanced))


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def emit_report(r: ExperimentReport, path, format: str = "csv") -> None:
    """Write ``r`` as CSV or JSON with a fixed column order."""
    path = Path(path)
    if format == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(COLUMNS)
            for row in r.rows:
                w.writerow([_fmt(getattr(row, c)) for c in COLUMNS])
    elif format == "json":
        payload = [{c: getattr(row, c) for c in COLUMNS} for row in r.rows]
        path.write_text(json.dumps({"columns": list(COLUMNS), "rows": payload}, indent=2) + "\n")
    else:
        raise DomainError(f"unknown report format {format!r}")


def read_report(path) -> ExperimentReport:
    path = Path(path)
    types = {f.name: f.type for f in fields(ReportRow)}
    conv = {"int": int, "float": float, "str": str}
    if path.suffix == ".json":
        records = json.loads(path.read_text())["rows"]
    else:
        with open(path, newline="") as fh:
            records = list(csv.DictReader(fh))
    rows = [ReportRow(**{c: conv[types[c]](rec[c]) for c in COLUMNS}) for rec in records]
    return ExperimentReport(rows)


TABLE3_SPECS = [
    GeneratorSpec("exp-cos-chain", d=5, n=20, name="exp-cos-chain"),
    GeneratorSpec("exp-cos-two", d=5, n=20, name="exp-cos-two"),
    GeneratorSpec("inv-sqrt", d=5, n=20, name="inv-sqrt"),
    GeneratorSpec("exp-triple", d=5, n=20, name="exp-triple"),
    GeneratorSpec("park1", d=4, n=20, interval=(1e-10, 1.0), name="park1"),
]

TABLE4_SPECS = [
    GeneratorSpec("exp-triple", d=5, n=20, name="exp-triple"),
    GeneratorSpec("exp-cos-two", d=5, n=20, name="exp-cos-two"),
]


def table1_specs(seeds: Iterable[int] = range(20), settings=((4, 6), (4, 14), (10, 6), (10, 14)),
                 d: int = 5, n: int = 20) -> list:
    """Random-polynomial samples; seeds are dealt round-robin over the settings."""
    settings = list(settings)
    out = []
    for i, seed in enumerate(seeds):
        m_deg, m_term = settings[i % len(settings)]
        out.append(GeneratorSpec("random-polynomial", d=d, n=n, m_deg=m_deg, m_term=m_term, seed=seed))
    return out


def _suite(specs, eps, progress: Optional[Callable] = None) -> ExperimentReport:
    report = ExperimentReport()
    for spec in specs:
        report.extend(run_comparison(spec, eps))
        if progress is not None:
            progress(spec.label)
    return report


def table3(eps: float = 1e-12, progress: Optional[Callable] = None) -> ExperimentReport:
    return _suite(TABLE3_SPECS, eps, progress)


def table4(eps: float = 1e-12, progress: Optional[Callable] = None) -> ExperimentReport:
    report = ExperimentReport()
    for spec in TABLE4_SPECS:
        report.extend(shift_sweep(spec, eps).to_report())
        if progress is not None:
            progress(spec.label)
    return report


def table1(eps: float = 1e-12, seeds: Iterable[int] = range(20),
           progress: Optional[Callable] = None) -> ExperimentReport:
    return _suite(table1_specs(seeds), eps, progress)


def ensemble_summary(report: ExperimentReport) -> dict:
    """Mean storage quotient per method over all generators of a report."""
    out = {}
    for m in METHODS:
        qs = [r.storage_quotient for r in report.select(method=m)]
        if qs:
            out[m] = float(np.mean(qs))
    return out
