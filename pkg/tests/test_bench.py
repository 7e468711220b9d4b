import math

import pytest

from tensorring import (
    DomainError,
    GeneratorSpec,
    emit_report,
    generate,
    read_report,
    run_comparison,
    shift_sweep,
    tr_svd,
)
from tensorring.bench import COLUMNS, ExperimentReport, ReportRow, ensemble_summary, table1_specs
from tensorring.decompose import reduced_storage_tr_svd


@pytest.fixture
def small():
    return GeneratorSpec("exp-cos-two", d=4, n=6)


def test_run_comparison_rows(small):
    rep = run_comparison(small, 1e-8)
    assert [r.method for r in rep.rows] == ["tt", "tr-balanced", "tr-exhaustive", "tr-heuristic"]
    assert rep.quotient(small.label, "tt") == 1.0
    for r in rep.rows:
        assert r.rel_error <= 1e-8
        assert r.storage > 0
    assert rep.quotient(small.label, "tr-heuristic") >= rep.quotient(small.label, "tr-exhaustive")


def test_run_comparison_subset_and_errors(small, rng):
    rep = run_comparison(("x", rng.standard_normal((3, 3, 3))), 0.0, ["tr-exhaustive"])
    assert [r.method for r in rep.rows] == ["tr-exhaustive"]
    with pytest.raises(KeyError):
        rep.quotient("x", "tt")
    with pytest.raises(DomainError):
        run_comparison(small, -1.0)
    with pytest.raises(DomainError):
        run_comparison(small, 1e-6, ["tt", "bogus"])


def test_sweep_minimum_is_exhaustive(small):
    sweep = shift_sweep(small, 1e-10)
    assert len(sweep.exhaustive) == len(sweep.balanced) == 4
    T = generate(small)
    best = reduced_storage_tr_svd(T, 1e-10).storage / tr_svd(T, 1e-10, 1).storage
    assert min(sweep.exhaustive) == pytest.approx(best)
    assert sweep.exhaustive[0] <= 1.0
    assert len(sweep.to_report()) == 8


@pytest.mark.parametrize("fmt,suffix", [("csv", ".csv"), ("json", ".json")])
def test_report_roundtrip(tmp_path, small, fmt, suffix):
    rep = run_comparison(small, 1e-6)
    p = tmp_path / f"r{suffix}"
    emit_report(rep, p, fmt)
    back = read_report(p)
    assert len(back) == len(rep)
    for a, b in zip(rep.rows, back.rows):
        assert a == b


def test_empty_csv_has_header(tmp_path):
    p = tmp_path / "e.csv"
    emit_report(ExperimentReport(), p)
    assert p.read_text() == ",".join(COLUMNS) + "\n"
    assert len(read_report(p)) == 0


def test_nan_roundtrip_and_bad_format(tmp_path):
    row = ReportRow("g", "tt", 3, 1.0, float("nan"), float("nan"), 0.0)
    p = tmp_path / "n.csv"
    emit_report(ExperimentReport([row]), p)
    assert math.isnan(read_report(p).rows[0].time_s)
    with pytest.raises(DomainError):
        emit_report(ExperimentReport([row]), p, "xml")


def test_table1_specs_round_robin():
    specs = table1_specs(range(8))
    assert [(s.m_deg, s.m_term) for s in specs[:4]] == [(4, 6), (4, 14), (10, 6), (10, 14)]
    assert [s.seed for s in specs] == list(range(8))


def test_ensemble_summary():
    rows = [ReportRow("a", "tt", 1, 1.0, 0, 0, 0), ReportRow("a", "tr-balanced", 2, 2.0, 0, 0, 0),
            ReportRow("b", "tr-balanced", 1, 1.0, 0, 0, 0)]
    s = ensemble_summary(ExperimentReport(rows))
    assert s == {"tt": 1.0, "tr-balanced": 1.5}
