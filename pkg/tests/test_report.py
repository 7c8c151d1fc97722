import csv
import io
import math

import pytest

from measured_greedy.instances import parse_instance, random_instance
from measured_greedy.report import BENCH_COLUMNS, bench_rows, build_report, dumps, guarantee, rows_to_csv
from measured_greedy.rounding import RoundingConfig
from measured_greedy.solver import SolverConfig, accelerated_mcg

from test_instances import TRIANGLE


def test_guarantee():
    assert guarantee(0.1) == pytest.approx(1 / math.e - 0.2)


def test_triangle_report():
    inst = parse_instance(TRIANGLE)
    y, trace = accelerated_mcg(inst.function, inst.matroid, SolverConfig(0.1, seed=7, sample_cap=5000))
    rep = build_report(inst, y, trace, rounding=RoundingConfig(10, 7))
    assert rep["brute_force"] == {"set": [0], "value": 2.0, "enumerated": 8}
    assert rep["ratio"] >= 1 / math.e - 0.2
    calls = rep["oracle_calls"]
    assert calls["value"]["realized"] == calls["value"]["predicted"]
    assert calls["independence"]["realized"] == calls["independence"]["predicted"]
    assert len(rep["rounded"]["set"]) <= 1
    assert len(rep["steps"]) == 10
    assert rep["config"]["baseline"] == "smooth"


def test_report_echoes_baseline_and_skips_brute_force():
    inst = parse_instance(TRIANGLE)
    cfg = SolverConfig(0.2, sample_cap=50, baseline="discrete-step")
    y, trace = accelerated_mcg(inst.function, inst.matroid, cfg)
    rep = build_report(inst, y, trace, brute_force=False)
    assert rep["config"]["baseline"] == "discrete-step"
    assert rep["brute_force"] is None and rep["ratio"] is None


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1.5]}) == '{\n  "a": [\n    1.5\n  ],\n  "b": 1\n}\n'
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})


def test_bench_rows_and_csv():
    rows = bench_rows([random_instance("coverage", 6, 0)], [0.4, 0.2], SolverConfig(0.4, sample_cap=20))
    assert [r["epsilon"] for r in rows] == [0.4, 0.2]
    assert rows[1]["value_calls"] > rows[0]["value_calls"]
    parsed = list(csv.DictReader(io.StringIO(rows_to_csv(rows))))
    assert tuple(parsed[0]) == BENCH_COLUMNS
    assert float(parsed[0]["ratio"]) > 0
