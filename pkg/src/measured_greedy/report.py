"""Run reports and bench rows."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from typing import Any, Iterable

import numpy as np

from .instances import Instance
from .multilinear import EXACT_MAX_N
from .reference import brute_force_opt
from .rounding import RoundingConfig, sample_and_repair
from .solver import RunTrace, SolverConfig, accelerated_mcg, predicted_oracle_calls

REPORT_SCHEMA_VERSION = 1
BENCH_COLUMNS = ("n", "r", "epsilon", "value_calls", "independence_calls", "ratio")


def guarantee(epsilon: float) -> float:
    return 1.0 / math.e - 2.0 * epsilon


def step_rows(trace: RunTrace) -> list[dict[str, Any]]:
    return [
        {
            "step": s.index,
            "t": s.t,
            "base": s.base,
            "max_y": max(s.y),
            "ybar_prime": s.ybar_prime,
            "thresholds": len(s.passes),
            "value_calls": s.value_calls,
            "independence_calls": s.independence_calls,
            "F": s.F,
        }
        for s in trace.steps
    ]


def build_report(
    instance: Instance,
    y: np.ndarray,
    trace: RunTrace,
    rounding: RoundingConfig | None = None,
    brute_force: bool | None = None,
) -> dict[str, Any]:
    """Everything needed to re-check a run, as a JSON-ready dict.

    ``brute_force=None`` means: compute OPT whenever n is small enough.
    """
    f, M = instance.function, instance.matroid
    cfg = trace.config
    ybar_primes = [s.ybar_prime for s in trace.steps]
    predicted = predicted_oracle_calls(trace.n, trace.rank, trace.bounds, cfg, ybar_primes)
    report: dict[str, Any] = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "instance": {"n": instance.n, "function": f.kind, "matroid": M.kind, "metadata": instance.metadata},
        "config": cfg.to_dict(),
        "bounds": {"d_upper": trace.bounds.d_upper, "d_lower": trace.bounds.d_lower},
        "rank": trace.rank,
        "samples_per_estimate": trace.samples_per_estimate,
        "fractional": {"y": trace.y_final, "value": trace.F_final, "exact": trace.F_exact, "stderr": trace.F_final_stderr},
        "guarantee_factor": guarantee(cfg.epsilon),
        "oracle_calls": {
            "value": {"realized": trace.value_calls, "predicted": predicted.value_calls},
            "independence": {"realized": trace.independence_calls, "predicted": predicted.independence_calls},
            "setup_value": trace.setup_value_calls,
            "setup_independence": trace.setup_independence_calls,
        },
        "rounded": None,
        "brute_force": None,
        "ratio": None,
        "steps": step_rows(trace),
    }
    if rounding is not None:
        S = sample_and_repair(f, M, y, rounding)
        report["rounded"] = {"set": S.ids(), "value": f.evaluate(S), "attempts": rounding.attempts, "seed": rounding.seed}
    if brute_force is None:
        brute_force = instance.n <= EXACT_MAX_N
    if brute_force:
        opt = brute_force_opt(f, M)
        report["brute_force"] = {"set": opt.opt_set.ids(), "value": opt.opt_value, "enumerated": opt.enumerated_count}
        if opt.opt_value > 0 and trace.F_final is not None:
            report["ratio"] = trace.F_final / opt.opt_value
    return report


def dumps(doc: Any) -> str:
    """Canonical JSON text; equal documents give byte-identical output."""
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def bench_rows(instances: Iterable[Instance], epsilons: Iterable[float], config: SolverConfig) -> list[dict[str, Any]]:
    rows = []
    eps_list = list(epsilons)
    for inst in instances:
        opt = brute_force_opt(inst.function, inst.matroid).opt_value if inst.n <= EXACT_MAX_N else None
        for eps in eps_list:
            cfg = dataclasses.replace(config, epsilon=eps)
            _, trace = accelerated_mcg(inst.function, inst.matroid, cfg)
            ratio = trace.F_final / opt if opt and trace.F_final is not None else None
            rows.append(
                {
                    "n": inst.n,
                    "r": trace.rank,
                    "epsilon": eps,
                    "value_calls": trace.value_calls,
                    "independence_calls": trace.independence_calls,
                    "ratio": ratio,
                }
            )
    return rows


def rows_to_csv(rows: list[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row[k] is None else row[k]) for k in BENCH_COLUMNS})
    return buf.getvalue()
