#!/usr/bin/env python3
"""
Experiment-scale acceptance checks (minutes to hours)

Runs the synthetic protocols on n = 500 networks and prints PASS/FAIL per
check. Use --trial-scale < 1 for a quicker, noisier run.
"""

import os
import sys
import time

import click
import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.experiment import AlignMethod, ExperimentConfig, GraphModel
from services.factors import compute_factors
from services.matching import select_best_with_bound
from services.sweep import run_sweep, write_sweep
from services.synth import gen_erdos_renyi, perturb, relabel
from utils.logging_setup import configure_logging
from utils.serialization import write_json

N = 500

# Measured medians at n=500, k=5, p_e=0.5/n on relabelled instances: ER ~0.89, PA >= 0.9
LOW_NOISE_FLOOR = {GraphModel.ER: 0.85, GraphModel.PA: 0.9}


def _trials(base: int, scale: float) -> int:
    return max(1, int(round(base * scale)))


def _median_recovery(rows, method: AlignMethod) -> float:
    values = [r.degree_weighted_recovery for r in rows if r.method == method and r.degree_weighted_recovery is not None]
    return float(np.median(values))


def _report(name: str, passed: bool, detail: str, results: dict) -> None:
    mark = "✅ PASS" if passed else "❌ FAIL"
    print(f"{mark}  {name}: {detail}")
    results[name] = {"passed": passed, "detail": detail}


def check_d_magnitude(scale: float, threads: int, out_dir: str, results: dict) -> None:
    cfg = ExperimentConfig(model=GraphModel.ER, n=N, k=5, trials=_trials(50, scale), methods=[AlignMethod.D_APPROX])
    sweep = run_sweep([cfg], threads=threads)
    write_sweep(os.path.join(out_dir, "d_magnitude"), sweep)
    bounds = [r.D_bound for r in sweep.rows if r.D_bound is not None]
    unbounded = len(sweep.rows) - len(bounds)
    if not bounds:
        _report("d_magnitude", False, f"no trial of {cfg.trials} certified a finite D", results)
        return
    worst = max(bounds)
    _report(
        "d_magnitude",
        worst <= 1.2 and unbounded == 0,
        f"largest D over {cfg.trials} trials = {worst:.4f} (<= 1.2), {unbounded} trial(s) without a finite D",
        results,
    )


def check_iteration_sufficiency(scale: float, threads: int, out_dir: str, results: dict) -> None:
    worst = 0.0
    for model in (GraphModel.ER, GraphModel.PA):
        for k in (5, 20):
            medians = []
            for t in (8, 16):
                cfg = ExperimentConfig(
                    model=model, n=N, k=k, iterations=t, trials=_trials(20, scale),
                    methods=[AlignMethod.PROG_PLUS],
                )
                sweep = run_sweep([cfg], threads=threads)
                write_sweep(os.path.join(out_dir, f"iterations_{model.value}_k{k}_t{t}"), sweep)
                medians.append(_median_recovery(sweep.rows, AlignMethod.PROG_PLUS))
            change = abs(medians[1] - medians[0]) / max(medians[0], 1e-12)
            worst = max(worst, change)
            print(f"   {model.value} k={k}: t=8 {medians[0]:.4f}, t=16 {medians[1]:.4f}")
    _report("iteration_sufficiency", worst <= 0.02, f"largest relative change {worst:.4f} (<= 0.02)", results)


def check_low_noise_recovery(scale: float, threads: int, out_dir: str, results: dict) -> None:
    methods = [AlignMethod.PROG, AlignMethod.PROG_PLUS, AlignMethod.DEGREE, AlignMethod.RANDOM]
    passed = True
    details = []
    for model in (GraphModel.ER, GraphModel.PA):
        cfg = ExperimentConfig(model=model, n=N, k=5, trials=_trials(50, scale), methods=methods)
        sweep = run_sweep([cfg], threads=threads)
        write_sweep(os.path.join(out_dir, f"low_noise_{model.value}"), sweep)
        med = {m: _median_recovery(sweep.rows, m) for m in methods}
        baseline = max(med[AlignMethod.DEGREE], med[AlignMethod.RANDOM])
        for m in (AlignMethod.PROG, AlignMethod.PROG_PLUS):
            passed &= med[m] >= LOW_NOISE_FLOOR[model] and med[m] > baseline
        details.append(f"{model.value} (floor {LOW_NOISE_FLOOR[model]}): " + ", ".join(f"{m.value} {v:.3f}" for m, v in med.items()))
    _report("low_noise_recovery", passed, "; ".join(details), results)


def check_k_robustness(scale: float, threads: int, out_dir: str, results: dict) -> None:
    methods = [AlignMethod.PROG_PLUS, AlignMethod.PAIRWISE]
    med = {}
    for k in (5, 20):
        cfg = ExperimentConfig(model=GraphModel.ER, n=N, k=k, trials=_trials(20, scale), methods=methods)
        sweep = run_sweep([cfg], threads=threads)
        write_sweep(os.path.join(out_dir, f"k_robustness_k{k}"), sweep)
        for m in methods:
            med[(m, k)] = _median_recovery(sweep.rows, m)

    def drop(m: AlignMethod) -> float:
        return (med[(m, 5)] - med[(m, 20)]) / max(med[(m, 5)], 1e-12)

    passed = drop(AlignMethod.PROG_PLUS) <= 0.10 and drop(AlignMethod.PAIRWISE) > 0.10
    _report(
        "k_robustness",
        passed,
        f"prog-plus drop {drop(AlignMethod.PROG_PLUS):.3f} (<= 0.10), pairwise drop {drop(AlignMethod.PAIRWISE):.3f} (> 0.10)",
        results,
    )


def _best_of(repeats: int, fn) -> float:
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def check_performance(results: dict) -> None:
    reference = gen_erdos_renyi(N, 8.0, seed=11)
    graphs = {k: relabel(perturb(reference, k, 0.5 / N, seed=12), seed=13).instances for k in (50, 100)}

    started = time.perf_counter()
    select_best_with_bound(compute_factors(graphs[100]))
    end_to_end = time.perf_counter() - started

    factor_times = {k: _best_of(3, lambda k=k: compute_factors(graphs[k])) for k in graphs}
    ratio = factor_times[100] / max(factor_times[50], 1e-9)
    passed = end_to_end < 300.0 and ratio <= 4.0
    _report(
        "performance",
        passed,
        f"d-approx end-to-end at k=100: {end_to_end:.1f}s (< 300s); "
        f"best-of-3 factor time k=100 / k=50 = {ratio:.2f} (<= 4)",
        results,
    )


@click.command()
@click.option("--trial-scale", type=float, default=1.0, show_default=True, help="Multiply every trial count")
@click.option("--threads", type=int, default=4, show_default=True)
@click.option("--out", "out_dir", default="results/acceptance", show_default=True)
def main(trial_scale: float, threads: int, out_dir: str) -> None:
    """Run every acceptance experiment"""
    configure_logging("WARNING")
    print("🚀 Acceptance experiments")
    print(f"   n={N}, trial scale {trial_scale}, threads {threads}")

    results: dict = {}
    check_d_magnitude(trial_scale, threads, out_dir, results)
    check_iteration_sufficiency(trial_scale, threads, out_dir, results)
    check_low_noise_recovery(trial_scale, threads, out_dir, results)
    check_k_robustness(trial_scale, threads, out_dir, results)
    check_performance(results)

    write_json(os.path.join(out_dir, "acceptance.json"), results)
    if not all(r["passed"] for r in results.values()):
        print("❌ Some acceptance checks failed")
        sys.exit(1)
    print("✅ All acceptance checks passed")


if __name__ == "__main__":
    main()
