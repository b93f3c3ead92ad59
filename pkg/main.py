from __future__ import annotations

import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import click
import numpy as np

from models.alignment import Alignment
from models.experiment import AlignMethod, ExperimentConfig, GraphModel
from models.graph import Graph
from services.aligner import NetworkAligner
from services.evaluation import evaluate
from services.graph_io import load_edge_list, load_ground_truth, write_problem
from services.subgraphs import egonet, top_degree_subgraph
from services.sweep import expand_grid, run_sweep, write_sweep
from services.synth import generate_problem
from services.verification import run_verification
from utils.config import config
from utils.logging_setup import configure_logging
from utils.serialization import (
    alignment_payload,
    read_alignment_json,
    write_alignment_csv,
    write_factor_bundle,
    write_json,
    write_metrics_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2

METHOD_CHOICE = click.Choice([m.value for m in AlignMethod])
MODEL_CHOICE = click.Choice([m.value for m in GraphModel])


class AlignerCLI(click.Group):
    """Maps usage, parse and input errors to exit code 1"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(
                args=args, prog_name=prog_name, complete_var=complete_var, standalone_mode=False, **extra
            )
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        except (ValueError, OSError) as e:
            click.echo(f"❌ {e}", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)


@click.group(cls=AlignerCLI)
@click.option("--log-level", default=None, help=f"Logging level (default {config.LOG_LEVEL})")
def cli(log_level: Optional[str]) -> None:
    """Multi-network alignment with low-rank PageRank factors"""
    configure_logging(log_level)
    try:
        config.validate()
    except ValueError as e:
        click.echo(f"⚠️  Configuration warning: {e}", err=True)


# -----------------------------------------------------------------------------
# align
# -----------------------------------------------------------------------------

def _restrict(
    graphs: List[Graph],
    truth: Optional[List[np.ndarray]],
    subgraph: Callable[[Graph], Tuple[Graph, np.ndarray]],
) -> Tuple[List[Graph], Optional[List[np.ndarray]], List[np.ndarray]]:
    restricted, node_ids = [], []
    for g in graphs:
        sub, ids = subgraph(g)
        restricted.append(sub)
        node_ids.append(ids)
    if truth is not None:
        truth = [t[ids] for t, ids in zip(truth, node_ids)]
    return restricted, truth, node_ids


def _original_ids(a: Alignment, node_ids: Sequence[np.ndarray]) -> Alignment:
    table = a.as_array()
    if table.shape[0] == 0:
        return a
    return Alignment.from_array(np.column_stack([ids[table[:, i]] for i, ids in enumerate(node_ids)]), a.k)


@cli.command()
@click.argument("graphs", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=METHOD_CHOICE, default=AlignMethod.PROG_PLUS.value, show_default=True)
@click.option("--alpha", type=float, default=config.ALPHA, show_default=True, help="PageRank damping")
@click.option("--iters", type=int, default=config.ITERATIONS, show_default=True, help="Factor iterations t")
@click.option("--b", "window", type=int, default=config.MATCH_WINDOW, show_default=True, help="Matching window")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for the random baseline")
@click.option("--truth", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Ground truth: problem manifest.json or JSON list of per-graph maps")
@click.option("--top-degree", type=int, default=None, help="Align only the N highest-degree nodes of each graph")
@click.option("--egonet", "center", type=int, default=None, help="Align only node CENTER and its neighbours in each graph")
@click.option("--dump-factors", is_flag=True, help="Also write the CP factors under OUT/factors")
@click.option("--threads", type=int, default=config.THREADS, show_default=True, help="Workers for the pairwise baseline")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=config.OUTPUT_DIR, show_default=True)
@click.option("--timings/--no-timings", default=True, show_default=True, help="Record runtimes in the outputs")
def align(
    graphs: Tuple[str, ...],
    method: str,
    alpha: float,
    iters: int,
    window: int,
    seed: int,
    truth: Optional[str],
    top_degree: Optional[int],
    center: Optional[int],
    dump_factors: bool,
    threads: int,
    out_dir: str,
    timings: bool,
) -> None:
    """Align two or more edge-list files"""
    if len(graphs) < 2:
        raise click.UsageError("align needs at least 2 graph files")
    if top_degree is not None and center is not None:
        raise click.UsageError("give either --top-degree or --egonet, not both")

    loaded = [load_edge_list(path) for path in graphs]
    for path, g in zip(graphs, loaded):
        click.echo(f"📊 {path}: {g.num_nodes} nodes, {g.num_edges} edges")

    truth_maps = load_ground_truth(truth, len(loaded)) if truth else None
    node_ids = [np.arange(g.num_nodes) for g in loaded]
    if top_degree is not None:
        loaded, truth_maps, node_ids = _restrict(loaded, truth_maps, lambda g: top_degree_subgraph(g, top_degree))
        click.echo(f"   Restricted to the top {top_degree} nodes by degree")
    elif center is not None:
        for path, g in zip(graphs, loaded):
            if not 0 <= center < g.num_nodes:
                raise click.BadParameter(f"node {center} is not in {path}", param_hint="--egonet")
        loaded, truth_maps, node_ids = _restrict(loaded, truth_maps, lambda g: egonet(g, center))
        sizes = ", ".join(str(g.num_nodes) for g in loaded)
        click.echo(f"   Restricted to the egonets of node {center} ({sizes} nodes)")

    aligner = NetworkAligner(alpha=alpha, iterations=iters, b=window, seed=seed, workers=threads, timed=timings)
    result = aligner.align(loaded, method)

    with_recovery = truth_maps is not None
    if not with_recovery:
        click.echo("⚠️  No ground truth supplied; degree-weighted recovery skipped")
    elif any(g.total_degree == 0 for g in loaded):
        click.echo("⚠️  A graph has no edges; degree-weighted recovery skipped")
        with_recovery = False
    metrics = evaluate(
        result.alignment,
        loaded,
        truth=truth_maps,
        factors=result.factors,
        certificate=result.certificate,
        with_recovery=with_recovery,
    )

    alignment = _original_ids(result.alignment, node_ids)
    out = Path(out_dir)
    payload = {
        "alignment": alignment_payload(alignment),
        "metrics": metrics,
        "certificate": result.certificate,
        "config": {
            "graphs": list(graphs),
            "method": method,
            "alpha": alpha,
            "iterations": iters,
            "b": window,
            "seed": seed,
            "top_degree": top_degree,
            "egonet": center,
            "truth": truth,
        },
        "runtime_seconds": result.runtime_seconds,
    }
    write_json(out / "alignment.json", payload)
    write_alignment_csv(out / "alignment.csv", alignment)
    write_json(out / "metrics.json", metrics)
    write_metrics_csv(out / "metrics.csv", metrics)
    if result.certificate is not None:
        write_json(out / "certificate.json", result.certificate)
        click.echo(f"   D = {result.certificate.D:.6g} (rank-1 matching {result.certificate.selected_index})")
    if dump_factors:
        if result.factors is None:
            click.echo(f"⚠️  Method {method} does not compute factors; nothing to dump")
        else:
            write_factor_bundle(out / "factors", result.factors)

    click.echo(f"✅ {method}: {len(alignment)} tuples, overlap {metrics.normalized_overlap:.4f}")
    if metrics.degree_weighted_recovery is not None:
        click.echo(f"   Degree-weighted recovery {metrics.degree_weighted_recovery:.4f}")
    click.echo(f"   Results written to {out}")


# -----------------------------------------------------------------------------
# score
# -----------------------------------------------------------------------------

@cli.command()
@click.argument("alignment_path", metavar="ALIGNMENT", type=click.Path(exists=True, dir_okay=False))
@click.argument("graphs", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("--truth", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Ground truth: problem manifest.json or JSON list of per-graph maps")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=config.OUTPUT_DIR, show_default=True)
def score(alignment_path: str, graphs: Tuple[str, ...], truth: Optional[str], out_dir: str) -> None:
    """Re-score a saved alignment (alignment.json) against its graph files"""
    alignment = read_alignment_json(alignment_path)
    if len(graphs) != alignment.k:
        raise click.UsageError(f"alignment has {alignment.k} modes, got {len(graphs)} graph files")

    loaded = [load_edge_list(path) for path in graphs]
    truth_maps = load_ground_truth(truth, len(loaded)) if truth else None
    with_recovery = truth_maps is not None and all(g.total_degree > 0 for g in loaded)
    if truth_maps is not None and not with_recovery:
        click.echo("⚠️  A graph has no edges; degree-weighted recovery skipped")
    try:
        metrics = evaluate(alignment, loaded, truth=truth_maps, with_recovery=with_recovery)
    except IndexError as e:
        raise click.BadParameter(str(e), param_hint="ALIGNMENT")

    out = Path(out_dir)
    write_json(out / "metrics.json", metrics)
    write_metrics_csv(out / "metrics.csv", metrics)
    click.echo(f"✅ {len(alignment)} tuples, overlap {metrics.normalized_overlap:.4f}")
    if metrics.degree_weighted_recovery is not None:
        click.echo(f"   Degree-weighted recovery {metrics.degree_weighted_recovery:.4f}")
    click.echo(f"   Metrics written to {out}")


# -----------------------------------------------------------------------------
# synth
# -----------------------------------------------------------------------------

@cli.command()
@click.option("--model", type=MODEL_CHOICE, default=GraphModel.ER.value, show_default=True)
@click.option("--n", type=int, default=500, show_default=True, help="Nodes per network")
@click.option("--k", type=int, default=5, show_default=True, help="Number of networks")
@click.option("--avg-degree", type=float, default=8.0, show_default=True, help="Expected degree (er)")
@click.option("--theta", type=int, default=4, show_default=True, help="Edges per new vertex (pa)")
@click.option("--pe", type=float, default=None, help="Edge deletion probability")
@click.option("--pe-over-n", type=float, default=None, help="Edge deletion probability as c/n (default 0.5)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--shuffle/--no-shuffle", default=True, show_default=True, help="Relabel every instance randomly")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=config.OUTPUT_DIR, show_default=True)
def synth(
    model: str,
    n: int,
    k: int,
    avg_degree: float,
    theta: int,
    pe: Optional[float],
    pe_over_n: Optional[float],
    seed: int,
    shuffle: bool,
    out_dir: str,
) -> None:
    """Write a synthetic problem: reference graph, k instances, manifest"""
    if pe is not None and pe_over_n is not None:
        raise click.UsageError("give either --pe or --pe-over-n, not both")
    cfg = ExperimentConfig(
        model=model, n=n, k=k, avg_degree=avg_degree, theta=theta, pe=pe, pe_over_n=pe_over_n,
        seed=seed, shuffle=shuffle,
    )
    problem = generate_problem(cfg, seed)
    manifest = write_problem(problem, out_dir)
    click.echo(f"✅ {problem.describe(model)}")
    click.echo(f"   Manifest written to {manifest}")


# -----------------------------------------------------------------------------
# sweep
# -----------------------------------------------------------------------------

@cli.command()
@click.option("--model", type=MODEL_CHOICE, default=GraphModel.ER.value, show_default=True)
@click.option("--n", "ns", type=int, multiple=True, help="Nodes per network (repeatable, default 500)")
@click.option("--k", "ks", type=int, multiple=True, help="Number of networks (repeatable, default 5)")
@click.option("--avg-degree", type=float, default=8.0, show_default=True)
@click.option("--theta", type=int, default=4, show_default=True)
@click.option("--pe", "pes", type=float, multiple=True, help="Edge deletion probability (repeatable)")
@click.option("--pe-over-n", "pes_over_n", type=float, multiple=True, help="p_e as c/n (repeatable, default 0.5)")
@click.option("--alpha", type=float, default=config.ALPHA, show_default=True)
@click.option("--iters", type=int, default=config.ITERATIONS, show_default=True)
@click.option("--b", "window", type=int, default=config.MATCH_WINDOW, show_default=True)
@click.option("--trials", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Trial i uses seed + i")
@click.option("--method", "methods", type=METHOD_CHOICE, multiple=True,
              help="Methods to run (repeatable, default d-approx, prog, prog-plus)")
@click.option("--threads", type=int, default=config.THREADS, show_default=True)
@click.option("--shuffle/--no-shuffle", default=True, show_default=True, help="Relabel every instance randomly")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=config.OUTPUT_DIR, show_default=True)
@click.option("--timings/--no-timings", default=True, show_default=True)
def sweep(
    model: str,
    ns: Tuple[int, ...],
    ks: Tuple[int, ...],
    avg_degree: float,
    theta: int,
    pes: Tuple[float, ...],
    pes_over_n: Tuple[float, ...],
    alpha: float,
    iters: int,
    window: int,
    trials: int,
    seed: int,
    methods: Tuple[str, ...],
    threads: int,
    shuffle: bool,
    out_dir: str,
    timings: bool,
) -> None:
    """Run synthetic trials over a grid of n, k and p_e"""
    if pes and pes_over_n:
        raise click.UsageError("give either --pe or --pe-over-n, not both")
    if threads < 1:
        raise click.UsageError("--threads must be >= 1")

    base = ExperimentConfig(
        model=model, avg_degree=avg_degree, theta=theta, alpha=alpha, iterations=iters, b=window,
        trials=trials, seed=seed, shuffle=shuffle,
        **({"methods": list(methods)} if methods else {}),
    )
    configs = expand_grid(base, ns=ns, ks=ks, pes=pes, pes_over_n=pes_over_n)
    click.echo(f"🚀 Sweep: {len(configs)} grid point(s) x {trials} trial(s) x {len(base.methods)} method(s)")

    result = run_sweep(configs, threads=threads, timed=timings)
    paths = write_sweep(out_dir, result)

    for summary in result.summaries:
        if summary.metric != "degree_weighted_recovery" or summary.median is None:
            continue
        click.echo(
            f"📊 {summary.model.value} n={summary.n} k={summary.k} p_e={summary.p_e:.4g} "
            f"{summary.method.value:<9} recovery median {summary.median:.4f} "
            f"[p20 {summary.p20:.4f}, p80 {summary.p80:.4f}]"
        )
    click.echo(f"✅ {len(result.rows)} row(s) written to {paths[0].parent}")


# -----------------------------------------------------------------------------
# verify
# -----------------------------------------------------------------------------

@cli.command()
@click.option("--max-n", type=int, default=4, show_default=True, help="Largest network size enumerated")
@click.option("--max-k", type=int, default=3, show_default=True, help="Largest number of networks enumerated")
@click.option("--max-t", type=int, default=4, show_default=True, help="Largest iteration count")
@click.option("--cases", type=int, default=200, show_default=True, help="Random cases per check")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the report as JSON")
def verify(max_n: int, max_k: int, max_t: int, cases: int, seed: int, out_path: Optional[str]) -> None:
    """Check the factors and matchers against brute-force oracles"""
    report = run_verification(max_n=max_n, max_k=max_k, max_t=max_t, cases=cases, seed=seed)
    for check in report.checks:
        mark = "✅" if check.passed else "❌"
        click.echo(f"{mark} {check.name}: {check.cases} case(s), {check.failures} failure(s)")
        if check.detail:
            click.echo(f"   first failure: {check.detail}")
    if out_path:
        write_json(out_path, report)

    if not report.passed:
        click.echo("❌ Verification failed", err=True)
        sys.exit(EXIT_VERIFY_FAILED)
    click.echo("✅ All checks passed")


# -----------------------------------------------------------------------------
# Entrypoint for `python main.py`
# -----------------------------------------------------------------------------

if __name__ == "__main__":
    cli()
