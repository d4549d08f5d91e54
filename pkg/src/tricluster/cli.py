"""Command-line interface: fit, coarsen, analyze, generate, eval.

Every command writes its outputs into a directory together with a run
manifest (JSON) recording the resolved configuration, the seed, SHA-256
digests of the inputs, the output paths and the wall time.  All randomness
descends from the single --seed flag through numpy SeedSequence spawning.

Exit codes: 2 unreadable or empty input, 3 model/data incompatibility,
64 invalid flags or flag combinations.
"""

from __future__ import annotations

import csv
import hashlib
import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import analysis, criterion
from .coarsen import agglomerate
from .edges import EdgeListError, TemporalEdgeList, ingest_edges
from .model import Triclustering, merge_clusters
from .search import SearchConfig, vns_fit
from .synthgen import MODES, GeneratorConfig, generate

SCHEMA_VERSION = 1

EXIT_BAD_INPUT = 2
EXIT_INCOMPATIBLE = 3
EXIT_USAGE = 64

# click's default usage-error code is 2, which collides with the
# unreadable-input code; route all flag errors to 64 instead.
click.UsageError.exit_code = EXIT_USAGE


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _read_edges(path: str) -> TemporalEdgeList:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return ingest_edges(fh)
    except (OSError, EdgeListError) as exc:
        click.echo(f"error: cannot read edges from {path}: {exc}", err=True)
        sys.exit(EXIT_BAD_INPUT)


def _read_model(path: str) -> Triclustering:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return Triclustering.from_document(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        click.echo(f"error: cannot read model from {path}: {exc}", err=True)
        sys.exit(EXIT_BAD_INPUT)


def _require_compatible(model: Triclustering, edges: TemporalEdgeList):
    if not model.is_compatible(edges):
        click.echo("error: model is not compatible with the input edges",
                   err=True)
        sys.exit(EXIT_INCOMPATIBLE)


def _out_dir(output: str) -> Path:
    out = Path(output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, doc) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _write_rows(path: Path, header, rows, fmt: str) -> Path:
    delim = "\t" if fmt == "tsv" else ","
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter=delim)
        w.writerow(header)
        w.writerows(rows)
    return path


def _manifest(out: Path, command: str, config: dict, seed, inputs, outputs,
              wall_time: float) -> Path:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "seed": seed,
        "input_digests": {str(p): _sha256(Path(p)) for p in inputs},
        "outputs": sorted(str(p) for p in outputs),
        "wall_time": wall_time,
    }
    return _write_json(out / "manifest.json", doc)


format_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "tsv"]), default="csv",
    show_default=True, help="Delimiter for tabular outputs.")


@click.group()
def main():
    """Triclustering of temporal interaction data."""


@main.command("fit")
@click.option("--input", "input_path", required=True,
              help="Edge list file (src,dst,time).")
@click.option("--output", required=True, help="Output directory.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--restarts", default=4, show_default=True, type=int)
@click.option("--granularity", default="auto", show_default=True,
              help="Initial time intervals: a count, 'auto' (sqrt m) or "
                   "'full' (one interval per edge).")
@click.option("--noise", default=0.0, show_default=True, type=float,
              help="Noise level tag copied into the search report.")
@format_option
def cmd_fit(input_path, output, seed, restarts, granularity, noise, fmt):
    """Fit a triclustering by greedy merging with VNS restarts."""
    t0 = time.monotonic()
    edges = _read_edges(input_path)
    if granularity == "full":
        granularity = edges.m
    elif granularity != "auto":
        try:
            granularity = int(granularity)
        except ValueError:
            raise click.UsageError(f"bad --granularity {granularity!r}")
    try:
        config = SearchConfig(restarts=restarts, seed=seed,
                              initial_time_granularity=granularity)
    except ValueError as exc:
        raise click.UsageError(str(exc))

    model, report = vns_fit(edges, config)
    cost = criterion.cost(model)
    nc = criterion.null_cost(edges.out_degrees, edges.in_degrees)

    out = _out_dir(output)
    outputs = [
        _write_json(out / "model.json", model.to_document(edges)),
        _write_rows(out / "cost_breakdown.csv", ["term", "value"],
                    list(cost.rows()), fmt),
        _write_rows(
            out / "search_report.csv",
            ["m", "seed", "noise", "k_s_found", "k_d_found", "k_t_found",
             "cost", "runtime"],
            [[edges.m, seed, noise, model.k_s, model.k_d, model.k_t,
              cost.total, time.monotonic() - t0]], fmt),
        _write_rows(
            out / "restarts.csv",
            ["restart", "cost", "merges", "wall_time", "k_s", "k_d", "k_t"],
            [[r["restart"], r["cost"], r["merges"], r["wall_time"],
              r["k_s"], r["k_d"], r["k_t"]] for r in report["restarts"]],
            fmt),
        _write_json(out / "costs.json", {
            "schema_version": SCHEMA_VERSION,
            "cost": cost.total,
            "null_cost": nc.total,
            "best_cost": report["best_cost"],
        }),
    ]
    config_doc = {"restarts": restarts, "granularity": str(granularity),
                  "noise": noise, "format": fmt}
    outputs.append(_manifest(out, "fit", config_doc, seed, [input_path],
                             outputs, time.monotonic() - t0))
    click.echo(f"fit: k_s={model.k_s} k_d={model.k_d} k_t={model.k_t} "
               f"cost={cost.total:.6f}")


def _parse_clusters(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        raise click.UsageError("--clusters expects k_s,k_d,k_t (0 = free)")
    try:
        counts = tuple(int(p) for p in parts)
    except ValueError:
        raise click.UsageError(f"bad --clusters {text!r}")
    if any(c < 0 for c in counts):
        raise click.UsageError("--clusters entries must be >= 0")
    return counts


@main.command("coarsen")
@click.option("--input", "input_path", required=True, help="Model JSON file.")
@click.option("--output", required=True, help="Output directory.")
@click.option("--tau", type=float, default=None,
              help="Stop before informativity drops below this value.")
@click.option("--clusters", default=None,
              help="Stop at k_s,k_d,k_t cluster counts (0 = unconstrained).")
@click.option("--check-replay", is_flag=True,
              help="Replay the hierarchy and verify the recorded costs.")
@format_option
def cmd_coarsen(input_path, output, tau, clusters, check_replay, fmt):
    """Agglomerate a fitted model into a merge hierarchy."""
    t0 = time.monotonic()
    if tau is not None and clusters is not None:
        raise click.UsageError("--tau and --clusters are mutually exclusive")
    target = _parse_clusters(clusters) if clusters is not None else None
    if tau is not None and tau > 1:
        raise click.UsageError("--tau cannot exceed 1")
    model = _read_model(input_path)

    hierarchy = agglomerate(model, tau_min=tau, target_counts=target)
    final = hierarchy.replay()
    if check_replay:
        probe = hierarchy.start
        for rec in hierarchy.records:
            probe = merge_clusters(probe, rec.axis, rec.a, rec.b)
            cur = criterion.cost(probe).total
            if abs(cur - rec.cost_after) > 1e-6 * max(1.0, abs(cur)):
                click.echo(f"replay mismatch at step {rec.step}: "
                           f"{cur} != {rec.cost_after}", err=True)
                sys.exit(1)
        click.echo(f"replay check passed ({len(hierarchy.records)} merges)")

    out = _out_dir(output)
    outputs = [
        _write_json(out / "hierarchy.json", hierarchy.to_document()),
        _write_json(out / "model.json", final.to_document()),
        _write_rows(
            out / "merges.csv",
            ["step", "axis", "a", "b", "delta", "cost_after", "tau_after"],
            [[r.step, r.axis, r.a, r.b, r.delta, r.cost_after, r.tau_after]
             for r in hierarchy.records], fmt),
    ]
    config_doc = {"tau": tau, "clusters": clusters, "format": fmt}
    outputs.append(_manifest(out, "coarsen", config_doc, None, [input_path],
                             outputs, time.monotonic() - t0))
    click.echo(f"coarsen: {len(hierarchy.records)} merges, "
               f"final k_s={final.k_s} k_d={final.k_d} k_t={final.k_t}")


@main.command("analyze")
@click.option("--input", "input_path", required=True,
              help="Edge list file the model was fitted on.")
@click.option("--model", "model_path", required=True, help="Model JSON file.")
@click.option("--output", required=True, help="Output directory.")
@format_option
def cmd_analyze(input_path, model_path, output, fmt):
    """Export mutual-information contribution tables for a model."""
    t0 = time.monotonic()
    edges = _read_edges(input_path)
    model = _read_model(model_path)
    _require_compatible(model, edges)

    sd, sd_total = analysis.mi_source_dest(model)
    sdt, sdt_total = analysis.mi_pair_time(model)

    sd_rows = [[i, j, sd[i, j]]
               for i in range(model.k_s) for j in range(model.k_d)]
    sdt_rows = [[i, j, l, sdt[i, j, l]]
                for i in range(model.k_s) for j in range(model.k_d)
                for l in range(model.k_t)]

    out = _out_dir(output)
    outputs = [
        _write_rows(out / "mi_source_dest.csv",
                    ["source_cluster", "dest_cluster", "contribution"],
                    sd_rows, fmt),
        _write_rows(out / "mi_pair_time.csv",
                    ["source_cluster", "dest_cluster", "time_interval",
                     "contribution"],
                    sdt_rows, fmt),
        _write_json(out / "mi_totals.json", {
            "schema_version": SCHEMA_VERSION,
            "mi_source_dest": sd_total,
            "mi_pair_time": sdt_total,
        }),
    ]
    outputs.append(_manifest(out, "analyze", {"format": fmt}, None,
                             [input_path, model_path], outputs,
                             time.monotonic() - t0))
    click.echo(f"analyze: MI(source;dest)={sd_total:.6f} nats, "
               f"MI(pair;time)={sdt_total:.6f} nats")


@main.command("generate")
@click.option("--output", required=True, help="Output directory.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--mode", type=click.Choice(list(MODES)), default="temporal",
              show_default=True)
@click.option("--k", default=5, show_default=True, type=int)
@click.option("--ns", default=50, show_default=True, type=int)
@click.option("--nd", default=50, show_default=True, type=int)
@click.option("--m", default=2 ** 15, show_default=True, type=int)
@click.option("--noise", default=0.0, show_default=True, type=float)
@format_option
def cmd_generate(output, seed, mode, k, ns, nd, m, noise, fmt):
    """Generate a synthetic temporal graph with ground truth."""
    t0 = time.monotonic()
    try:
        config = GeneratorConfig(k=k, n_sources=ns, n_dests=nd, m=m,
                                 seed=seed, noise_fraction=noise, mode=mode)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    edges, truth = generate(config)

    out = _out_dir(output)
    edge_rows = zip(edges.sources.tolist(), edges.destinations.tolist(),
                    edges.raw_times.tolist())
    outputs = [
        _write_rows(out / "edges.csv", ["source", "destination", "time"],
                    edge_rows, fmt),
        _write_json(out / "truth.json", {
            "schema_version": SCHEMA_VERSION,
            "source": np.asarray(truth["source"]).tolist(),
            "dest": np.asarray(truth["dest"]).tolist(),
        }),
    ]
    config_doc = {"mode": mode, "k": k, "ns": ns, "nd": nd, "m": m,
                  "noise": noise, "format": fmt}
    outputs.append(_manifest(out, "generate", config_doc, seed, [],
                             outputs, time.monotonic() - t0))
    click.echo(f"generate: {edges.m} edges, {edges.n_sources} sources, "
               f"{edges.n_dests} destinations")


@main.command("eval")
@click.option("--input", "input_path", required=True, help="Edge list file.")
@click.option("--model", "model_path", required=True, help="Model JSON file.")
@click.option("--star", "star_path", default=None,
              help="Fitted optimum model JSON; fitted fresh when omitted.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--restarts", default=4, show_default=True, type=int)
def cmd_eval(input_path, model_path, star_path, seed, restarts):
    """Score a model: criterion value, null cost and informativity.

    The informativity denominator needs the optimum c(M*); pass a fitted
    model with --star, otherwise one is fitted on the spot.
    """
    edges = _read_edges(input_path)
    model = _read_model(model_path)
    _require_compatible(model, edges)

    if star_path is not None:
        star = _read_model(star_path)
        _require_compatible(star, edges)
    else:
        star, _ = vns_fit(edges, SearchConfig(restarts=restarts, seed=seed))

    c_m = criterion.cost(model).total
    c_star = criterion.cost(star).total
    c_null = criterion.null_cost(edges.out_degrees, edges.in_degrees).total
    if c_m < c_star:  # the evaluated model beats the search result
        c_star = c_m
    tau = criterion.informativity(c_m, c_star, c_null)
    click.echo(f"cost: {c_m:.6f}")
    click.echo(f"null_cost: {c_null:.6f}")
    click.echo(f"informativity: {tau:.6f}")


if __name__ == "__main__":
    main()
