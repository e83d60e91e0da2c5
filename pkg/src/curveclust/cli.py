"""Command-line front end: dataset generation, clustering, benchmarks, scoring.

Subcommands
-----------
generate   write a synthetic dataset described by a JSON config
cluster    run the elastic or baseline pipeline on a dataset file
benchmark  repeated-trial comparison of both methods, with report and plots
eval       score a labels file against a ground-truth labels file

Every command taking ``--seed`` writes identical bytes for identical inputs.
The ``CURVECLUST_THREADS`` environment variable caps the worker pool.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataio, pipeline
from .cluster import sca
from .datagen import (
    Dataset,
    WarpConfig,
    gen_char_trajectories,
    gen_sine_clusters,
    gen_template_clusters,
)
from .solver import SolverConfig


class CliError(Exception):
    pass


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curveclust", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a dataset from a JSON config")
    p.add_argument("--config", required=True, help="JSON generator config")
    p.add_argument("--out", required=True, help="output dataset path (.csv or .json)")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("cluster", help="cluster a dataset file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--method", choices=("clrr", "lrr"), default="clrr")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--trace", action="store_true", help="also write the solver trace (JSONL)")
    p.add_argument("--grid", type=int, default=None, help="resample curves to this many points")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("benchmark", help="run a repeated-trial experiment")
    p.add_argument("--experiment", choices=pipeline.EXPERIMENTS, required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--dataset", default=None, help="base dataset (required for trajectory)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("eval", help="score predicted labels against ground truth")
    p.add_argument("--labels", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out", default=None, help="optional JSON output path")
    p.set_defaults(func=cmd_eval)

    return parser


_GENERATORS = ("sine", "template", "trajectories")


def cmd_generate(args) -> int:
    cfg_path = Path(args.config)
    if not cfg_path.exists():
        raise CliError(f"config file not found: {cfg_path}")
    try:
        cfg = json.loads(cfg_path.read_text())
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed config {cfg_path}: {exc}") from exc
    name = cfg.get("generator")
    if name not in _GENERATORS:
        raise CliError(f"unknown generator {name!r}; expected one of {_GENERATORS}")
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    params = cfg.get("params", {})
    warp = WarpConfig(**params.pop("warp", {})) if "warp" in params else None
    try:
        if name == "sine":
            d = gen_sine_clusters(
                clusters=int(params.get("clusters", 3)),
                per_cluster=int(params.get("per_cluster", 20)),
                n_samples=int(params.get("n_samples", 100)),
                cfg=warp or pipeline.SINE_WARP,
                seed=seed,
            )
        elif name == "template":
            d = gen_template_clusters(
                templates=None,
                per_cluster=int(params.get("per_cluster", 20)),
                cfg=warp or pipeline.TEMPLATE_WARP,
                seed=seed,
            )
        else:
            d = gen_char_trajectories(
                per_cluster=int(params.get("per_cluster", 20)),
                n_samples=int(params.get("n_samples", 100)),
                seed=seed,
            )
    except (TypeError, ValueError) as exc:
        raise CliError(f"bad generator parameters: {exc}") from exc
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    dataio.write_dataset(out, d)
    meta = dict(d.meta)
    meta["seed"] = seed
    dataio.write_meta(out.with_suffix(out.suffix + ".meta.json"), meta)
    print(f"wrote {len(d)} curves to {out}")
    return 0


def cmd_cluster(args) -> int:
    path = Path(args.dataset)
    if not path.exists():
        raise CliError(f"dataset not found: {path}")
    d = dataio.read_dataset(path)
    if args.k < 2:
        raise CliError("--k must be at least 2")
    if args.k > len(d):
        raise CliError(f"--k is {args.k} but the dataset has only {len(d)} curves")
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    if args.method == "clrr":
        cfg = _solver_config(pipeline.BENCH_CLRR_CONFIG, args.lam)
        res = pipeline.run_clrr(d, args.k, args.seed, cfg=cfg, grid_size=args.grid)
    else:
        cfg = _solver_config(pipeline.BENCH_LRR_CONFIG, args.lam)
        res = pipeline.run_lrr(d, args.k, args.seed, cfg=cfg, grid_size=args.grid)

    ids = dataio.dataset_ids(d)
    dataio.write_labels(outdir / "labels.csv", ids, res.labels)
    dataio.write_matrix(outdir / "affinity.csv", res.affinity)
    if args.trace:
        dataio.write_trace(outdir / "trace.jsonl", res.diagnostics)
    msg = f"clustered {len(d)} curves into {args.k} groups ({args.method})"
    if res.sca is not None:
        msg += f"; SCA vs bundled truth: {res.sca:.2f}%"
    print(msg)
    print(f"converged={res.diagnostics.converged} iterations={res.diagnostics.iterations}")
    return 0


def _solver_config(base: SolverConfig, lam: float | None) -> SolverConfig:
    if lam is None:
        return base
    kwargs = vars(base).copy()
    kwargs["lam"] = lam
    return SolverConfig(**kwargs)


def cmd_benchmark(args) -> int:
    if args.trials < 1:
        raise CliError("--trials must be positive")
    base = None
    if args.experiment == "trajectory":
        if args.dataset is None:
            raise CliError(
                "the trajectory experiment needs --dataset pointing at 2-D trajectory "
                "curves (CSV schema: curve_id,label,t_index,dim_0,dim_1)"
            )
        base = dataio.read_dataset(Path(args.dataset))
        if base.labels is None:
            raise CliError("trajectory dataset must carry ground-truth labels")
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    report = pipeline.run_benchmark(args.experiment, args.trials, args.seed, k=args.k, base=base)

    with open(outdir / "report.json", "w") as fh:
        json.dump(report.to_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")
    dataio.write_meta(outdir / "timing.json", {"seconds": report.timing_seconds})
    (outdir / "table.md").write_text(pipeline.report_table(report))

    _benchmark_plots(args, base, outdir)

    for method in ("lrr", "clrr"):
        s = report.summary[method]
        print(
            f"{method}: mean={s['mean']:.2f}% median={s['median']:.2f}% "
            f"min={s['min']:.2f}% max={s['max']:.2f}%"
        )
    return 0


def _benchmark_plots(args, base: Dataset | None, outdir: Path) -> None:
    from . import plots

    d = pipeline.generate_experiment_dataset(args.experiment, args.seed, base)
    plots.plot_cluster_curves(d, outdir / "curves.svg")
    res_c = pipeline.run_clrr(d, args.k, args.seed, cfg=pipeline.BENCH_CLRR_CONFIG)
    res_l = pipeline.run_lrr(d, args.k, args.seed, cfg=pipeline.BENCH_LRR_CONFIG)
    plots.plot_affinity(res_c.affinity, d.labels, outdir / "affinity_clrr.svg")
    plots.plot_affinity(res_l.affinity, d.labels, outdir / "affinity_lrr.svg")


def cmd_eval(args) -> int:
    ids_pred, pred = dataio.read_labels(Path(args.labels))
    ids_true, truth = dataio.read_labels(Path(args.truth))
    if ids_pred != ids_true:
        mismatch = next(
            (f"{a!r} vs {b!r}" for a, b in zip(ids_pred, ids_true) if a != b),
            f"{len(ids_pred)} vs {len(ids_true)} entries",
        )
        raise CliError(f"curve id mismatch between label files: {mismatch}")
    score = sca(pred, truth)
    print(f"{score:.2f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"sca": score}, fh)
            fh.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
