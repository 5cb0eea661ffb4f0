"""Command-line entry points for running experiments end to end.

Subcommands: evolve, trial, ratio-sweep, derive-policy, validate, render,
stats. Configs are plain-text key-value files; every run directory gets a
manifest with the config hash and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from swarmtaxis.controller import RegulatoryPolicy, load_genotype
from swarmtaxis.fields import ArenaKind, build_arena
from swarmtaxis.harness import (
    ExperimentConfig,
    RatioSweepGrid,
    derive_policy,
    desk_config,
    paper_config,
    run_evolution,
    run_ratio_sweep,
    run_trial,
    run_validation,
    scheduled_trials,
    write_metric_series,
    write_trajectory,
)
from swarmtaxis.metrics import two_sample_t
from swarmtaxis.render import SnapshotSpec, render_series, render_snapshot


def _load_config(args) -> ExperimentConfig:
    if args.config:
        return ExperimentConfig.from_text(Path(args.config).read_text())
    preset = desk_config if args.preset == "desk" else paper_config
    return preset(master_seed=args.seed)


def _add_config_args(p):
    p.add_argument("--config", help="plain-text key-value config file")
    p.add_argument("--preset", choices=("desk", "paper"), default="desk")
    p.add_argument("--seed", type=int, default=0, help="master seed for presets")


def _load_policy(path) -> RegulatoryPolicy:
    data = json.loads(Path(path).read_text())
    return RegulatoryPolicy(
        thresholds=tuple(data["thresholds"]),
        probabilities=tuple(data["probabilities"]),
        update_period=data.get("update_period", 5.0),
    )


def _save_policy(policy: RegulatoryPolicy, path) -> None:
    data = {
        "thresholds": list(policy.thresholds),
        "probabilities": list(policy.probabilities),
        "update_period": policy.update_period,
    }
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def cmd_evolve(args) -> int:
    config = _load_config(args)
    print(f"scheduled trials: {scheduled_trials(config)}")
    if args.budget_only:
        return 0
    result = run_evolution(config, out_dir=args.out, progress=True)
    print(f"best fitness {result.best_fitness:.4f} -> {args.out}/best_genotype.txt")
    return 0


def cmd_trial(args) -> int:
    config = _load_config(args)
    genotype, _ = load_genotype(args.genotype)
    policy = _load_policy(args.policy) if args.policy else None
    outcome = run_trial(config, genotype, args.trial_seed, policy=policy,
                        record_trajectory=True)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_trajectory(outcome, out / "trajectory.csv")
    write_metric_series(outcome, out / "metrics.csv")
    print(f"fitness {outcome.fitness:.4f} -> {out}")
    return 0


def cmd_ratio_sweep(args) -> int:
    config = _load_config(args)
    genotype, _ = load_genotype(args.genotype)
    grid = run_ratio_sweep(config, genotype, repetitions=args.repetitions)
    grid.to_csv(args.out)
    print(f"{len(grid.ratios)}x{len(grid.r_dists)} grid -> {args.out}")
    return 0


def cmd_derive_policy(args) -> int:
    grid = RatioSweepGrid.from_csv(args.grid)
    policy = derive_policy(grid)
    _save_policy(policy, args.out)
    print(f"thresholds {policy.thresholds} probabilities {policy.probabilities}")
    return 0


def cmd_validate(args) -> int:
    config = _load_config(args)
    genotype, _ = load_genotype(args.genotype)
    policy = _load_policy(args.policy)
    result = run_validation(config, genotype, policy, repetitions=args.repetitions)
    for cell in result.cells:
        stars = "".join("*" for a in (0.05, 0.01, 0.001) if cell.report.significant(a))
        print(
            f"{cell.kind}={cell.value.value if isinstance(cell.value, ArenaKind) else cell.value}"
            f"  fixed {cell.fixed_mean:.3f}  adaptive {cell.adaptive_mean:.3f}  "
            f"t={cell.report.t:.3f} p={cell.report.p:.4g} {stars}"
        )
    agg = result.aggregate
    print(
        f"aggregate  fixed {agg.mean_b:.3f}+-{agg.std_b:.3f}  "
        f"adaptive {agg.mean_a:.3f}+-{agg.std_a:.3f}  df={agg.df}  p={agg.p:.4g}  "
        f"significant at 0.01/{result.bonferroni}: "
        f"{agg.significant(0.01, result.bonferroni)}"
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("cell,fixed_mean,fixed_std,adaptive_mean,adaptive_std,t,df,p\n")
            for cell in result.cells:
                r = cell.report
                fh.write(f"{r.label},{r.mean_b!r},{r.std_b!r},{r.mean_a!r},"
                         f"{r.std_a!r},{r.t!r},{r.df},{r.p!r}\n")
            r = agg
            fh.write(f"aggregate,{r.mean_b!r},{r.std_b!r},{r.mean_a!r},"
                     f"{r.std_a!r},{r.t!r},{r.df},{r.p!r}\n")
    return 0


def cmd_render(args) -> int:
    if args.snapshot:
        underlay = build_arena(ArenaKind(args.arena)) if args.arena else None
        spec = SnapshotSpec(
            trajectory_csv=args.snapshot,
            tick=args.tick,
            color_by=args.color_by,
            field_underlay=underlay,
        )
        svg = render_snapshot(spec)
    elif args.series:
        svg = render_series(args.series, args.columns.split(","))
    else:
        print("render needs --snapshot or --series", file=sys.stderr)
        return 2
    Path(args.out).write_text(svg)
    print(f"-> {args.out}")
    return 0


def cmd_stats(args) -> int:
    group_a = np.loadtxt(args.group_a)
    group_b = np.loadtxt(args.group_b)
    report = two_sample_t(group_a, group_b)
    print(
        f"A {report.mean_a:.4f}+-{report.std_a:.4f} (n={report.n_a})  "
        f"B {report.mean_b:.4f}+-{report.std_b:.4f} (n={report.n_b})"
    )
    print(f"t={report.t:.4f}  df={report.df}  p={report.p:.4g}")
    for alpha in (0.05, 0.01, 0.001):
        print(f"  p <= {alpha}/{args.bonferroni}: "
              f"{report.significant(alpha, args.bonferroni)}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="swarmtaxis")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run a CMA-ES evolution experiment")
    _add_config_args(p)
    p.add_argument("--out", default="run", help="run directory")
    p.add_argument("--budget-only", action="store_true",
                   help="print the scheduled trial count and exit")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("trial", help="run one trial of a saved genotype")
    _add_config_args(p)
    p.add_argument("genotype")
    p.add_argument("--trial-seed", type=int, default=0)
    p.add_argument("--policy", help="policy JSON for adaptive trials")
    p.add_argument("--out", default="trial")
    p.set_defaults(func=cmd_trial)

    p = sub.add_parser("ratio-sweep", help="fitness grid over ratios x distances")
    _add_config_args(p)
    p.add_argument("genotype")
    p.add_argument("--repetitions", type=int, default=None)
    p.add_argument("--out", default="ratio_sweep.csv")
    p.set_defaults(func=cmd_ratio_sweep)

    p = sub.add_parser("derive-policy", help="regulatory policy from a sweep grid")
    p.add_argument("grid", help="ratio sweep CSV")
    p.add_argument("--out", default="policy.json")
    p.set_defaults(func=cmd_derive_policy)

    p = sub.add_parser("validate", help="scalability + robustness suites")
    _add_config_args(p)
    p.add_argument("genotype")
    p.add_argument("--policy", required=True)
    p.add_argument("--repetitions", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="SVG snapshot or line plot from run CSVs")
    p.add_argument("--snapshot", help="trajectory CSV")
    p.add_argument("--tick", type=int, default=0)
    p.add_argument("--color-by", choices=("subgroup", "active_reservoir"),
                   default="subgroup")
    p.add_argument("--arena", help="field underlay arena name")
    p.add_argument("--series", help="metric CSV")
    p.add_argument("--columns", default="l_t")
    p.add_argument("--out", default="out.svg")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("stats", help="pooled two-sample t-test on fitness files")
    p.add_argument("group_a")
    p.add_argument("group_b")
    p.add_argument("--bonferroni", type=int, default=1)
    p.set_defaults(func=cmd_stats)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
