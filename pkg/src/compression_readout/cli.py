"""Command-line interface.

Subcommands: simulate, sweep-n, sweep-shots, advantage-map, crossover,
shots-bound.  Sweep subcommands read a TOML config (a file path or the name
of a shipped preset such as ``fig2a``) and accept ``--override key=value``
patches; errors exit nonzero after printing one JSON line on stderr.
"""
from __future__ import annotations

import argparse
import json
import pathlib
import sys

from . import presets
from .bounds import BudgetQuery, chernoff_shot_budget, total_budget, variance_bound
from .circuits import ARCHITECTURES, build_encoding_circuit
from .engines import (
    compression_readout_exact,
    compression_readout_sampled,
    compression_readout_sparse_exact,
    direct_readout_exact,
    direct_readout_sampled,
)
from .experiments import (
    ExperimentConfig,
    apply_overrides,
    parse_config,
    run_task,
    write_results,
)
from .grid import build_grid
from .states import SparsePopulations, StateSpec, make_state


def _load_toml(path_or_name: str) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:  # Python 3.10
        import tomli as tomllib
    path = pathlib.Path(path_or_name)
    if not path.exists():
        path = presets.path_for(path_or_name)
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _add_sweep_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="config file path or preset name")
    sub.add_argument("--seed", type=int, help="master seed (overrides the config)")
    sub.add_argument("--out", required=True, help="output file")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--threads", type=int, help="worker threads")
    sub.add_argument("--profile", help="device profile (overrides the config)")
    sub.add_argument(
        "--override", action="append", default=[], metavar="KEY=VALUE",
        help="config patch, e.g. experiment.repetitions=3 (repeatable)",
    )


def _sweep_command(args, task: str) -> int:
    raw = _load_toml(args.config)
    overrides = list(args.override)
    if args.seed is not None:
        overrides.append(f"experiment.seed={args.seed}")
    if args.threads is not None:
        overrides.append(f"experiment.threads={args.threads}")
    if args.profile is not None:
        overrides.append(f'experiment.profile="{args.profile}"')
    raw = apply_overrides(raw, overrides)
    cfg = parse_config(raw)
    if cfg.task != task:
        raise ValueError(f"config declares task {cfg.task!r} but the subcommand expects {task!r}")
    rows, meta = run_task(cfg)
    meta["seed"] = cfg.seed
    write_results(rows, args.out, args.format, meta)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _noise_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--profile", help="device profile name")
    sub.add_argument("--asymmetric", action="store_true", help="use asymmetric readout rates")
    sub.add_argument("--xi", type=float)
    sub.add_argument("--e0", type=float)
    sub.add_argument("--e1", type=float)
    sub.add_argument("--gamma", type=float)
    sub.add_argument("--arch", choices=ARCHITECTURES, default="fully_connected")
    sub.add_argument("--gates", type=int, help="explicit two-qubit gate count")


def _simulate(args) -> int:
    cfg = ExperimentConfig(
        task="single",
        state=StateSpec.parse(args.state),
        n_values=[args.n],
        shots=[args.shots] if args.shots else None,
        repetitions=1,
        seed=args.seed,
        profile=args.profile,
        symmetric=not args.asymmetric,
        xi=args.xi, e0=args.e0, e1=args.e1, gamma=args.gamma,
        architecture=args.arch,
        gates=args.gates,
    )
    readout, gate = cfg.noise()
    state = make_state(cfg.state, args.n)
    if args.method == "direct":
        if args.shots:
            result = direct_readout_sampled(state, readout, args.shots, args.seed)
        else:
            result = direct_readout_exact(state, readout)
    else:
        if args.shots:
            result = compression_readout_sampled(
                state, readout, gate, args.shots, args.seed,
                architecture=args.arch, gates=args.gates,
            )
        elif isinstance(state, SparsePopulations) and args.n > cfg.dense_cap:
            result = compression_readout_sparse_exact(
                state, readout, gate, architecture=args.arch, gates=args.gates
            )
        else:
            result = compression_readout_exact(
                state, readout, gate, architecture=args.arch, gates=args.gates
            )
    doc = json.dumps(result.to_dict(), sort_keys=True, indent=1)
    if args.out:
        pathlib.Path(args.out).write_text(doc + "\n")
    else:
        print(doc)
    if args.dump_circuit:
        if args.arch == "paper_count":
            raise ValueError("paper_count plans have no gate list to dump")
        grid = build_grid(args.n)
        plans = [build_encoding_circuit(args.n, float(x), args.arch).to_dict() for x in grid.xs]
        pathlib.Path(args.dump_circuit).write_text(
            json.dumps({"n": args.n, "architecture": args.arch, "plans": plans}, indent=1) + "\n"
        )
    return 0


def _shots_bound(args) -> int:
    m = (1 << args.n) - 1 if args.m is None else args.m
    query = BudgetQuery(epsilon=args.epsilon, eta=args.eta, m=m)
    per_grid = chernoff_shot_budget(query)
    doc = {
        "m": m,
        "epsilon": args.epsilon,
        "eta": args.eta,
        "shots_per_grid": per_grid,
        "total_shots": total_budget(query),
        "variance_bound": variance_bound(m, per_grid),
    }
    print(json.dumps(doc, sort_keys=True, indent=1))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compression-readout",
        description="Simulate and benchmark single-ancilla compression readout",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sim = subs.add_parser("simulate", help="run one configuration and print a JSON result")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--state", default="zeros", help="zeros | ones | uniform | haar[:seed] | basis:i")
    sim.add_argument("--method", choices=("direct", "compression"), default="compression")
    sim.add_argument("--shots", type=int, help="total shots (omit for the exact engines)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", help="write the JSON result here instead of stdout")
    sim.add_argument("--dump-circuit", help="write the encoding-circuit plans (JSON) to this path")
    _noise_args(sim)
    sim.set_defaults(func=_simulate)

    for name, task in (
        ("sweep-n", "sweep_n"),
        ("sweep-shots", "sweep_shots"),
        ("advantage-map", "advantage_map"),
        ("crossover", "crossover"),
    ):
        sub = subs.add_parser(name, help=f"run a {task} experiment from a config")
        _add_sweep_args(sub)
        sub.set_defaults(func=lambda args, task=task: _sweep_command(args, task))

    bound = subs.add_parser("shots-bound", help="print the shot budget and variance bound")
    group = bound.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="qubit count (m = 2^n - 1)")
    group.add_argument("--m", type=int, help="grid count")
    bound.add_argument("--epsilon", type=float, required=True)
    bound.add_argument("--eta", type=float, required=True)
    bound.set_defaults(func=_shots_bound)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # pragma: no cover - exercised via CLI tests
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
