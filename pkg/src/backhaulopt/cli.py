"""Command line front end.

Exit codes: 0 success, 1 a validated schedule has violations, 2 the problem
is infeasible or unrealizable as posed, 3 usage or file errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from backhaulopt.capacity import DEFAULT_PHY_RATE_GBPS
from backhaulopt.errors import (
    BackhaulError,
    InconsistentInput,
    InfeasibleConfig,
    InfeasibleFloor,
    InterferenceNotMinimal,
    InvalidTopology,
    PlacementFailure,
)
from backhaulopt.experiment import ExperimentConfig, run_experiment, write_results
from backhaulopt.formulations import (
    Objective,
    parse_setting,
    solution_from_dict,
    solution_to_dict,
    solve_objective,
)
from backhaulopt.generator import GeneratorConfig, adapt_topology, generate_topology
from backhaulopt.model import load_topology, save_topology, topology_to_dict
from backhaulopt.scheduler import build_schedule, schedule_from_dict, schedule_to_dict
from backhaulopt.validator import validate_schedule

SEED_ENV = "BACKHAUL_OPT_SEED"

_INFEASIBLE = (
    InvalidTopology,
    InterferenceNotMinimal,
    InfeasibleFloor,
    InfeasibleConfig,
    PlacementFailure,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; reserve 2 for infeasibility instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _seed_for(args) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InconsistentInput(f"{SEED_ENV}={env!r} is not an integer") from None
    return args.seed


def _emit(data: dict, out: str) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if out == "-":
        print(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _load_json(path: str) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InconsistentInput(f"{path} is not valid JSON: {exc}") from exc


def cmd_generate(args) -> int:
    config = GeneratorConfig(
        seed=_seed_for(args),
        num_small_bs=args.small_bs,
        macro_degree=args.macro_degree,
        max_small_children=args.max_children,
        interference_pair_budget=args.pairs,
        phy_rate_gbps=args.phy_rate,
    )
    topology = generate_topology(config)
    if args.out == "-":
        print(json.dumps(topology_to_dict(topology), indent=2, sort_keys=True))
    else:
        save_topology(topology, args.out)
    return 0


def cmd_solve(args) -> int:
    topology = load_topology(args.topology)
    setting, macro_chains = parse_setting(args.setting)
    if macro_chains is not None:
        # LR(k) pins the chain counts; plain LR and ER use the file's counts
        topology = adapt_topology(topology, setting, macro_chains=macro_chains)
    solution = solve_objective(
        topology, setting, Objective(args.objective), fair_floor=args.fair_floor
    )
    _emit(solution_to_dict(topology, solution), args.out)
    if solution.d_b_gbps is not None:
        print(f"per-BS demand: {solution.d_b_gbps:.9f} Gbps", file=sys.stderr)
    print(f"aggregate demand: {solution.aggregate_gbps:.9f} Gbps", file=sys.stderr)
    return 0


def cmd_schedule(args) -> int:
    topology = load_topology(args.topology)
    solution = solution_from_dict(_load_json(args.solution))
    schedule = build_schedule(topology, solution.p_first)
    _emit(schedule_to_dict(schedule), args.out)
    return 0


def cmd_validate(args) -> int:
    topology = load_topology(args.topology)
    solution = solution_from_dict(_load_json(args.solution))
    schedule = schedule_from_dict(_load_json(args.schedule))
    report = validate_schedule(
        topology, schedule, p_first=solution.p_first, demands=solution.per_bs
    )
    for violation in report.violations:
        print(violation)
    print(f"realized equal demand: {report.realized_equal_demand:.9f} Gbps")
    if report.ok:
        print("schedule OK")
        return 0
    print(f"{len(report.violations)} violation(s)")
    return 1


def cmd_experiment(args) -> int:
    config = ExperimentConfig(
        seed=_seed_for(args),
        trials=args.trials,
        num_small_bs=args.small_bs,
        macro_degree=args.macro_degree,
        max_small_children=args.max_children,
        interference_pair_budget=args.pairs,
        phy_rate_gbps=args.phy_rate,
    )
    results = run_experiment(config)
    for path in write_results(results, args.out_dir):
        print(path)
    return 0


def _add_size_flags(sub) -> None:
    sub.add_argument("--small-bs", type=int, default=20, help="number of small BSs")
    sub.add_argument("--macro-degree", type=int, default=8, help="children of the macro BS")
    sub.add_argument("--max-children", type=int, default=2, help="children per small BS")
    sub.add_argument("--pairs", type=int, default=0, help="interference pairs to draw")
    sub.add_argument(
        "--phy-rate", type=float, default=DEFAULT_PHY_RATE_GBPS,
        help="physical link rate in Gbps",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="backhaulopt", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = subs.add_parser("generate", help="draw a random tree topology")
    gen.add_argument("--seed", type=int, default=0,
                     help=f"rng seed ({SEED_ENV} overrides when set)")
    _add_size_flags(gen)
    gen.add_argument("--out", default="-", help="topology JSON path, - for stdout")
    gen.set_defaults(func=cmd_generate)

    slv = subs.add_parser("solve", help="maximize demand for a topology")
    slv.add_argument("topology", help="topology JSON path")
    slv.add_argument("--setting", required=True,
                     help="MI-ER, LI-ER, MI-LR, LI-LR, or e.g. LI-LR(2)")
    slv.add_argument("--objective", default=Objective.EQUAL_DEMAND.value,
                     choices=[o.value for o in Objective])
    slv.add_argument("--fair-floor", type=float, default=None,
                     help="explicit per-BS floor for aggregate_fair")
    slv.add_argument("--out", default="-", help="solution JSON path, - for stdout")
    slv.set_defaults(func=cmd_solve)

    sch = subs.add_parser("schedule", help="realize a solution as a frame schedule")
    sch.add_argument("topology")
    sch.add_argument("solution")
    sch.add_argument("--out", default="-", help="schedule JSON path, - for stdout")
    sch.set_defaults(func=cmd_schedule)

    val = subs.add_parser("validate", help="check a schedule against a solution")
    val.add_argument("topology")
    val.add_argument("solution")
    val.add_argument("schedule")
    val.set_defaults(func=cmd_validate)

    exp = subs.add_parser("experiment", help="run the batch simulation")
    exp.add_argument("--seed", type=int, default=1,
                     help=f"base seed ({SEED_ENV} overrides when set)")
    exp.add_argument("--trials", type=int, default=50)
    _add_size_flags(exp)
    exp.add_argument("--out-dir", default="results", help="directory for the CSV files")
    exp.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _INFEASIBLE as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except BackhaulError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
