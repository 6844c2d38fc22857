"""Batch simulation: many random topologies, every setting, three objectives.

A trial draws one topology per seed, then reuses it across all six settings
(interference pairs stripped for the minimal-interference ones) so the
settings are compared on identical trees. Outputs are plain CSV files with
deterministic formatting; the same seed reproduces them byte for byte.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

from backhaulopt.capacity import DEFAULT_PHY_RATE_GBPS
from backhaulopt.errors import PlacementFailure
from backhaulopt.formulations import (
    Interference,
    Objective,
    min_radio_chains,
    parse_setting,
    solve_equal_demand,
    solve_objective,
)
from backhaulopt.generator import (
    GeneratorConfig,
    adapt_topology,
    generate_topology,
    strip_interference,
)
from backhaulopt.scheduler import build_schedule
from backhaulopt.validator import jain_index, validate_schedule

SETTING_NAMES = ("MI-ER", "LI-ER", "MI-LR(1)", "LI-LR(1)", "MI-LR(2)", "LI-LR(2)")
# objective comparison runs under the most constrained regime
REFERENCE_SETTING = "LI-LR(2)"
OBJECTIVE_NAMES = tuple(o.value for o in Objective)


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 1
    trials: int = 50
    num_small_bs: int = 20
    macro_degree: int = 8
    max_small_children: int = 2
    interference_pair_budget: int = 6
    phy_rate_gbps: float = DEFAULT_PHY_RATE_GBPS


@dataclass
class TrialResult:
    trial: int
    seed: int
    d_b: dict[str, float] = field(default_factory=dict)
    realized: dict[str, bool] = field(default_factory=dict)
    aggregate: dict[str, float] = field(default_factory=dict)
    jain: dict[str, float] = field(default_factory=dict)
    macro_chains_needed: int = 0
    max_small_chains_needed: int = 0


def _setting_topology(base, bare, name):
    setting, macro_chains = parse_setting(name)
    src = bare if setting.interference is Interference.MINIMAL else base
    return setting, adapt_topology(src, setting, macro_chains=macro_chains)


def run_trial(config: ExperimentConfig, trial: int) -> TrialResult:
    seed = config.seed + trial
    base = generate_topology(
        GeneratorConfig(
            seed=seed,
            num_small_bs=config.num_small_bs,
            macro_degree=config.macro_degree,
            max_small_children=config.max_small_children,
            interference_pair_budget=config.interference_pair_budget,
            phy_rate_gbps=config.phy_rate_gbps,
        )
    )
    bare = strip_interference(base)
    result = TrialResult(trial=trial, seed=seed)

    for name in SETTING_NAMES:
        setting, topo = _setting_topology(base, bare, name)
        sol = solve_equal_demand(topo, setting)
        result.d_b[name] = sol.d_b_gbps
        result.realized[name] = _realizes(topo, sol)
        if name == "MI-ER":
            chains = min_radio_chains(topo, sol.p_first)
            result.macro_chains_needed = chains[topo.macro.id]
            small = [chains[b] for b in topo.small_bs_ids()]
            result.max_small_chains_needed = max(small) if small else 0

    setting, topo = _setting_topology(base, bare, REFERENCE_SETTING)
    for objective in Objective:
        sol = solve_objective(topo, setting, objective)
        result.aggregate[objective.value] = sol.aggregate_gbps
        result.jain[objective.value] = jain_index(sol.per_bs)
    return result


def _realizes(topo, sol) -> bool:
    try:
        schedule = build_schedule(topo, sol.p_first)
    except PlacementFailure:
        return False
    report = validate_schedule(topo, schedule, p_first=sol.p_first, demands=sol.per_bs)
    return report.ok and report.realized_equal_demand >= sol.d_b_gbps - 1e-6


def run_experiment(config: ExperimentConfig) -> list[TrialResult]:
    return [run_trial(config, t) for t in range(config.trials)]


def _fmt(x: float) -> str:
    return f"{x:.9f}"


def write_results(results: list[TrialResult], out_dir: str) -> list[str]:
    """Emit the four per-trial tables plus a summary; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    def table(name, header, rows):
        path = os.path.join(out_dir, name)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        paths.append(path)

    table(
        "max_demand_by_setting.csv",
        ["trial", "seed", *SETTING_NAMES],
        [
            [r.trial, r.seed, *(_fmt(r.d_b[s]) for s in SETTING_NAMES)]
            for r in results
        ],
    )
    table(
        "aggregate_by_objective.csv",
        ["trial", "seed", *OBJECTIVE_NAMES],
        [
            [r.trial, r.seed, *(_fmt(r.aggregate[o]) for o in OBJECTIVE_NAMES)]
            for r in results
        ],
    )
    table(
        "jain_by_objective.csv",
        ["trial", "seed", *OBJECTIVE_NAMES],
        [
            [r.trial, r.seed, *(_fmt(r.jain[o]) for o in OBJECTIVE_NAMES)]
            for r in results
        ],
    )
    table(
        "min_radio_chains_hist.csv",
        ["trial", "seed", "macro_chains", "max_small_chains"],
        [
            [r.trial, r.seed, r.macro_chains_needed, r.max_small_chains_needed]
            for r in results
        ],
    )

    n = len(results) or 1
    summary_rows = []
    for s in SETTING_NAMES:
        summary_rows.append([f"mean_d_b[{s}]", _fmt(sum(r.d_b[s] for r in results) / n)])
    for s in SETTING_NAMES:
        rate = sum(1 for r in results if r.realized[s]) / n
        summary_rows.append([f"realized_rate[{s}]", _fmt(rate)])
    for o in OBJECTIVE_NAMES:
        summary_rows.append(
            [f"mean_aggregate[{o}]", _fmt(sum(r.aggregate[o] for r in results) / n)]
        )
    for o in OBJECTIVE_NAMES:
        summary_rows.append([f"mean_jain[{o}]", _fmt(sum(r.jain[o] for r in results) / n)])
    for count in sorted({r.macro_chains_needed for r in results}):
        hits = sum(1 for r in results if r.macro_chains_needed == count)
        summary_rows.append([f"macro_chains={count}", str(hits)])
    table("summary.csv", ["metric", "value"], summary_rows)
    return paths
