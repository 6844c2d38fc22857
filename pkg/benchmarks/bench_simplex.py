"""Pivot-kernel shootout: compiled extension vs pure-Python fallback.

Runs the same LPs through backhaulopt.lp.simplex.solve with each kernel
pinned, checks the answers agree, and prints median wall times. Two
workloads: demand formulations on generated topologies (the shape the
package actually solves) and dense random LPs of growing size (where the
pivot loop dominates).

Usage: python3 benchmarks/bench_simplex.py [--repeats N]
"""

import argparse
import statistics
import time

import numpy as np

from backhaulopt.formulations import build_aggregate_lp, build_equal_demand_lp, parse_setting
from backhaulopt.generator import GeneratorConfig, adapt_topology, generate_topology
from backhaulopt.lp import _kernel_py
from backhaulopt.lp.problem import LinearProgram, Relation
from backhaulopt.lp.simplex import solve

try:
    from backhaulopt.lp import _kernel as _kernel_ext
except ImportError:
    _kernel_ext = None


def _formulation_lps():
    lps = []
    for size, degree, pairs in ((10, 4, 3), (20, 8, 6), (40, 8, 10)):
        base = generate_topology(
            GeneratorConfig(
                seed=size,
                num_small_bs=size,
                macro_degree=degree,
                max_small_children=2,
                interference_pair_budget=pairs,
            )
        )
        setting, k = parse_setting("LI-LR(2)")
        topo = adapt_topology(base, setting, macro_chains=k)
        lps.append((f"equal-demand n={size}", build_equal_demand_lp(topo, setting)[0]))
        lps.append((f"aggregate n={size}", build_aggregate_lp(topo, setting)[0]))
    return lps


def _random_lps():
    rng = np.random.default_rng(7)
    lps = []
    for n, m in ((20, 30), (40, 60), (80, 120)):
        lp = LinearProgram(n)
        lp.set_objective(rng.integers(1, 10, n).astype(float))
        for _ in range(m):
            # diagonally weighted rows keep the region bounded and nontrivial
            row = rng.integers(0, 5, n).astype(float) + 1.0
            lp.add_constraint(row, Relation.LE, float(rng.integers(n, 4 * n)))
        lps.append((f"random {n}x{m}", lp))
    return lps


def _median_time(lp, kernel, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        sol = solve(lp, kernel=kernel)
        times.append(time.perf_counter() - start)
    return statistics.median(times), sol


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=7, help="runs per measurement")
    args = parser.parse_args()

    if _kernel_ext is None:
        print("compiled kernel unavailable; timing the pure-Python kernel only")
    kernels = [("python", _kernel_py)]
    if _kernel_ext is not None:
        kernels.insert(0, ("cython", _kernel_ext))

    rows = []
    for label, lp in _formulation_lps() + _random_lps():
        entry = {"case": label}
        answers = {}
        for name, kernel in kernels:
            t, sol = _median_time(lp, kernel, args.repeats)
            entry[name] = t
            answers[name] = (sol.status, sol.objective_value, sol.iterations)
        if len(answers) == 2 and answers["cython"] != answers["python"]:
            raise SystemExit(f"kernel disagreement on {label}: {answers}")
        rows.append(entry)

    width = max(len(r["case"]) for r in rows)
    header = f"{'case':<{width}}  " + "".join(f"{name:>12}" for name, _ in kernels)
    if len(kernels) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for r in rows:
        line = f"{r['case']:<{width}}  "
        line += "".join(f"{1e3 * r[name]:>10.3f}ms" for name, _ in kernels)
        if len(kernels) == 2:
            line += f"{r['python'] / r['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
