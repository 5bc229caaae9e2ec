"""Benchmark harness: experiment runner, result files, statistics, CLI.

The ``run`` subcommand executes a suite x dims x algos grid of repeated
seeded runs and writes three artifacts into the output directory:

* ``results.csv`` with one row per run:
  ``problem,dim,algo,rep,seed,best_gap,evals,generations,restarts``
* ``summary.csv`` with per-(problem, dim, algo) mean/std/median gaps
* ``config.json`` echoing the resolved configuration
* ``traces/<problem>_d<dim>_<algo>_rep<rep>.jsonl`` with one record per
  generation per firework: ``gen,fw,gap,df,scale,restart``

``compare`` applies the rank-sum test per function between two results
files; ``rank`` averages per-function ranks of mean gaps across any number
of results files.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .baselines import gaussian_limit_run, random_search_run, uniform_fwa_run
from .benchfns import PROBLEM_NAMES, make_problem
from .swarm import SwarmConfig, run

ALGORITHMS = ("tfwa", "gaussian-limit", "uniform-fwa", "random-search")

RESULT_FIELDS = (
    "problem",
    "dim",
    "algo",
    "rep",
    "seed",
    "best_gap",
    "evals",
    "generations",
    "restarts",
)


# ---------------------------------------------------------------------------
# statistics


def _average_ranks(values):
    """Ranks 1..n of ``values`` (ascending), ties sharing the average rank."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _rank_sum_counts(n, total):
    # counts[w] = number of n-subsets of {1..total} with rank sum w
    max_w = sum(range(total - n + 1, total + 1))
    table = [[0] * (max_w + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for r in range(1, total + 1):
        for k in range(min(r, n), 0, -1):
            row, prev = table[k], table[k - 1]
            for w in range(max_w, r - 1, -1):
                if prev[w - r]:
                    row[w] += prev[w - r]
    return table[n]


def _exact_two_sided(u_obs, n, m):
    counts = _rank_sum_counts(n, n + m)
    offset = n * (n + 1) // 2
    u_counts = counts[offset:]
    total = sum(u_counts)
    cdf = sum(u_counts[: u_obs + 1])
    sf = sum(u_counts[u_obs:])
    return min(1.0, 2.0 * min(cdf, sf) / total)


def wilcoxon_rank_sum(a, b, method="auto"):
    """Two-sided rank-sum test; returns ``(u_statistic, p_value)``.

    The statistic is the Mann-Whitney U of the first sample.  With 12 or
    fewer pooled observations and no ties the p-value comes from the exact
    null distribution; otherwise from the normal approximation with tie and
    continuity corrections.  Two all-identical samples give p = 1.  Needs
    at least three observations per sample.  ``method`` forces a branch:
    "exact" (rejected when ties are present), "normal", or "auto".
    """
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n, m = len(a), len(b)
    if n < 3 or m < 3:
        raise ValueError("need at least three observations per sample")
    pooled = np.concatenate([a, b])
    ranks = _average_ranks(pooled)
    u_a = float(ranks[:n].sum()) - n * (n + 1) / 2.0
    tie_sizes = np.unique(pooled, return_counts=True)[1]
    if method == "exact" and np.any(tie_sizes > 1):
        raise ValueError("exact method requires tie-free samples")
    exact_ok = not np.any(tie_sizes > 1) and (method == "exact" or n + m <= 12)
    if method != "normal" and exact_ok:
        return u_a, _exact_two_sided(int(round(u_a)), n, m)
    total = n + m
    mean_u = n * m / 2.0
    tie_term = float(np.sum(tie_sizes**3 - tie_sizes)) / (total * (total - 1.0))
    var_u = n * m / 12.0 * ((total + 1.0) - tie_term)
    if var_u <= 0:
        return u_a, 1.0
    z = max(abs(u_a - mean_u) - 0.5, 0.0) / math.sqrt(var_u)
    return u_a, min(1.0, math.erfc(z / math.sqrt(2.0)))


@dataclass(frozen=True)
class ComparisonCell:
    win: int
    lose: int
    tie: int
    alpha: float = 0.05


def win_lose_tie(results_a, results_b, alpha=0.05) -> ComparisonCell:
    """Per-function rank-sum comparison aggregated into win/lose/tie counts.

    ``results_a`` and ``results_b`` map function names to per-run samples
    and must cover the same functions.  A function is a tie when the test
    is not significant at ``alpha`` (or the means coincide); otherwise the
    side with the lower mean wins.
    """
    if set(results_a) != set(results_b):
        raise ValueError("the two result sets cover different functions")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    win = lose = tie = 0
    for key in sorted(results_a):
        _, p = wilcoxon_rank_sum(results_a[key], results_b[key])
        mean_a = float(np.mean(results_a[key]))
        mean_b = float(np.mean(results_b[key]))
        if p >= alpha or mean_a == mean_b:
            tie += 1
        elif mean_a < mean_b:
            win += 1
        else:
            lose += 1
    return ComparisonCell(win=win, lose=lose, tie=tie, alpha=alpha)


def average_rank(table):
    """Average rank per algorithm over a function -> {algo: mean gap} table.

    Lower gaps rank better (rank 1 is best); ties share the average rank.
    Every function row must cover the same algorithms, at least two.
    """
    if not table:
        raise ValueError("empty table")
    algos = sorted(next(iter(table.values())))
    if len(algos) < 2:
        raise ValueError("need at least two algorithms to rank")
    totals = dict.fromkeys(algos, 0.0)
    for func in sorted(table):
        row = table[func]
        if sorted(row) != algos:
            raise ValueError(f"function {func!r} does not cover all algorithms")
        ranks = _average_ranks([row[a] for a in algos])
        for a, r in zip(algos, ranks):
            totals[a] += float(r)
    return {a: totals[a] / len(table) for a in algos}


# ---------------------------------------------------------------------------
# experiment runner


@dataclass
class ExperimentConfig:
    """Grid of runs plus output location.

    Per-run seeds are ``base_seed + rep`` and shared across algorithms so
    comparisons are paired.  ``budget_multiplier`` scales with dimension:
    every run gets ``budget_multiplier * dim`` evaluations.  ``out_dir``
    may be ``None`` to keep everything in memory.
    """

    suite: tuple = PROBLEM_NAMES
    dims: tuple = (10,)
    algos: tuple = ("tfwa",)
    reps: int = 30
    budget_multiplier: int = 10000
    base_seed: int = 0
    out_dir: str | None = None
    workers: int = 1
    swarm: SwarmConfig = field(default_factory=SwarmConfig)


def _run_one(job):
    problem_args, algo, swarm_cfg = job
    problem = make_problem(*problem_args)
    if algo == "tfwa":
        return run(problem, swarm_cfg)
    if algo == "gaussian-limit":
        return gaussian_limit_run(problem, swarm_cfg)
    if algo == "uniform-fwa":
        return uniform_fwa_run(problem, swarm_cfg)
    if algo == "random-search":
        return random_search_run(problem, swarm_cfg)
    raise ValueError(f"unknown algorithm {algo!r}; available: {', '.join(ALGORITHMS)}")


def validate_experiment(config: ExperimentConfig):
    """Raise ValueError on unknown names or malformed grids before any run."""
    for name in config.suite:
        if name not in PROBLEM_NAMES:
            raise ValueError(
                f"unknown benchmark function {name!r}; available: {', '.join(PROBLEM_NAMES)}"
            )
    for algo in config.algos:
        if algo not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {algo!r}; available: {', '.join(ALGORITHMS)}"
            )
    for dim in config.dims:
        if dim < 2:
            raise ValueError(f"benchmark problems require dim >= 2, got {dim}")
    if config.reps < 1:
        raise ValueError("reps must be at least 1")
    if config.budget_multiplier < 1:
        raise ValueError("budget multiplier must be at least 1")
    if config.workers < 1:
        raise ValueError("workers must be at least 1")


def run_experiment(config: ExperimentConfig):
    """Execute the full grid; returns (result_rows, summary_rows).

    Result rows are dicts following ``RESULT_FIELDS``, ordered by
    (problem, dim, algo, rep) with suite/dims/algos kept in the configured
    order.  When ``config.out_dir`` is set, writes ``results.csv``,
    ``summary.csv``, ``config.json`` and per-run trace JSONL files.
    Reruns with the same configuration produce byte-identical files.
    """
    validate_experiment(config)
    jobs = []
    for name in config.suite:
        for dim in config.dims:
            for algo in config.algos:
                for rep in range(config.reps):
                    cfg = replace(
                        config.swarm,
                        seed=config.base_seed + rep,
                        budget=config.budget_multiplier * dim,
                    )
                    jobs.append(((name, dim, config.base_seed), algo, cfg))

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_run_one, jobs, chunksize=1))
    else:
        outcomes = [_run_one(job) for job in jobs]

    rows = []
    traces = []
    for job, result in zip(jobs, outcomes):
        (name, dim, _), algo, cfg = job
        f_star = make_problem(name, dim, config.base_seed).f_star
        rows.append(
            {
                "problem": name,
                "dim": dim,
                "algo": algo,
                "rep": cfg.seed - config.base_seed,
                "seed": cfg.seed,
                "best_gap": result.best_fitness - f_star,
                "evals": result.evals_used,
                "generations": result.generations,
                "restarts": result.restarts,
            }
        )
        traces.append(result.trace)

    summary = _summarise(rows)
    if config.out_dir is not None:
        _write_outputs(config, rows, summary, traces)
    return rows, summary


def _summarise(rows):
    groups = {}
    for row in rows:
        groups.setdefault((row["problem"], row["dim"], row["algo"]), []).append(
            row["best_gap"]
        )
    summary = []
    for (name, dim, algo), gaps in groups.items():
        arr = np.asarray(gaps, dtype=float)
        summary.append(
            {
                "problem": name,
                "dim": dim,
                "algo": algo,
                "reps": len(arr),
                "mean_gap": float(arr.mean()),
                "std_gap": float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
                "median_gap": float(np.median(arr)),
            }
        )
    return summary


def _write_outputs(config, rows, summary, traces):
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "results.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULT_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    sum_fields = ("problem", "dim", "algo", "reps", "mean_gap", "std_gap", "median_gap")
    with open(out / "summary.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=sum_fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(summary)
    echo = asdict(config)
    echo["swarm"] = asdict(config.swarm)
    with open(out / "config.json", "w") as fh:
        json.dump(echo, fh, indent=2, sort_keys=True)
        fh.write("\n")
    trace_dir = out / "traces"
    trace_dir.mkdir(exist_ok=True)
    for row, trace in zip(rows, traces):
        path = trace_dir / (
            f"{row['problem']}_d{row['dim']}_{row['algo']}_rep{row['rep']}.jsonl"
        )
        with open(path, "w") as fh:
            for rec in trace:
                fh.write(
                    json.dumps(
                        {
                            "gen": rec.gen,
                            "fw": rec.fw,
                            "gap": rec.gap,
                            "df": rec.df,
                            "scale": rec.scale,
                            "restart": rec.restart,
                        }
                    )
                )
                fh.write("\n")


# ---------------------------------------------------------------------------
# CLI


def _read_results_csv(path):
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(
                {
                    "problem": row["problem"],
                    "dim": int(row["dim"]),
                    "algo": row["algo"],
                    "best_gap": float(row["best_gap"]),
                }
            )
    if not rows:
        raise ValueError(f"no result rows in {path}")
    return rows


def _group_gaps(rows):
    out = {}
    for row in rows:
        out.setdefault(f"{row['problem']}_d{row['dim']}", []).append(row["best_gap"])
    return out


def _load_config_file(path):
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _merge(cli_value, file_data, key, default):
    if cli_value is not None:
        return cli_value
    if key in file_data:
        return file_data[key]
    return default


def _cmd_run(args):
    file_data = _load_config_file(args.config) if args.config else {}
    swarm_data = dict(file_data.get("swarm", {}))
    if args.eps is not None:
        swarm_data["eps"] = args.eps
    if args.literal_psigma:
        swarm_data["literal_psigma"] = True
    if "df_factors" in swarm_data:
        swarm_data["df_factors"] = tuple(swarm_data["df_factors"])
    config = ExperimentConfig(
        suite=tuple(_merge(args.suite, file_data, "suite", list(PROBLEM_NAMES))),
        dims=tuple(_merge(args.dims, file_data, "dims", [10])),
        algos=tuple(_merge(args.algos, file_data, "algos", ["tfwa"])),
        reps=_merge(args.reps, file_data, "reps", 30),
        budget_multiplier=_merge(args.budget_mult, file_data, "budget_mult", 10000),
        base_seed=_merge(args.seed, file_data, "seed", 0),
        out_dir=_merge(args.out, file_data, "out", None),
        workers=_merge(args.workers, file_data, "workers", 1),
        swarm=SwarmConfig(**swarm_data),
    )
    if config.out_dir is None:
        raise ValueError("an output directory is required (--out or config file)")
    validate_experiment(config)
    _, summary = run_experiment(config)
    for row in summary:
        print(
            f"{row['problem']} d={row['dim']} {row['algo']}: "
            f"mean gap {row['mean_gap']:.3e} (std {row['std_gap']:.3e}, "
            f"median {row['median_gap']:.3e}, {row['reps']} reps)"
        )
    print(f"results written to {config.out_dir}")
    return 0


def _cmd_compare(args):
    rows_a = _read_results_csv(args.a)
    rows_b = _read_results_csv(args.b)
    groups_a = _group_gaps(rows_a)
    groups_b = _group_gaps(rows_b)
    cell = win_lose_tie(groups_a, groups_b, alpha=args.alpha)
    for key in sorted(groups_a):
        u, p = wilcoxon_rank_sum(groups_a[key], groups_b[key])
        verdict = "tie"
        if p < args.alpha and np.mean(groups_a[key]) != np.mean(groups_b[key]):
            verdict = "a" if np.mean(groups_a[key]) < np.mean(groups_b[key]) else "b"
        print(f"{key}: U={u:.1f} p={p:.4g} -> {verdict}")
    print(f"win/lose/tie (a vs b, alpha={cell.alpha}): {cell.win}/{cell.lose}/{cell.tie}")
    return 0


def _cmd_rank(args):
    rows = []
    for path in args.inputs:
        rows.extend(_read_results_csv(path))
    by_func = {}
    for row in rows:
        key = f"{row['problem']}_d{row['dim']}"
        by_func.setdefault(key, {}).setdefault(row["algo"], []).append(row["best_gap"])
    table = {
        func: {algo: float(np.mean(gaps)) for algo, gaps in algos.items()}
        for func, algos in by_func.items()
    }
    ranks = average_rank(table)
    for algo in sorted(ranks, key=lambda a: ranks[a]):
        print(f"{algo}: average rank {ranks[algo]:.3f} over {len(table)} functions")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tfwa-bench",
        description="Benchmark harness for the t-distribution fireworks optimiser.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a grid of seeded runs")
    p_run.add_argument("--suite", nargs="+", metavar="NAME", default=None)
    p_run.add_argument("--dims", nargs="+", type=int, default=None)
    p_run.add_argument("--algos", nargs="+", metavar="ALGO", default=None)
    p_run.add_argument("--reps", type=int, default=None)
    p_run.add_argument("--budget-mult", type=int, default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--workers", type=int, default=None)
    p_run.add_argument("--eps", type=float, default=None)
    p_run.add_argument("--literal-psigma", action="store_true")
    p_run.add_argument("--config", default=None, help="JSON config file; flags override")
    p_run.set_defaults(handler=_cmd_run)

    p_cmp = sub.add_parser("compare", help="rank-sum comparison of two results files")
    p_cmp.add_argument("--a", required=True)
    p_cmp.add_argument("--b", required=True)
    p_cmp.add_argument("--alpha", type=float, default=0.05)
    p_cmp.set_defaults(handler=_cmd_compare)

    p_rank = sub.add_parser("rank", help="average ranks across results files")
    p_rank.add_argument("--inputs", nargs="+", required=True)
    p_rank.set_defaults(handler=_cmd_rank)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
