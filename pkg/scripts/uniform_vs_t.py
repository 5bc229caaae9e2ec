#!/usr/bin/env python3
"""Paired comparison of t-distributed sparks against the uniform baseline.

Both optimizers see the same problem instance and the same per-repetition
seed, so differences come only from the sampling distribution and the
update rule. Verdict is a two-sided rank-sum test on the final gaps.
"""

import argparse

import numpy as np

from tfwa.baselines import uniform_fwa_run
from tfwa.benchfns import make_problem
from tfwa.harness import wilcoxon_rank_sum
from tfwa.swarm import SwarmConfig, run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--function", default="rastrigin")
    parser.add_argument("--dim", type=int, default=10)
    parser.add_argument("--reps", type=int, default=30)
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--instance-seed", type=int, default=0)
    args = parser.parse_args()

    problem = make_problem(args.function, args.dim, seed=args.instance_seed)
    t_gaps, u_gaps = [], []
    for rep in range(args.reps):
        config = SwarmConfig(seed=rep)
        t_gaps.append(run(problem, config).best_fitness - problem.f_star)
        u_gaps.append(uniform_fwa_run(problem, config).best_fitness - problem.f_star)

    u_stat, p = wilcoxon_rank_sum(t_gaps, u_gaps)
    med_t, med_u = np.median(t_gaps), np.median(u_gaps)
    print(f"{args.function} d={args.dim}, {args.reps} paired repetitions")
    print(f"  t-sparks  median gap {med_t:.4e}  mean {np.mean(t_gaps):.4e}")
    print(f"  uniform   median gap {med_u:.4e}  mean {np.mean(u_gaps):.4e}")
    if p < args.alpha:
        verdict = "t-sparks better" if med_t < med_u else "uniform better"
    else:
        verdict = "no significant difference"
    print(f"  rank-sum U={u_stat:.1f} p={p:.4g} -> {verdict}")


if __name__ == "__main__":
    main()
