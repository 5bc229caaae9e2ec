#!/usr/bin/env python3
"""Success-rate experiment on the unimodal benchmark functions.

Runs the t-distribution swarm with default settings on shifted rotated
sphere and elliptic instances and reports how many repetitions reach the
target gap, plus summary statistics of the final gaps.
"""

import argparse

import numpy as np

from tfwa.benchfns import make_problem
from tfwa.swarm import SwarmConfig, run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--functions", nargs="+", default=["sphere", "elliptic"])
    parser.add_argument("--dim", type=int, default=10)
    parser.add_argument("--reps", type=int, default=30)
    parser.add_argument("--target", type=float, default=1e-8)
    parser.add_argument("--instance-seed", type=int, default=0)
    args = parser.parse_args()

    for name in args.functions:
        problem = make_problem(name, args.dim, seed=args.instance_seed)
        gaps = []
        for rep in range(args.reps):
            result = run(problem, SwarmConfig(seed=rep))
            gaps.append(result.best_fitness - problem.f_star)
        gaps = np.asarray(gaps)
        hits = int(np.sum(gaps <= args.target))
        print(
            f"{name} d={args.dim}: {hits}/{args.reps} runs at gap <= {args.target:g}, "
            f"median gap {np.median(gaps):.3e}, worst {gaps.max():.3e}"
        )


if __name__ == "__main__":
    main()
