"""Derivative-free optimisation with Student's t explosion sampling.

A fireworks-style optimiser whose explosions draw sparks from an adapted
multivariate t distribution: natural-gradient update weights fuse with rank
weights for the recombination, the degrees of freedom grow on improvement so
sampling anneals from heavy tails toward a Gaussian, and a loser-out
tournament restarts fireworks that cannot catch up.  A benchmark harness
with shifted/rotated test functions, reference baselines and rank-sum
statistics rounds out the package.
"""

from .baselines import (
    DF_GAUSSIAN_LIMIT,
    BaselineConfig,
    gaussian_limit_run,
    random_search_run,
    uniform_fwa_run,
)
from .benchfns import PROBLEM_NAMES, BenchmarkProblem, make_problem
from .explosion import (
    DF_CAP,
    DegenerateStateError,
    FireworkState,
    StrategyParams,
    adjust_degree_of_freedom,
    derive_params,
    effective_mass,
    explode,
    fuse_weights,
    rank_weights,
    regularize_covariance,
    repair_bounds,
)
from .harness import (
    ALGORITHMS,
    ComparisonCell,
    ExperimentConfig,
    average_rank,
    run_experiment,
    wilcoxon_rank_sum,
    win_lose_tie,
)
from .natgrad import (
    FisherBlocks,
    covariance_natural_gradient,
    fisher_closed_form,
    fisher_monte_carlo,
    fisher_scale_block,
    moment_identity_residuals,
    natgrad_weight,
)
from .swarm import (
    RunResult,
    SwarmConfig,
    TraceRecord,
    init_swarm,
    loser_out_check,
    restart_firework,
    run,
)
from .tdist import GAUSSIAN_DF_CUTOFF, TDistribution

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BaselineConfig",
    "BenchmarkProblem",
    "ComparisonCell",
    "DF_CAP",
    "DF_GAUSSIAN_LIMIT",
    "DegenerateStateError",
    "ExperimentConfig",
    "FireworkState",
    "FisherBlocks",
    "GAUSSIAN_DF_CUTOFF",
    "PROBLEM_NAMES",
    "RunResult",
    "StrategyParams",
    "SwarmConfig",
    "TDistribution",
    "TraceRecord",
    "adjust_degree_of_freedom",
    "average_rank",
    "covariance_natural_gradient",
    "derive_params",
    "effective_mass",
    "explode",
    "fisher_closed_form",
    "fisher_monte_carlo",
    "fisher_scale_block",
    "fuse_weights",
    "gaussian_limit_run",
    "init_swarm",
    "loser_out_check",
    "make_problem",
    "moment_identity_residuals",
    "natgrad_weight",
    "random_search_run",
    "rank_weights",
    "regularize_covariance",
    "repair_bounds",
    "restart_firework",
    "run",
    "run_experiment",
    "uniform_fwa_run",
    "wilcoxon_rank_sum",
    "win_lose_tie",
]
