"""Multi-firework run loop with loser-out tournament restarts.

A swarm of ``n_fireworks`` t-distribution fireworks explodes synchronously.
After every full generation each firework is checked against the current
leader: if its recent per-generation improvement, extrapolated over the
remaining generations, cannot close the gap between its own all-time best
and the best current firework fitness, it is thrown out and restarted from
a fresh uniform position.  Each firework carries its own degree-of-freedom
growth factor, so one can anneal to Gaussian sampling quickly while another
keeps heavy tails for longer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .explosion import (
    DegenerateStateError,
    FireworkState,
    derive_params,
    explode,
)


@dataclass
class SwarmConfig:
    """Run configuration.

    ``sparks_per_firework`` and ``budget`` default to ``10 * dim /
    n_fireworks`` and ``10000 * dim`` when left as ``None``.  ``df_factors``
    must provide one growth factor per firework.  ``eps`` is the minimum
    fitness decrease that counts as progress for the tournament.
    ``adjust_df=False`` freezes the degrees of freedom at ``df_init``.
    """

    n_fireworks: int = 2
    df_factors: tuple = (1.05, 10.0)
    df_init: float = 5.0
    sparks_per_firework: int | None = None
    budget: int | None = None
    eps: float = 1e-6
    seed: int = 0
    adjust_df: bool = True
    literal_psigma: bool = False
    paths_first: bool = False


@dataclass
class TraceRecord:
    """One firework's state snapshot at the end of one generation.

    ``gap`` is the firework's current fitness minus the problem optimum,
    ``best_gap`` the swarm-wide best-so-far gap after this generation's
    events, and ``restart`` marks generations in which this firework was
    restarted (by the tournament or after a degenerate state).
    """

    gen: int
    fw: int
    gap: float
    df: float
    scale: float
    restart: bool
    best_gap: float


@dataclass
class RunResult:
    best_position: np.ndarray
    best_fitness: float
    evals_used: int
    generations: int
    trace: list = field(default_factory=list)

    @property
    def restarts(self) -> int:
        return sum(1 for r in self.trace if r.restart)


@dataclass
class SwarmState:
    fireworks: list
    params: list
    evals_used: int
    best_position: np.ndarray
    best_fitness: float


def resolve_run_shape(problem, config: SwarmConfig):
    """Return the concrete (n_fireworks, sparks_per_firework, budget) triple.

    Applies the dimension-dependent defaults and validates the
    configuration against the problem.
    """
    n = config.n_fireworks
    if n < 1:
        raise ValueError(f"need at least one firework, got {n}")
    if len(config.df_factors) != n:
        raise ValueError(
            f"df_factors must provide one factor per firework "
            f"({n}), got {len(config.df_factors)}"
        )
    if any(f <= 1.0 for f in config.df_factors):
        raise ValueError("df growth factors must exceed 1")
    if config.df_init < 2.0:
        raise ValueError(f"df_init must be at least 2, got {config.df_init}")
    if config.eps <= 0:
        raise ValueError("eps must be positive")
    lam = config.sparks_per_firework
    if lam is None:
        lam = max(2, round(10 * problem.dim / n))
    if lam < 2:
        raise ValueError(f"need at least two sparks per firework, got {lam}")
    budget = config.budget if config.budget is not None else 10000 * problem.dim
    if budget < n * (lam + 1):
        raise ValueError(
            f"budget {budget} cannot cover initialisation plus one "
            f"generation ({n * (lam + 1)} evaluations)"
        )
    return n, int(lam), int(budget)


def init_swarm(problem, config: SwarmConfig, rng) -> SwarmState:
    """Initialise all fireworks and evaluate their means.

    Means are drawn uniformly from the centre half of the search box,
    the shape matrix starts at identity with step size ``ub - lb``, and
    both evolution paths start at zero.  Uses ``n_fireworks`` evaluations.
    """
    n, lam, _ = resolve_run_shape(problem, config)
    d = problem.dim
    fireworks = []
    params = []
    best_f = math.inf
    best_x = None
    for i in range(n):
        mean = rng.uniform(problem.lb / 2.0, problem.ub / 2.0, size=d)
        f0 = float(problem.evaluate(mean))
        fireworks.append(
            FireworkState(
                mean=mean,
                shape=np.eye(d),
                df=config.df_init,
                df_factor=float(config.df_factors[i]),
                path_c=np.zeros(d),
                path_s=np.zeros(d),
                scale=float(problem.ub - problem.lb),
                last_gen_best=f0,
                best_fitness=f0,
                best_position=mean.copy(),
            )
        )
        params.append(
            derive_params(
                lam,
                d,
                adapt_df=config.adjust_df,
                literal_psigma=config.literal_psigma,
                paths_first=config.paths_first,
            )
        )
        if f0 < best_f:
            best_f, best_x = f0, mean.copy()
    return SwarmState(
        fireworks=fireworks,
        params=params,
        evals_used=n,
        best_position=best_x,
        best_fitness=best_f,
    )


def loser_out_check(fw: FireworkState, g, g_max, global_best, eps) -> bool:
    """Decide whether a firework should be thrown out and restarted.

    First folds the most recent generation's improvement into the accepted
    improvement ``fw.improvement`` when it exceeds ``eps``.  The firework is
    a loser when that improvement, sustained over the remaining
    ``g_max - g`` generations, still cannot close the gap between its
    all-time best fitness and ``global_best`` (the best current firework
    fitness in the swarm).
    """
    if fw.gen_improvement > eps:
        fw.improvement = fw.gen_improvement
    return fw.improvement * (g_max - g) < fw.best_fitness - global_best


def restart_firework(fw: FireworkState, problem, config: SwarmConfig, rng):
    """Fresh firework state at a uniform position; one evaluation.

    The degree-of-freedom growth factor is the only field inherited from
    the thrown-out firework.
    """
    d = problem.dim
    mean = rng.uniform(problem.lb / 2.0, problem.ub / 2.0, size=d)
    f0 = float(problem.evaluate(mean))
    return FireworkState(
        mean=mean,
        shape=np.eye(d),
        df=config.df_init,
        df_factor=fw.df_factor,
        path_c=np.zeros(d),
        path_s=np.zeros(d),
        scale=float(problem.ub - problem.lb),
        last_gen_best=f0,
        best_fitness=f0,
        best_position=mean.copy(),
    )


def run(problem, config: SwarmConfig) -> RunResult:
    """Full optimisation run on ``problem`` under ``config``.

    Deterministic given ``config.seed``.  Explosions stop as soon as the
    next one would push the evaluation count past the budget; tournament
    restarts (one extra evaluation each) only happen after complete
    generations, so the total count stays within budget + n_fireworks.
    """
    rng = np.random.default_rng(config.seed)
    n, lam, budget = resolve_run_shape(problem, config)
    swarm = init_swarm(problem, config, rng)
    g_max = (budget - n) // (n * lam)
    f_star = float(getattr(problem, "f_star", 0.0))

    trace = []
    generations = 0
    g = 0
    out_of_budget = False
    while not out_of_budget:
        g += 1
        exploded = []
        restarted = set()
        for i in range(n):
            if swarm.evals_used + lam > budget:
                out_of_budget = True
                break
            fw = swarm.fireworks[i]
            try:
                xs, fits = explode(fw, swarm.params[i], problem, rng)
                swarm.evals_used += lam
                if fits[0] < swarm.best_fitness:
                    swarm.best_fitness = float(fits[0])
                    swarm.best_position = xs[0].copy()
                exploded.append(i)
            except DegenerateStateError as exc:
                if exc.fitnesses is not None:
                    swarm.evals_used += lam
                    k = int(np.argmin(exc.fitnesses))
                    if exc.fitnesses[k] < swarm.best_fitness:
                        swarm.best_fitness = float(exc.fitnesses[k])
                        swarm.best_position = exc.sparks[k].copy()
                swarm.fireworks[i] = restart_firework(fw, problem, config, rng)
                swarm.evals_used += 1
                _track_best(swarm, swarm.fireworks[i])
                restarted.add(i)

        if out_of_budget:
            for i in sorted(set(exploded) | restarted):
                fw = swarm.fireworks[i]
                trace.append(
                    TraceRecord(
                        gen=g,
                        fw=i,
                        gap=fw.last_gen_best - f_star,
                        df=fw.df,
                        scale=fw.scale,
                        restart=i in restarted,
                        best_gap=swarm.best_fitness - f_star,
                    )
                )
            if exploded or restarted:
                generations = g
            break

        global_best = min(fw.last_gen_best for fw in swarm.fireworks)
        for i in range(n):
            if i in restarted:
                continue
            fw = swarm.fireworks[i]
            if loser_out_check(fw, g, g_max, global_best, config.eps):
                swarm.fireworks[i] = restart_firework(fw, problem, config, rng)
                swarm.evals_used += 1
                _track_best(swarm, swarm.fireworks[i])
                restarted.add(i)

        for i in range(n):
            fw = swarm.fireworks[i]
            trace.append(
                TraceRecord(
                    gen=g,
                    fw=i,
                    gap=fw.last_gen_best - f_star,
                    df=fw.df,
                    scale=fw.scale,
                    restart=i in restarted,
                    best_gap=swarm.best_fitness - f_star,
                )
            )
        generations = g

    return RunResult(
        best_position=swarm.best_position.copy(),
        best_fitness=swarm.best_fitness,
        evals_used=swarm.evals_used,
        generations=generations,
        trace=trace,
    )


def _track_best(swarm: SwarmState, fw: FireworkState):
    if fw.best_fitness < swarm.best_fitness:
        swarm.best_fitness = fw.best_fitness
        swarm.best_position = fw.best_position.copy()
