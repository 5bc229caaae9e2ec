"""Single-firework explosion generation.

One explosion draws a population of sparks from a t distribution centred on
the firework, ranks them by fitness, fuses logarithmic rank weights with the
per-spark natural-gradient weights, and recombines: the mean moves to the
fused weighted average, the shape matrix gets rank-one (evolution path) and
rank-mu (weighted spark) updates, the global step size follows cumulative
path length control, and the degrees of freedom grow whenever the generation
improved on the previous one, so the sampler anneals from heavy tails toward
a Gaussian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .natgrad import natgrad_weight
from .tdist import TDistribution

# Degrees of freedom are never grown past this cap; far beyond the Gaussian
# sampling cutoff already.
DF_CAP = float(2**30)


class DegenerateStateError(RuntimeError):
    """Adaptive state can no longer produce a valid sampling distribution.

    Raised when the shape matrix or step size collapses to something that
    cannot be factorised.  Callers restart the firework.  When the failure
    happens after the sparks were already evaluated, the evaluated positions
    and fitnesses ride along so the caller can keep its bookkeeping exact.
    """

    def __init__(self, message, sparks=None, fitnesses=None):
        super().__init__(message)
        self.sparks = sparks
        self.fitnesses = fitnesses


@dataclass
class FireworkState:
    """Mutable per-firework adaptive state.

    ``shape`` is the correlation-structure matrix C of the sampling
    distribution T(mean, scale^2 C, df); ``scale`` is the scalar step size.
    ``path_c`` and ``path_s`` are the shape and step-size evolution paths.
    ``last_gen_best`` is the best spark fitness of the most recent
    generation (the initial mean fitness right after a (re)start),
    ``gen_improvement`` the raw decrease of that value in the most recent
    generation (may be negative), and ``improvement`` the last accepted
    improvement used by the loser-out tournament.  ``gen_count`` counts
    generations since the last (re)start.
    """

    mean: np.ndarray
    shape: np.ndarray
    df: float
    df_factor: float
    path_c: np.ndarray
    path_s: np.ndarray
    scale: float
    last_gen_best: float
    best_fitness: float
    best_position: np.ndarray
    improvement: float = 0.0
    gen_improvement: float = 0.0
    gen_count: int = 0

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


@dataclass
class StrategyParams:
    """Static and per-generation strategy constants for one firework.

    The static rows are fixed by the population size and dimension at
    construction (see :func:`derive_params`).  The dynamic rows ``c_cn``,
    ``c_sn``, ``h_gate`` and ``c_1a`` are recomputed by :func:`explode` at
    the start of every generation from the current step size, step-size path
    and generation counter, so an instance must not be shared between
    fireworks that explode concurrently.
    """

    lam: int
    dim: int
    raw_weights: np.ndarray
    mu_eff: float
    c_c: float
    c_s: float
    c_1: float
    c_mu: float
    c_n: float
    c_cn: float = 0.0
    c_sn: float = 0.0
    h_gate: int = 1
    c_1a: float = 0.0
    adapt_df: bool = True
    literal_psigma: bool = False
    paths_first: bool = False

    def refresh_dynamic(self, scale, path_s, gen_count):
        """Recompute the per-generation rows for the given firework state."""
        self.c_cn = math.sqrt(self.c_c * (2.0 - self.c_c) * self.mu_eff) / scale
        self.c_sn = math.sqrt(self.c_s * (2.0 - self.c_s) * self.mu_eff) / scale
        norm2 = float(np.dot(path_s, path_s))
        horizon = 1.0 - (1.0 - self.c_s) ** (2 * gen_count + 1)
        bound = 2.0 + 4.0 / (self.dim + 1.0)
        self.h_gate = int(norm2 / (self.dim * horizon) <= bound)
        self.c_1a = self.c_1 * (
            1.0 - (1.0 - self.h_gate**2) * self.c_c * (2.0 - self.c_c)
        )


def rank_weights(lam: int) -> np.ndarray:
    """Logarithmic rank-based recombination weights, normalised to sum 1.

    Rank i (0-based, best first) gets max(ln(0.5 + lam/2) - ln(1 + i), 0)
    before normalisation; roughly the better half of the population carries
    positive weight.  Requires ``lam >= 2``.
    """
    if lam < 2:
        raise ValueError(f"need at least two sparks, got lam={lam}")
    w = np.maximum(math.log(0.5 + 0.5 * lam) - np.log1p(np.arange(lam)), 0.0)
    return w / w.sum()


def effective_mass(weights) -> float:
    """Effective selection mass (sum w)^2 / sum(w^2) of a weight vector."""
    w = np.asarray(weights, dtype=float)
    return float(w.sum()) ** 2 / float(w @ w)


def fuse_weights(rank_w, natural_w) -> np.ndarray:
    """Elementwise product of rank and natural weights, renormalised to 1."""
    fused = np.asarray(rank_w, dtype=float) * np.asarray(natural_w, dtype=float)
    total = fused.sum()
    if not (total > 0) or not np.isfinite(total):
        raise DegenerateStateError("fused recombination weights are degenerate")
    return fused / total


def derive_params(
    lam: int,
    dim: int,
    adapt_df: bool = True,
    literal_psigma: bool = False,
    paths_first: bool = False,
) -> StrategyParams:
    """Build the static strategy constants for population size ``lam``.

    The learning rates follow the standard cumulative-adaptation recipe:
    ``c_c`` and ``c_s`` are the path decay rates, ``c_1``/``c_mu`` the
    rank-one and rank-mu shape learning rates, and ``c_n`` (step-size
    damping) is tied to ``c_s``.
    """
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    w = rank_weights(lam)
    mu_eff = effective_mass(w)
    c_c = (4.0 + mu_eff / dim) / (4.0 + dim + 2.0 * mu_eff / dim)
    c_s = (2.0 + mu_eff) / (dim + mu_eff + 5.0)
    c_1 = 2.0 / ((dim + 1.3) ** 2 + mu_eff)
    c_mu = min(
        1.0 - c_1,
        2.0 * (mu_eff + 1.0 / mu_eff - 2.0) / (mu_eff + (dim + 2.0) ** 2),
    )
    return StrategyParams(
        lam=lam,
        dim=dim,
        raw_weights=w,
        mu_eff=mu_eff,
        c_c=c_c,
        c_s=c_s,
        c_1=c_1,
        c_mu=c_mu,
        c_n=c_s,
        adapt_df=adapt_df,
        literal_psigma=literal_psigma,
        paths_first=paths_first,
    )


def adjust_degree_of_freedom(df, fit, f_best, factor):
    """Grow df when the generation improved on the previous one.

    On improvement (``fit < f_best``) the new value is
    ``min(max(df * factor, df + 1), DF_CAP)``: the factor drives geometric
    growth, the ``df + 1`` floor keeps progress when the factor is close to
    1, and the cap keeps the value finite.  Without improvement df is
    unchanged.
    """
    if fit < f_best:
        return min(max(df * factor, df + 1.0), DF_CAP)
    return df


def repair_bounds(x, lb, ub, rng):
    """Resample out-of-bounds coordinates uniformly inside [lb, ub].

    In-bounds coordinates are untouched.  Works elementwise on vectors or
    (n, d) batches.
    """
    if not lb < ub:
        raise ValueError(f"invalid bounds [{lb}, {ub}]")
    out = np.array(x, dtype=float)
    bad = (out < lb) | (out > ub)
    n_bad = int(bad.sum())
    if n_bad:
        out[bad] = rng.uniform(lb, ub, size=n_bad)
    return out


def regularize_covariance(shape) -> np.ndarray:
    """Project a shape matrix back onto the symmetric positive definite cone.

    Symmetrises, then raises any eigenvalue below
    ``1e-12 * max(1, trace / d)`` to that floor.  A matrix that is already
    comfortably positive definite is returned after symmetrisation only, so
    the identity is a fixed point.  Non-finite entries (or a failed
    eigendecomposition) mean the adaptive state has collapsed and raise
    :class:`DegenerateStateError`.
    """
    shape = np.asarray(shape, dtype=float)
    if not np.all(np.isfinite(shape)):
        raise DegenerateStateError("shape matrix contains non-finite entries")
    sym = 0.5 * (shape + shape.T)
    floor = 1e-12 * max(1.0, float(np.trace(sym)) / sym.shape[0])
    try:
        vals, vecs = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise DegenerateStateError("shape matrix eigendecomposition failed") from exc
    if vals[0] >= floor:
        return sym
    vals = np.maximum(vals, floor)
    out = (vecs * vals) @ vecs.T
    return 0.5 * (out + out.T)


def _matrix_inv_sqrt(shape):
    vals, vecs = np.linalg.eigh(shape)
    vals = np.maximum(vals, 1e-18)
    return (vecs / np.sqrt(vals)) @ vecs.T


def _evaluate_all(objective, xs):
    batch = getattr(objective, "evaluate_batch", None)
    if batch is not None:
        return np.asarray(batch(xs), dtype=float)
    return np.array([float(objective.evaluate(x)) for x in xs])


def _advance_paths(state, params, delta_m):
    pc = (1.0 - params.c_c) * state.path_c + params.c_cn * params.h_gate * delta_m
    if params.literal_psigma:
        back = np.linalg.solve(state.shape, delta_m)
    else:
        back = _matrix_inv_sqrt(state.shape) @ delta_m
    ps = (1.0 - params.c_s) * state.path_s + params.c_sn * back
    return pc, ps


def explode(state: FireworkState, params: StrategyParams, objective, rng):
    """Run one explosion generation, mutating ``state`` in place.

    ``objective`` must expose ``lb``, ``ub`` and ``evaluate(x) -> float``
    (an ``evaluate_batch`` method is used when present).  Returns the pair
    ``(positions, fitnesses)`` of the evaluated sparks sorted best first.
    State is only written once every quantity for the generation has been
    computed, so a raised :class:`DegenerateStateError` leaves ``state``
    untouched apart from carrying the evaluated sparks on the exception.
    """
    lam, d = params.lam, params.dim
    if not (np.isfinite(state.scale) and state.scale > 0):
        raise DegenerateStateError(f"step size collapsed to {state.scale}")
    params.refresh_dynamic(state.scale, state.path_s, state.gen_count)
    try:
        dist = TDistribution(np.zeros(d), state.shape, state.df)
    except ValueError as exc:
        raise DegenerateStateError(str(exc)) from exc

    draws = dist.sample(lam, rng)
    xs = repair_bounds(state.mean + state.scale * draws, objective.lb, objective.ub, rng)
    fits = _evaluate_all(objective, xs)

    order = np.argsort(fits, kind="stable")
    xs, fits = xs[order], fits[order]
    s = dist.mahalanobis(draws[order])
    fused = fuse_weights(params.raw_weights, natgrad_weight(s, d, state.df))

    mean_new = xs.T @ fused
    delta_m = mean_new - state.mean

    if params.paths_first:
        path_c_new, path_s_new = _advance_paths(state, params, delta_m)
        rank_one_path = path_c_new
    else:
        rank_one_path = state.path_c

    dev = (xs - state.mean) / state.scale
    base = 1.0 - params.c_1a - params.c_mu * float(fused.sum())
    shape_new = (
        base * state.shape
        + params.c_1 * np.outer(rank_one_path, rank_one_path)
        + params.c_mu * (dev.T * fused) @ dev
    )

    if not params.paths_first:
        path_c_new, path_s_new = _advance_paths(state, params, delta_m)

    scale_new = state.scale * math.exp(
        min(1.0, 0.5 * params.c_n * (float(np.dot(path_s_new, path_s_new)) / d - 1.0))
    )

    try:
        shape_new = regularize_covariance(shape_new)
    except DegenerateStateError as exc:
        exc.sparks, exc.fitnesses = xs, fits
        raise

    gen_best = float(fits[0])
    state.mean = mean_new
    state.shape = shape_new
    state.path_c = path_c_new
    state.path_s = path_s_new
    state.scale = scale_new
    if params.adapt_df:
        state.df = adjust_degree_of_freedom(
            state.df, gen_best, state.last_gen_best, state.df_factor
        )
    state.gen_improvement = state.last_gen_best - gen_best
    state.last_gen_best = gen_best
    if gen_best < state.best_fitness:
        state.best_fitness = gen_best
        state.best_position = xs[0].copy()
    state.gen_count += 1
    return xs, fits
