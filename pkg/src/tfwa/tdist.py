"""Multivariate Student's t distribution.

The distribution is parameterised by a location vector ``mean``, a positive
definite scale matrix ``scale`` and the degrees of freedom ``df``.  The scale
matrix is *not* the covariance: the covariance is ``df / (df - 2) * scale``
and only exists for ``df > 2``.  As ``df`` grows the distribution approaches
a Gaussian with covariance ``scale``; ``df = 1`` is the multivariate Cauchy.

Sampling uses the classic normal / chi-squared compound representation

    x = mean + L z * sqrt(df / u),  z ~ N(0, I),  u ~ chi2(df),

where ``L`` is the lower Cholesky factor of ``scale``.  For extremely large
``df`` the mixing factor is numerically 1 and the sampler falls back to the
plain Gaussian branch (see ``GAUSSIAN_DF_CUTOFF``).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_triangular

# Above this df the chi-squared mixing factor sqrt(df / u) differs from 1 by
# less than ~1e-3 with overwhelming probability, far below sampling noise at
# any feasible sample size, so the Gaussian branch is statistically
# indistinguishable from the compound one.
GAUSSIAN_DF_CUTOFF = 1.0e7

_SYMMETRY_TOL = 1e-10


class TDistribution:
    """Frozen multivariate Student's t distribution.

    Parameters
    ----------
    mean : array_like, shape (d,)
        Location vector.
    scale : array_like, shape (d, d)
        Symmetric positive definite scale matrix.
    df : float
        Degrees of freedom, must be positive.

    Raises
    ------
    ValueError
        If ``scale`` is not symmetric within tolerance, not positive
        definite, or if ``df <= 0``.

    Notes
    -----
    The Cholesky factor of ``scale`` is computed once at construction and
    reused by :meth:`sample`, :meth:`log_density` and :meth:`mahalanobis`.
    Instances hold no random state; treat them as immutable.
    """

    def __init__(self, mean, scale, df):
        mean = np.asarray(mean, dtype=float)
        scale = np.asarray(scale, dtype=float)
        if mean.ndim != 1 or mean.size == 0:
            raise ValueError("mean must be a non-empty vector")
        d = mean.shape[0]
        if scale.shape != (d, d):
            raise ValueError(
                f"scale must have shape ({d}, {d}) to match mean, got {scale.shape}"
            )
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(scale)):
            raise ValueError("mean and scale must be finite")
        if not (df > 0):
            raise ValueError(f"degrees of freedom must be positive, got {df}")
        asym = float(np.max(np.abs(scale - scale.T)))
        if asym > _SYMMETRY_TOL * max(1.0, float(np.max(np.abs(scale)))):
            raise ValueError(
                f"scale matrix is not symmetric (max asymmetry {asym:.3e})"
            )
        scale = 0.5 * (scale + scale.T)
        try:
            chol = np.linalg.cholesky(scale)
        except np.linalg.LinAlgError as exc:
            raise ValueError("scale matrix is not positive definite") from exc
        self.mean = mean
        self.scale = scale
        self.df = float(df)
        self.dim = d
        self.chol = chol
        self._log_det_scale = 2.0 * float(np.sum(np.log(np.diag(chol))))

    def sample(self, n, rng):
        """Draw ``n`` independent vectors, shape (n, d).

        ``rng`` is a ``numpy.random.Generator``; identical generator states
        produce identical draws.
        """
        if n < 1:
            raise ValueError("need at least one draw")
        y = rng.standard_normal((n, self.dim)) @ self.chol.T
        if self.df < GAUSSIAN_DF_CUTOFF:
            u = rng.chisquare(self.df, size=n)
            y *= np.sqrt(self.df / u)[:, None]
        return self.mean + y

    def mahalanobis(self, x):
        """Squared Mahalanobis distance (x - mean)' scale^{-1} (x - mean).

        Accepts a single d-vector (returns a float) or an (n, d) batch of
        rows (returns an (n,) array).
        """
        x = np.asarray(x, dtype=float)
        dev = np.atleast_2d(x) - self.mean
        w = solve_triangular(self.chol, dev.T, lower=True)
        s = np.einsum("ij,ij->j", w, w)
        return float(s[0]) if x.ndim == 1 else s

    def log_density(self, x):
        """Log of the density at ``x``.

        The normalising constant is evaluated in log space through
        ``lgamma`` so it stays finite for any admissible ``df``.
        """
        s = self.mahalanobis(np.asarray(x, dtype=float))
        v, d = self.df, self.dim
        const = (
            math.lgamma(0.5 * (v + d))
            - math.lgamma(0.5 * v)
            - 0.5 * d * math.log(v * math.pi)
            - 0.5 * self._log_det_scale
        )
        return const - 0.5 * (d + v) * np.log1p(s / v)

    def scale_inverse(self):
        """Inverse of the scale matrix, solved through the Cholesky factor."""
        inv_l = solve_triangular(self.chol, np.eye(self.dim), lower=True)
        return inv_l.T @ inv_l

    def moments(self):
        """Return ``(mean, covariance)``.

        The covariance is ``df / (df - 2) * scale`` for ``df > 2`` and
        ``None`` otherwise (the second moment does not exist).
        """
        if self.df > 2:
            return self.mean.copy(), (self.df / (self.df - 2.0)) * self.scale
        return self.mean.copy(), None

    def __repr__(self):
        return f"TDistribution(dim={self.dim}, df={self.df})"
