"""Fisher information of the multivariate t and the weights it induces.

For a t distribution with location ``u``, scale ``S`` and ``df`` degrees of
freedom in dimension ``d``, the Fisher information splits into a location
block and a scale block (the cross block vanishes by elliptical symmetry):

* location block:  ``(d + df) / (d + df + 2) * S^{-1}``
* scale block, parameterised by the lower triangle of ``S``:

      F_ij = a * tr(D_i S^{-1} D_j S^{-1}) + b * tr(D_i S^{-1}) tr(D_j S^{-1})

  with ``a = (d + df) / (2 (d + df + 2))``, ``b = -1 / (2 (d + df + 2))``
  and ``D_k`` the symmetric basis matrix moving the k-th triangle entry.

Preconditioning the log-density gradient at a sample ``x`` with the inverse
location block collapses to a scalar multiple of ``(x - u)``; the scalar

    (d + df + 2) / (df + s),    s = (x - u)' S^{-1} (x - u),

is the per-sample update weight used by the explosion operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tdist import TDistribution


@dataclass(frozen=True)
class FisherBlocks:
    """Closed-form Fisher blocks.

    ``mean_block`` is the (d, d) location block.  ``scale_factor_pair`` holds
    the two trace-term coefficients ``(a, b)`` of the scale block described
    in the module docstring.
    """

    mean_block: np.ndarray
    scale_factor_pair: tuple[float, float]


def fisher_closed_form(dist: TDistribution) -> FisherBlocks:
    """Closed-form Fisher information blocks of ``dist``."""
    d, v = dist.dim, dist.df
    denom = d + v + 2.0
    mean_block = ((d + v) / denom) * dist.scale_inverse()
    a = (d + v) / (2.0 * denom)
    b = -1.0 / (2.0 * denom)
    return FisherBlocks(mean_block=mean_block, scale_factor_pair=(a, b))


def _triangle_indices(d):
    # row-wise lower triangle: (0,0), (1,0), (1,1), (2,0), ...
    return [(i, j) for i in range(d) for j in range(i + 1)]


def fisher_scale_block(dist: TDistribution) -> np.ndarray:
    """Closed-form scale block expanded over the lower-triangle basis.

    Returns a (T, T) matrix with T = d (d + 1) / 2, ordered row-wise over
    the lower triangle.  Off-diagonal parameters move both mirrored entries
    of the scale matrix at once.
    """
    prec = dist.scale_inverse()
    a, b = fisher_closed_form(dist).scale_factor_pair
    idx = _triangle_indices(dist.dim)
    basis = []
    for i, j in idx:
        e = np.zeros((dist.dim, dist.dim))
        e[i, j] = 1.0
        e[j, i] = 1.0
        basis.append(e)
    t = len(basis)
    out = np.empty((t, t))
    for p in range(t):
        ep = basis[p] @ prec
        for q in range(t):
            eq = basis[q] @ prec
            out[p, q] = a * np.trace(ep @ eq) + b * np.trace(ep) * np.trace(eq)
    return out


def fisher_monte_carlo(dist: TDistribution, n: int, rng) -> np.ndarray:
    """Monte Carlo estimate of the full Fisher information.

    Averages outer products of the log-density score over ``n`` draws.  The
    parameter vector stacks the location (d entries) followed by the lower
    triangle of the scale matrix (d (d + 1) / 2 entries, row-wise), so the
    result has shape (d + T, d + T).  Requires ``n >= 10_000``; estimator
    noise shrinks as 1 / sqrt(n).
    """
    if n < 10_000:
        raise ValueError("Monte Carlo Fisher estimate needs n >= 10000 draws")
    d, v = dist.dim, dist.df
    x = dist.sample(n, rng)
    dev = x - dist.mean
    prec = dist.scale_inverse()
    u = dev @ prec
    s = np.einsum("ij,ij->i", dev, u)
    coef = (d + v) / (v + s)
    idx = _triangle_indices(d)
    scores = np.empty((n, d + len(idx)))
    scores[:, :d] = coef[:, None] * u
    for k, (i, j) in enumerate(idx):
        if i == j:
            scores[:, d + k] = 0.5 * (coef * u[:, i] * u[:, i] - prec[i, i])
        else:
            scores[:, d + k] = coef * u[:, i] * u[:, j] - prec[i, j]
    return (scores.T @ scores) / n


def natgrad_weight(s, dim, df):
    """Natural-gradient update weight (dim + df + 2) / (df + s).

    ``s`` is the squared Mahalanobis distance of the sample under the
    sampling distribution; scalar in, scalar out, arrays broadcast.
    Strictly decreasing in ``s`` and approaches 1 for ``s = dim`` as
    ``df`` grows.
    """
    s = np.asarray(s, dtype=float)
    out = (dim + df + 2.0) / (df + s)
    return float(out) if out.ndim == 0 else out


def covariance_natural_gradient(dist: TDistribution, x) -> np.ndarray:
    """Inverse-Fisher preconditioned log-density gradient in the scale matrix.

    Equals ``(d + df + 2) / (d + df) * ((d + df) / (df + s) (x-u)(x-u)' - S)``
    and reduces to the Gaussian rank-one update ``(x-u)(x-u)' - S`` as
    ``df`` grows.  Exposed for validation; the explosion operator only needs
    the scalar weight above.
    """
    d, v = dist.dim, dist.df
    dev = np.asarray(x, dtype=float) - dist.mean
    s = dist.mahalanobis(x)
    outer = np.outer(dev, dev)
    return ((d + v + 2.0) / (d + v)) * (((d + v) / (v + s)) * outer - dist.scale)


def moment_identity_residuals(dist: TDistribution, n: int, rng):
    """Relative errors of the two weighted second-moment identities.

    For dev = x - u and s its squared Mahalanobis distance,

        E[dev dev' / (1 + s/df)^2] = df^2 / ((d+df)(d+df+2)) * S
        E[dev dev' / (1 + s/df)]   = df / (d+df) * S

    Both expectations are estimated from ``n`` draws; returns the pair of
    Frobenius-norm relative residuals (MC vs closed form).
    """
    d, v = dist.dim, dist.df
    x = dist.sample(n, rng)
    dev = x - dist.mean
    s = dist.mahalanobis(x)
    w = 1.0 / (1.0 + s / v)
    m1 = (dev.T * (w * w)) @ dev / n
    m2 = (dev.T * w) @ dev / n
    closed1 = (v * v / ((d + v) * (d + v + 2.0))) * dist.scale
    closed2 = (v / (d + v)) * dist.scale
    r1 = np.linalg.norm(m1 - closed1) / np.linalg.norm(closed1)
    r2 = np.linalg.norm(m2 - closed2) / np.linalg.norm(closed2)
    return float(r1), float(r2)
