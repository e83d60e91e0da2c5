"""Square-root velocity transform and the L2 geometry of its function space.

A curve b(t) maps to q(t) = b'(t) / sqrt(||b'(t)||).  Translations of the
curve vanish under the transform, and composing with an increasing
reparameterization gamma acts by q -> (q o gamma) * sqrt(gamma'), which
preserves the L2 metric.  Unit-length curves yield points of the unit sphere
{q : integral ||q||^2 dt = 1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import warp_apply
from .curves import Curve, gradient_uniform
from .exceptions import DegenerateCurveError

# Speeds below this are treated as vanishing velocity; q is set to 0 there.
VELOCITY_EPS = 1e-10


@dataclass
class Srvf:
    """Square-root velocity representation on the same uniform grid as the curve."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(np.atleast_2d(np.asarray(self.values, dtype=np.float64)))
        if self.values.ndim != 2 or self.values.shape[0] < 3:
            raise ValueError("SRVF values must be a T x n array with T >= 3")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("SRVF values must be finite")

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_samples)


def trapezoid_weights(n: int) -> np.ndarray:
    """Quadrature weights of the composite trapezoid rule on the uniform grid."""
    w = np.full(n, 1.0 / (n - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def to_srvf(c: Curve) -> Srvf:
    """Transform a curve to its square-root velocity representation.

    Where the speed falls below ``VELOCITY_EPS`` the output is set to zero,
    the continuous limit of v / sqrt(||v||) as v -> 0.
    """
    v = gradient_uniform(c.samples)
    speed = np.linalg.norm(v, axis=1)
    q = np.zeros_like(v)
    moving = speed >= VELOCITY_EPS
    q[moving] = v[moving] / np.sqrt(speed[moving])[:, None]
    return Srvf(q)


def from_srvf(q: Srvf, start: np.ndarray | None = None) -> Curve:
    """Reconstruct the curve whose square-root velocity representation is ``q``.

    Integrates q(t) ||q(t)|| cumulatively with the trapezoid rule from the
    given start point (the origin by default).
    """
    if start is None:
        start = np.zeros(q.dim)
    start = np.asarray(start, dtype=np.float64).reshape(q.dim)
    v = q.values * np.linalg.norm(q.values, axis=1)[:, None]
    h = 1.0 / (q.n_samples - 1)
    increments = 0.5 * h * (v[1:] + v[:-1])
    samples = np.vstack([start, start + np.cumsum(increments, axis=0)])
    return Curve(samples)


def inner(q1: Srvf, q2: Srvf) -> float:
    """L2 inner product by the trapezoid rule."""
    if q1.values.shape != q2.values.shape:
        raise ValueError(
            f"shape mismatch: {q1.values.shape} vs {q2.values.shape}"
        )
    w = trapezoid_weights(q1.n_samples)
    return float(np.sum(w * np.sum(q1.values * q2.values, axis=1)))


def norm(q: Srvf) -> float:
    return float(np.sqrt(max(inner(q, q), 0.0)))


def project_sphere(q: Srvf) -> Srvf:
    """Rescale onto the unit sphere of the L2 metric."""
    sq = inner(q, q)
    if sq <= 1e-20:
        raise DegenerateCurveError("cannot project a zero SRVF onto the unit sphere")
    return Srvf(q.values / np.sqrt(sq))


def warp_srvf(q: Srvf, gamma: np.ndarray) -> Srvf:
    """Act on an SRVF by a warping function: (q o gamma) * sqrt(gamma').

    ``gamma`` must be a monotone nondecreasing reparameterization of [0, 1]
    sampled on the same grid as ``q``.  Values of q at gamma(t) are linearly
    interpolated and gamma' is taken by the same finite-difference stencil as
    curve velocities; the action preserves the L2 norm up to discretization.
    """
    gamma = np.ascontiguousarray(np.asarray(gamma, dtype=np.float64).reshape(-1))
    validate_warp(gamma, q.n_samples)
    return Srvf(warp_apply(q.values, gamma))


def validate_warp(gamma: np.ndarray, n: int) -> None:
    if gamma.shape != (n,):
        raise ValueError(f"warping function must have {n} samples, got {gamma.shape}")
    if abs(gamma[0]) > 1e-9 or abs(gamma[-1] - 1.0) > 1e-9:
        raise ValueError("warping function must fix the endpoints 0 and 1")
    if np.any(np.diff(gamma) < -1e-12):
        raise ValueError("warping function must be monotone nondecreasing")
