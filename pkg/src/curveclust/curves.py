"""Discrete open curves on a uniform parameter grid and their preprocessing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateCurveError

# Arc lengths below this are treated as zero (constant curve).
_MIN_LENGTH = 1e-12


@dataclass
class Curve:
    """A discretely sampled n-dimensional open curve.

    ``samples`` is a T x n array of coordinates taken at T uniformly spaced
    parameters on [0, 1].  The parameter grid is implicit: row i corresponds
    to t = i / (T - 1).
    """

    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.ascontiguousarray(np.atleast_2d(np.asarray(self.samples, dtype=np.float64)))
        if self.samples.ndim != 2:
            raise ValueError("curve samples must be a T x n array")
        if self.samples.shape[0] < 3:
            raise ValueError(f"curve needs at least 3 samples, got {self.samples.shape[0]}")
        if self.samples.shape[1] < 1:
            raise ValueError("curve needs at least 1 coordinate dimension")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("curve samples must be finite")

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def grid(self) -> np.ndarray:
        """The uniform parameter grid in [0, 1]."""
        return np.linspace(0.0, 1.0, self.n_samples)


def uniform_grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def resample(c: Curve, n_out: int) -> Curve:
    """Resample a curve onto ``n_out`` uniform parameters by linear interpolation.

    Endpoints are preserved exactly; a no-op when ``n_out`` equals the
    current sample count.
    """
    if n_out < 3:
        raise ValueError(f"resample target must be >= 3, got {n_out}")
    if n_out == c.n_samples:
        return Curve(c.samples.copy())
    t_old = c.grid
    t_new = uniform_grid(n_out)
    out = np.empty((n_out, c.dim))
    for d in range(c.dim):
        out[:, d] = np.interp(t_new, t_old, c.samples[:, d])
    out[0] = c.samples[0]
    out[-1] = c.samples[-1]
    return Curve(out)


def gradient_uniform(values: np.ndarray) -> np.ndarray:
    """Differentiate samples on the uniform grid.

    Central differences on interior points, 2-point one-sided differences at
    the ends, all divided by the grid spacing 1 / (T - 1).
    """
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    T = values.shape[0]
    h = 1.0 / (T - 1)
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    out[0] = (values[1] - values[0]) / h
    out[-1] = (values[-1] - values[-2]) / h
    return out


def derivative(c: Curve) -> Curve:
    """Velocity of the curve with respect to its parameter."""
    return Curve(gradient_uniform(c.samples))


def arc_length(c: Curve) -> float:
    """Total arc length: trapezoidal integral of the speed over [0, 1]."""
    speed = np.linalg.norm(gradient_uniform(c.samples), axis=1)
    return float(np.trapezoid(speed, dx=1.0 / (c.n_samples - 1)))


def normalize_length(c: Curve) -> Curve:
    """Uniformly rescale so the curve has unit arc length.

    Raises :class:`DegenerateCurveError` for (numerically) constant curves.
    """
    L = arc_length(c)
    if L < _MIN_LENGTH:
        raise DegenerateCurveError("cannot normalize a zero-length (constant) curve")
    return Curve(c.samples / L)
