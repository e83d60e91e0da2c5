import numpy as np
import pytest

from curveclust import Curve, normalize_length, project_sphere, random_warp, to_srvf
from curveclust.curves import uniform_grid


def smooth_curve(rng, n, dim, modes=4):
    """Random bandlimited curve with a linear drift (never degenerate)."""
    t = uniform_grid(n)
    samples = np.zeros((n, dim))
    for d in range(dim):
        samples[:, d] = rng.uniform(0.5, 1.5) * (t if d == 0 else rng.uniform(-1, 1) * t)
        for m in range(1, modes + 1):
            amp = rng.uniform(-1.0, 1.0) / m
            phase = rng.uniform(0.0, 2.0 * np.pi)
            samples[:, d] += amp * np.sin(2.0 * np.pi * m * t + phase)
    return Curve(samples)


def unit_srvf(rng, n, dim, modes=4):
    """Random smooth SRVF on the unit sphere."""
    return project_sphere(to_srvf(normalize_length(smooth_curve(rng, n, dim, modes))))


def smooth_warp(rng, n, strength=0.5):
    return random_warp(n, strength, rng)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
