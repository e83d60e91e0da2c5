"""Synthetic datasets: warped sine clusters, warped spectra-like templates,
and perturbation of ingested 2-D trajectory data.

Every generator is a pure function of its parameters and seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import Curve, normalize_length, resample, uniform_grid


@dataclass
class WarpConfig:
    """Severity of the random deformations applied by the generators.

    ``strength`` drives the local warping; the ranges bound the global
    shift of the parameter window, the global stretch/shrink factor and the
    amplitude scale factor.
    """

    strength: float = 0.0
    shift_range: float = 0.0
    stretch_range: float = 0.0
    scale_range: float = 0.0

    def __post_init__(self):
        for name in ("strength", "shift_range", "stretch_range", "scale_range"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.stretch_range >= 1:
            raise ValueError("stretch_range must be < 1")


@dataclass
class Dataset:
    """Curves with optional ground-truth labels and generator metadata."""

    curves: list[Curve]
    labels: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
            if len(self.labels) != len(self.curves):
                raise ValueError("labels must match the number of curves")

    def __len__(self) -> int:
        return len(self.curves)


def random_warp(n: int, strength: float, seed: int | np.random.Generator) -> np.ndarray:
    """Random smooth warping function of [0, 1] on an n-point grid.

    The slope field is exp(strength * s) for a zero-mean bump function s
    (three random Gaussians), integrated and normalized, so the warp is
    strictly increasing and endpoint-pinned.  strength = 0 returns the
    identity exactly.
    """
    if n < 3:
        raise ValueError("warp grid needs at least 3 points")
    if strength < 0:
        raise ValueError("strength must be nonnegative")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    t = uniform_grid(n)
    if strength == 0.0:
        # burn the same draws so strength=0 stays in the seed stream
        rng.uniform(size=(3, 3))
        return t
    s = np.zeros(n)
    for _ in range(3):
        center, width, amp = rng.uniform(0.0, 1.0), rng.uniform(0.05, 0.2), rng.uniform(-1.0, 1.0)
        s += amp * np.exp(-((t - center) ** 2) / (2.0 * width**2))
    s -= s.mean()
    slope = np.exp(strength * s)
    gamma = np.concatenate([[0.0], np.cumsum(0.5 * (slope[1:] + slope[:-1]))])
    gamma /= gamma[-1]
    gamma[-1] = 1.0
    return gamma


def gen_sine_clusters(
    clusters: int,
    per_cluster: int,
    n_samples: int,
    cfg: WarpConfig,
    seed: int,
) -> Dataset:
    """Clusters of 1-D sine curves, one frequency per cluster.

    Cluster j uses j + 1 full cycles on [0, 1].  Instance m of a cluster is
    the base sine composed with a random warp of strength
    cfg.strength * m / per_cluster, so warping grows progressively from the
    unwarped base; every curve is normalized to unit length.
    """
    if clusters < 2 or per_cluster < 2:
        raise ValueError("need at least 2 clusters with 2 curves each")
    rng = np.random.default_rng(seed)
    curves: list[Curve] = []
    labels: list[int] = []
    for j in range(clusters):
        freq = j + 1
        for m in range(per_cluster):
            gamma = random_warp(n_samples, cfg.strength * m / per_cluster, rng)
            samples = np.sin(2.0 * np.pi * freq * gamma)[:, None]
            curves.append(normalize_length(Curve(samples)))
            labels.append(j)
    meta = {
        "generator": "sine",
        "seed": seed,
        "clusters": clusters,
        "per_cluster": per_cluster,
        "n_samples": n_samples,
        "warp": vars(cfg).copy(),
    }
    return Dataset(curves, np.array(labels), meta)


# spectra-like built-ins: a shared continuum plus per-template absorption
# dips; dip counts and depths are graded so the shapes stay elastically
# separated even when warping compresses a dip near the grid resolution
_TEMPLATE_DIPS = (
    ((0.50, 0.70, 0.065),),
    ((0.38, 0.50, 0.050), (0.62, 0.50, 0.050)),
    ((0.30, 0.28, 0.032), (0.50, 0.28, 0.032), (0.70, 0.28, 0.032)),
)
_TEMPLATE_CARRIER = 0.25


def default_templates(n_samples: int = 100) -> list[Curve]:
    """Built-in absorption-spectrum-like 1-D template curves."""
    t = uniform_grid(n_samples)
    out = []
    for dips in _TEMPLATE_DIPS:
        y = 1.0 + _TEMPLATE_CARRIER * np.sin(2.0 * np.pi * t)
        for center, depth, width in dips:
            y = y - depth * np.exp(-((t - center) ** 2) / (2.0 * width**2))
        out.append(Curve(y[:, None]))
    return out


def _deformed_parameter(gamma: np.ndarray, shift: float, stretch: float) -> np.ndarray:
    return np.clip(0.5 + stretch * (gamma - 0.5) + shift, 0.0, 1.0)


def _eval_curve(c: Curve, u: np.ndarray) -> np.ndarray:
    t = c.grid
    return np.stack([np.interp(u, t, c.samples[:, d]) for d in range(c.dim)], axis=1)


def gen_template_clusters(
    templates: list[Curve] | None,
    per_cluster: int,
    cfg: WarpConfig,
    seed: int,
) -> Dataset:
    """Clusters of randomly shifted, stretched, scaled and warped template copies.

    Each instance samples its template at a clipped affine deformation of a
    random warp and multiplies the values by a random amplitude factor.  With
    all ranges zero the cluster is per_cluster exact copies of the template.
    Defaults to the built-in spectra-like templates.
    """
    if templates is None:
        templates = default_templates()
    if len(templates) < 2:
        raise ValueError("need at least 2 templates")
    if per_cluster < 2:
        raise ValueError("need at least 2 curves per cluster")
    rng = np.random.default_rng(seed)
    curves: list[Curve] = []
    labels: list[int] = []
    for j, tpl in enumerate(templates):
        n = tpl.n_samples
        for _ in range(per_cluster):
            shift = rng.uniform(-cfg.shift_range, cfg.shift_range)
            stretch = rng.uniform(1.0 - cfg.stretch_range, 1.0 + cfg.stretch_range)
            amp = rng.uniform(1.0 - cfg.scale_range, 1.0 + cfg.scale_range)
            gamma = random_warp(n, cfg.strength, rng)
            u = _deformed_parameter(gamma, shift, stretch)
            curves.append(Curve(amp * _eval_curve(tpl, u)))
            labels.append(j)
    meta = {
        "generator": "template",
        "seed": seed,
        "clusters": len(templates),
        "per_cluster": per_cluster,
        "warp": vars(cfg).copy(),
    }
    return Dataset(curves, np.array(labels), meta)


def gen_char_trajectories(per_cluster: int = 20, n_samples: int = 100, seed: int = 0) -> Dataset:
    """Stand-in for pen-velocity character data: three stroke classes in 2-D.

    Each class is a distinct smooth velocity pattern vanishing at the ends
    (pen at rest), with small per-instance amplitude and phase jitter.  The
    real digitiser dataset is external; this generator produces data in the
    same 2-D trajectory form for pipelines and tests.
    """
    if per_cluster < 2:
        raise ValueError("need at least 2 curves per cluster")
    rng = np.random.default_rng(seed)
    t = uniform_grid(n_samples)
    env = np.sin(np.pi * t)
    # classes differ in their joint harmonic content, which rotations of the
    # velocity plane cannot mix away
    harmonics = ((1, 2), (1, 3), (2, 3))
    curves: list[Curve] = []
    labels: list[int] = []
    for cls, (fx, fy) in enumerate(harmonics):
        for _ in range(per_cluster):
            a1, a2 = 1.0 + rng.uniform(-0.06, 0.06, size=2)
            phase = rng.uniform(-0.08, 0.08)
            u = t + phase
            vx = a1 * np.sin(2 * np.pi * fx * u) * env
            vy = 0.8 * a2 * np.cos(2 * np.pi * fy * u) * env
            curves.append(Curve(np.stack([vx, vy], axis=1)))
            labels.append(cls)
    meta = {"generator": "char_trajectories", "seed": seed, "per_cluster": per_cluster}
    return Dataset(curves, np.array(labels), meta)


def perturb_trajectories(d: Dataset, cfg: WarpConfig, seed: int) -> Dataset:
    """Randomly shift, stretch, scale and locally warp every curve of a dataset.

    Labels are preserved.  Curves on different grids are first resampled to
    the largest grid in the dataset.
    """
    rng = np.random.default_rng(seed)
    n = max(c.n_samples for c in d.curves)
    out: list[Curve] = []
    for c in d.curves:
        c = resample(c, n) if c.n_samples != n else c
        shift = rng.uniform(-cfg.shift_range, cfg.shift_range)
        stretch = rng.uniform(1.0 - cfg.stretch_range, 1.0 + cfg.stretch_range)
        amp = rng.uniform(1.0 - cfg.scale_range, 1.0 + cfg.scale_range)
        gamma = random_warp(n, cfg.strength, rng)
        u = _deformed_parameter(gamma, shift, stretch)
        out.append(Curve(amp * _eval_curve(c, u)))
    meta = dict(d.meta)
    meta["perturbed"] = {"seed": seed, "warp": vars(cfg).copy()}
    labels = None if d.labels is None else d.labels.copy()
    return Dataset(out, labels, meta)


def flatten_for_lrr(d: Dataset) -> np.ndarray:
    """Stack each curve's coordinate traces into one column of a D x N matrix.

    For an n-dimensional curve on T samples the column has length n * T with
    the full dim-0 trace first, then dim 1, and so on.
    """
    if not d.curves:
        raise ValueError("empty dataset")
    shape = d.curves[0].samples.shape
    for i, c in enumerate(d.curves):
        if c.samples.shape != shape:
            raise ValueError(f"curve {i} has shape {c.samples.shape}, expected {shape}; resample first")
    return np.stack([c.samples.ravel(order="F") for c in d.curves], axis=1)
