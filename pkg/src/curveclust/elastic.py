"""Geometry of the unit sphere of SRVFs and of its quotient by shape motions.

The sphere carries the great-circle geodesics; quotienting out rotations and
reparameterizations is done computationally, by aligning one SRVF to another
(Procrustes rotation alternated with dynamic-programming warping) before
taking the spherical log map.  The resulting tangent vector at the base point
represents the shape difference with rotation and parameterization removed.
"""

from __future__ import annotations

import numpy as np

from ._kernels import align_pair, dp_warp, polish_gamma
from .exceptions import GeodesicUndefinedError, OutOfInjectivityError
from .srvf import Srvf, inner, project_sphere, trapezoid_weights, warp_srvf

# theta below this is treated as a coincident pair (series limit applies)
_THETA_ZERO = 1e-8
# theta within this of pi is treated as antipodal
_THETA_PI_MARGIN = 1e-6
_UNIT_TOL = 1e-6


def identity_warp(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def _check_unit(q: Srvf, name: str) -> None:
    sq = inner(q, q)
    if abs(sq - 1.0) > _UNIT_TOL:
        raise ValueError(f"{name} must have unit L2 norm (got ||.||^2 = {sq:.6g})")


def _cos_angle(q0: Srvf, q1: Srvf) -> float:
    return float(np.clip(inner(q0, q1), -1.0, 1.0))


def geodesic(q0: Srvf, q1: Srvf, tau: float) -> Srvf:
    """Point at fraction ``tau`` along the great-circle arc from q0 to q1."""
    _check_unit(q0, "q0")
    _check_unit(q1, "q1")
    c = _cos_angle(q0, q1)
    theta = float(np.arccos(c))
    if theta >= np.pi - _THETA_PI_MARGIN:
        raise GeodesicUndefinedError("antipodal SRVFs: geodesic is not unique")
    if theta < _THETA_ZERO:
        return Srvf(q0.values.copy())
    s = np.sin(theta)
    vals = (np.sin(theta * (1.0 - tau)) * q0.values + np.sin(theta * tau) * q1.values) / s
    return Srvf(vals)


def geodesic_distance(q0: Srvf, q1: Srvf) -> float:
    """Arc length of the connecting geodesic: arccos of the inner product."""
    return float(np.arccos(_cos_angle(q0, q1)))


def log_sphere(q0: Srvf, q1: Srvf) -> np.ndarray:
    """Tangent vector at q0 pointing to q1, with length equal to the arc distance.

    Returns the zero vector when the points (numerically) coincide.
    """
    _check_unit(q0, "q0")
    _check_unit(q1, "q1")
    c = _cos_angle(q0, q1)
    theta = float(np.arccos(c))
    if theta < _THETA_ZERO:
        return np.zeros_like(q0.values)
    if theta >= np.pi - _THETA_PI_MARGIN:
        raise GeodesicUndefinedError("antipodal SRVFs: log map undefined")
    return (theta / np.sin(theta)) * (q1.values - c * q0.values)


def exp_sphere(q0: Srvf, v: np.ndarray) -> Srvf:
    """Follow the tangent vector ``v`` at q0 along the sphere."""
    _check_unit(q0, "q0")
    v = np.asarray(v, dtype=np.float64)
    w = trapezoid_weights(q0.n_samples)
    nv = float(np.sqrt(max(np.sum(w * np.sum(v * v, axis=1)), 0.0)))
    if nv >= np.pi:
        raise OutOfInjectivityError(f"tangent vector length {nv:.6g} >= pi")
    if nv < 1e-12:
        return Srvf(q0.values.copy())
    return Srvf(np.cos(nv) * q0.values + (np.sin(nv) / nv) * v)


def optimal_rotation(q0: Srvf, q1: Srvf) -> np.ndarray:
    """Rotation R in SO(n) maximizing the inner product of q0 with R q1.

    Solved by the SVD of the weighted cross-covariance, with the usual
    determinant correction to stay in the special orthogonal group.  For 1-D
    curves the group is trivial and the identity is returned.
    """
    if q0.values.shape != q1.values.shape:
        raise ValueError("SRVFs must share a common grid and dimension")
    n = q0.dim
    if n == 1:
        return np.eye(1)
    w = trapezoid_weights(q0.n_samples)
    A = q0.values.T @ (w[:, None] * q1.values)
    U, _, Vt = np.linalg.svd(A)
    d = np.ones(n)
    d[-1] = np.sign(np.linalg.det(U @ Vt)) or 1.0
    return U @ np.diag(d) @ Vt


def rotate_srvf(q: Srvf, R: np.ndarray) -> Srvf:
    return Srvf(q.values @ np.asarray(R, dtype=np.float64).T)


def optimal_warping(q0: Srvf, q1: Srvf, grid: int | None = None, sweeps: int = 2) -> np.ndarray:
    """Warping function minimizing the L2 mismatch of q0 and the warped q1.

    The dynamic program runs on a ``grid`` x ``grid`` lattice (the native
    grid by default) with steps spanning up to 3 nodes; ``sweeps`` passes of
    coordinate-descent polish then lift the lattice quantization.  Falls back
    to the identity warp whenever the recomputed aligned distance would not
    improve on the unaligned one, so the realigned distance never exceeds
    the original.
    """
    _check_unit(q0, "q0")
    _check_unit(q1, "q1")
    T = q0.n_samples
    if grid is not None and grid != T:
        if grid < 3:
            raise ValueError("DP grid must have at least 3 nodes")
        gsub = _subsampled_warp(q0, q1, grid)
        gamma = np.interp(identity_warp(T), identity_warp(grid), gsub)
    else:
        gamma, _ = dp_warp(q0.values, q1.values)
    if sweeps > 0:
        gamma = polish_gamma(q0.values, q1.values, gamma, sweeps)
    d_before = _l2_dist(q0, q1)
    d_after = _l2_dist(q0, warp_srvf(q1, gamma))
    if d_after > d_before:
        return identity_warp(T)
    return gamma


def _subsampled_warp(q0: Srvf, q1: Srvf, grid: int) -> np.ndarray:
    t_sub = identity_warp(grid)
    t = identity_warp(q0.n_samples)
    sub0 = np.stack([np.interp(t_sub, t, q0.values[:, d]) for d in range(q0.dim)], axis=1)
    sub1 = np.stack([np.interp(t_sub, t, q1.values[:, d]) for d in range(q1.dim)], axis=1)
    gamma, _ = dp_warp(np.ascontiguousarray(sub0), np.ascontiguousarray(sub1))
    return gamma


def _l2_dist(q0: Srvf, q1: Srvf) -> float:
    diff = Srvf(q0.values - q1.values)
    return float(np.sqrt(max(inner(diff, diff), 0.0)))


def align(q0: Srvf, q1: Srvf, rounds: int | None = None, tol: float | None = None) -> Srvf:
    """Representative of q1's shape orbit closest to q0.

    Alternates the Procrustes rotation with dynamic-programming warping,
    stopping once a round improves the geodesic distance by less than
    ``tol`` or after ``rounds`` rounds.  For 1-D curves the rotation step is
    trivial and three rounds suffice (the default); in higher dimensions the
    initial rotation estimate can be far off and only corrects a few degrees
    per round, so the default allows up to ten rounds with a coarser stall
    threshold.  After each warp the result is re-projected to the unit
    sphere to absorb discretization drift.  The returned representative is
    never farther from q0 than q1 itself.
    """
    if rounds is None:
        rounds = 3 if q0.dim == 1 else 10
    if tol is None:
        tol = 1e-8 if q0.dim == 1 else 1e-3
    _check_unit(q0, "q0")
    _check_unit(q1, "q1")
    return Srvf(align_pair(q0.values, q1.values, rounds, tol, 2))


def log_quotient(q0: Srvf, q1: Srvf, rounds: int | None = None) -> np.ndarray:
    """Tangent vector at q0 to the aligned representative of q1's shape orbit."""
    return log_sphere(q0, align(q0, q1, rounds=rounds))
