"""Compiled kernel for dynamic-programming curve registration.

The lattice search minimizes the squared L2 mismatch between a fixed SRVF and
a warped one over piecewise-linear warps on the T x T grid.  Allowed steps
reach back up to 3 nodes in each direction, so segment slopes lie in
[1/3, 3]; with a 6x-refined lookup table every interpolation point lands on
an integer index.
"""

import numpy as np
from numba import njit

# refinement factor of the interpolation table; divisible by every step size
REFINE = 6
MAX_STEP = 3
_INF = 1e300


@njit(cache=True, nogil=True)
def refine_table(q):
    """Linear interpolation of q at T-grid positions refined REFINE-fold."""
    T, n = q.shape
    m = REFINE * (T - 1) + 1
    out = np.empty((m, n))
    for p in range(m):
        x = p / REFINE
        i = int(x)
        if i > T - 2:
            i = T - 2
        f = x - i
        for d in range(n):
            out[p, d] = (1.0 - f) * q[i, d] + f * q[i + 1, d]
    return out


@njit(cache=True, nogil=True)
def dp_warp(q0, q1):
    """Minimize ||q0 - (q1 o gamma) sqrt(gamma')||^2 over lattice warps.

    Returns ``(gamma, cost)`` where gamma is the piecewise-linear minimizer
    sampled on the grid of q0 and cost is the trapezoid value of the squared
    mismatch along it.
    """
    T, n = q0.shape
    dt = 1.0 / (T - 1)
    q1r = refine_table(q1)

    sqs = np.empty((MAX_STEP + 1, MAX_STEP + 1))
    for a in range(1, MAX_STEP + 1):
        for b in range(1, MAX_STEP + 1):
            sqs[a, b] = np.sqrt(b / a)

    cost = np.full((T, T), _INF)
    pred_i = np.full((T, T), -1, np.int64)
    pred_j = np.full((T, T), -1, np.int64)
    cost[0, 0] = 0.0

    for i in range(1, T):
        for j in range(1, T):
            best = _INF
            bi = -1
            bj = -1
            for a in range(1, MAX_STEP + 1):
                if a > i:
                    break
                for b in range(1, MAX_STEP + 1):
                    if b > j:
                        break
                    prev = cost[i - a, j - b]
                    if prev >= _INF:
                        continue
                    rs = sqs[a, b]
                    k = (REFINE * b) // a
                    base = REFINE * (j - b)
                    e = 0.0
                    for m in range(a + 1):
                        w = 1.0
                        if m == 0 or m == a:
                            w = 0.5
                        p = base + m * k
                        s = 0.0
                        for d in range(n):
                            diff = q0[i - a + m, d] - rs * q1r[p, d]
                            s += diff * diff
                        e += w * s
                    c = prev + e * dt
                    if c < best:
                        best = c
                        bi = i - a
                        bj = j - b
            cost[i, j] = best
            pred_i[i, j] = bi
            pred_j[i, j] = bj

    gamma = np.empty(T)
    gamma[0] = 0.0
    gamma[T - 1] = 1.0
    i = T - 1
    j = T - 1
    while i > 0:
        pi = pred_i[i, j]
        pj = pred_j[i, j]
        for m in range(pi, i):
            f = (m - pi) / (i - pi)
            gamma[m] = ((1.0 - f) * pj + f * j) * dt
        i = pi
        j = pj
    return gamma, cost[T - 1, T - 1]


@njit(cache=True, nogil=True)
def _local_warp_cost(q0, q1, g, i, h):
    """Terms of the warped-mismatch trapezoid that depend on g[i].

    Matches the action of warping exactly: linear interpolation of q1 and
    central-difference slopes (one-sided at the ends, floored at zero).
    """
    T, n = q0.shape
    tot = 0.0
    for k in range(i - 1, i + 2):
        if k < 0 or k > T - 1:
            continue
        if k == 0:
            gd = (g[1] - g[0]) / h
        elif k == T - 1:
            gd = (g[T - 1] - g[T - 2]) / h
        else:
            gd = (g[k + 1] - g[k - 1]) / (2.0 * h)
        if gd < 0.0:
            gd = 0.0
        root = np.sqrt(gd)
        pos = g[k] * (T - 1)
        idx = int(pos)
        if idx > T - 2:
            idx = T - 2
        frac = pos - idx
        s = 0.0
        for d in range(n):
            interp = (1.0 - frac) * q1[idx, d] + frac * q1[idx + 1, d]
            diff = q0[k, d] - root * interp
            s += diff * diff
        w = h
        if k == 0 or k == T - 1:
            w = 0.5 * h
        tot += w * s
    return tot


@njit(cache=True, nogil=True)
def trapz_inner(a, b):
    """L2 inner product of two T x n sample arrays by the trapezoid rule."""
    T, n = a.shape
    h = 1.0 / (T - 1)
    tot = 0.0
    for k in range(T):
        s = 0.0
        for d in range(n):
            s += a[k, d] * b[k, d]
        w = h
        if k == 0 or k == T - 1:
            w = 0.5 * h
        tot += w * s
    return tot


@njit(cache=True, nogil=True)
def warp_apply(q, gamma):
    """(q o gamma) * sqrt(gamma'): linear interpolation of q at gamma and
    central-difference slopes (one-sided at the ends, floored at zero)."""
    T, n = q.shape
    h = 1.0 / (T - 1)
    out = np.empty_like(q)
    for k in range(T):
        if k == 0:
            gd = (gamma[1] - gamma[0]) / h
        elif k == T - 1:
            gd = (gamma[T - 1] - gamma[T - 2]) / h
        else:
            gd = (gamma[k + 1] - gamma[k - 1]) / (2.0 * h)
        if gd < 0.0:
            gd = 0.0
        root = np.sqrt(gd)
        pos = gamma[k] * (T - 1)
        idx = int(pos)
        if idx > T - 2:
            idx = T - 2
        frac = pos - idx
        for d in range(n):
            out[k, d] = root * ((1.0 - frac) * q[idx, d] + frac * q[idx + 1, d])
    return out


@njit(cache=True, nogil=True)
def _procrustes_rotate(q0, q1):
    """Rotate q1 by the special-orthogonal matrix maximizing its inner
    product with q0 (weighted Procrustes with determinant correction)."""
    T, n = q0.shape
    h = 1.0 / (T - 1)
    A = np.zeros((n, n))
    for k in range(T):
        w = h
        if k == 0 or k == T - 1:
            w = 0.5 * h
        for a in range(n):
            for b in range(n):
                A[a, b] += w * q0[k, a] * q1[k, b]
    U, _, Vt = np.linalg.svd(A)
    R = U @ Vt
    if np.linalg.det(R) < 0.0:
        for a in range(n):
            U[a, n - 1] = -U[a, n - 1]
        R = U @ Vt
    return q1 @ R.T


@njit(cache=True, nogil=True)
def align_pair(q0, q1, rounds, tol, sweeps):
    """Alternating rotation/warp alignment of q1 to q0 (both unit norm).

    Per round: Procrustes rotation (skipped for 1-D), lattice warp search,
    coordinate polish, identity fallback if warping would not reduce the L2
    mismatch, re-projection to the unit sphere.  Keeps the best candidate by
    geodesic distance; stops when a round improves it by less than tol.
    """
    T, n = q0.shape
    best = q1.copy()
    c = trapz_inner(q0, q1)
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    d_best = np.arccos(c)
    cur = q1.copy()
    for _ in range(rounds):
        d_round = d_best
        if n > 1:
            cur = _procrustes_rotate(q0, cur)
            c = trapz_inner(q0, cur)
            if c > 1.0:
                c = 1.0
            elif c < -1.0:
                c = -1.0
            d = np.arccos(c)
            if d < d_best:
                d_best = d
                best = cur.copy()
        gamma, _ = dp_warp(q0, cur)
        if sweeps > 0:
            gamma = polish_gamma(q0, cur, gamma, sweeps)
        cand = warp_apply(cur, gamma)
        # identity fallback: warping must not increase the L2 mismatch
        d2_before = trapz_inner(q0, q0) - 2.0 * trapz_inner(q0, cur) + trapz_inner(cur, cur)
        diff = q0 - cand
        d2_after = trapz_inner(diff, diff)
        if d2_after > d2_before:
            cand = cur
        sq = trapz_inner(cand, cand)
        if sq <= 1e-20:
            break
        cand = cand / np.sqrt(sq)
        cur = cand
        c = trapz_inner(q0, cur)
        if c > 1.0:
            c = 1.0
        elif c < -1.0:
            c = -1.0
        d = np.arccos(c)
        if d < d_best:
            d_best = d
            best = cur.copy()
        if d_round - d_best < tol:
            break
    return best


_INV_PHI = 0.6180339887498949


@njit(cache=True, nogil=True)
def polish_gamma(q0, q1, gamma, sweeps):
    """Coordinate-descent refinement of a lattice warp.

    Each pass minimizes the exact warped-mismatch objective over one g[i] at
    a time (golden-section search on [g[i-1], g[i+1]], keeping the warp
    monotone and endpoint-pinned), accepting only strict improvements, so the
    objective never increases.  Lifts the node-quantization floor of the
    lattice search.
    """
    T = q0.shape[0]
    h = 1.0 / (T - 1)
    g = gamma.copy()
    for _ in range(sweeps):
        for i in range(1, T - 1):
            lo = g[i - 1]
            hi = g[i + 1]
            if hi - lo < 1e-14:
                continue
            orig = g[i]
            f_orig = _local_warp_cost(q0, q1, g, i, h)
            a = lo
            b = hi
            c = b - _INV_PHI * (b - a)
            d = a + _INV_PHI * (b - a)
            g[i] = c
            fc = _local_warp_cost(q0, q1, g, i, h)
            g[i] = d
            fd = _local_warp_cost(q0, q1, g, i, h)
            for _ in range(8):
                if fc < fd:
                    b = d
                    d = c
                    fd = fc
                    c = b - _INV_PHI * (b - a)
                    g[i] = c
                    fc = _local_warp_cost(q0, q1, g, i, h)
                else:
                    a = c
                    c = d
                    fc = fd
                    d = a + _INV_PHI * (b - a)
                    g[i] = d
                    fd = _local_warp_cost(q0, q1, g, i, h)
            if fc < fd:
                best, f_best = c, fc
            else:
                best, f_best = d, fd
            g[i] = best if f_best < f_orig else orig
    return g
