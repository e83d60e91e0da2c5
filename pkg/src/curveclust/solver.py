"""Nuclear-norm-regularized self-expression solvers.

``solve_clrr`` minimizes  lam * ||W||_*  +  1/2 sum_i w_i B_i w_i^T  subject
to unit row sums, by a linearized alternating-direction scheme with adaptive
penalty: each sweep takes one proximal-gradient step (singular value
thresholding of the linearized smooth part), then updates the multiplier and
the penalty.  ``solve_lrr`` is the conventional Euclidean baseline operating
directly on a data matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NumericalFailureError
from .gram import GramTensor, eta_bound


@dataclass
class SolverConfig:
    """Knobs of the alternating-direction solvers.

    The defaults follow the published schedule (beta0=0.1 growing 1.1x up to
    10 whenever the iterate-change criterion holds, both tolerances 1e-4).
    ``eta_override`` replaces the default step constant from
    :func:`curveclust.gram.eta_bound`.
    """

    lam: float = 0.1
    beta0: float = 0.1
    beta_max: float = 10.0
    rho0: float = 1.1
    eps1: float = 1e-4
    eps2: float = 1e-4
    max_iters: int = 500
    eta_override: float | None = None
    zero_diagonal: bool = False

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if self.beta0 <= 0 or self.beta_max <= 0 or self.beta0 > self.beta_max:
            raise ValueError("penalty schedule requires 0 < beta0 <= beta_max")
        if self.rho0 <= 1:
            raise ValueError("rho0 must exceed 1")
        if self.eps1 <= 0 or self.eps2 <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.eta_override is not None and self.eta_override <= 0:
            raise ValueError("eta_override must be positive")


@dataclass
class SolverDiagnostics:
    """Per-run convergence record; all traces have length ``iterations``."""

    iterations: int
    objective_trace: list[float]
    feasibility_trace: list[float]
    beta_trace: list[float]
    fit_trace: list[float]
    final_rank: int
    converged: bool
    residual: np.ndarray | None = None


def nuclear_norm(M: np.ndarray) -> float:
    return float(np.sum(np.linalg.svd(M, compute_uv=False)))


def svt(M: np.ndarray, tau: float) -> np.ndarray:
    """Singular value thresholding: shrink singular values by tau, floor at 0."""
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    return (U * s) @ Vt


def _svt_with_values(M: np.ndarray, tau: float) -> tuple[np.ndarray, np.ndarray]:
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    return (U * s) @ Vt, s


def row_tensor_product(W: np.ndarray, g: GramTensor) -> np.ndarray:
    """Matrix whose i-th row is w_i B_i."""
    return np.einsum("ij,ijk->ik", W, g.slices)


def fit_value(W: np.ndarray, g: GramTensor) -> float:
    """Self-expression residual energy 1/2 sum_i w_i B_i w_i^T."""
    return 0.5 * float(np.sum(W * row_tensor_product(W, g)))


def objective_value(W: np.ndarray, g: GramTensor, lam: float) -> float:
    return lam * nuclear_norm(W) + fit_value(W, g)


def smooth_objective(W: np.ndarray, y: np.ndarray, beta: float, g: GramTensor) -> float:
    """Augmented objective without the nuclear term (the linearized part)."""
    r = W.sum(axis=1) - 1.0
    return fit_value(W, g) + float(y @ r) + 0.5 * beta * float(r @ r)


def smooth_gradient(W: np.ndarray, y: np.ndarray, beta: float, g: GramTensor) -> np.ndarray:
    """Gradient of :func:`smooth_objective` with respect to W.

    Row i is w_i B_i + (y_i + beta * (sum_j w_ij - 1)) * 1^T.
    """
    r = W.sum(axis=1) - 1.0
    return row_tensor_product(W, g) + np.outer(y + beta * r, np.ones(W.shape[1]))


def solve_clrr(g: GramTensor, cfg: SolverConfig | None = None) -> tuple[np.ndarray, SolverDiagnostics]:
    """Solve the row-stochastic low-rank self-expression problem on a Gram tensor.

    Starts from W = 0, y = 0 and iterates: SVT step on the linearized smooth
    part with threshold lam / (eta * beta), convergence check
    (beta ||dW||_F <= eps1 and ||W 1 - 1|| <= eps2), multiplier ascent, and
    the gated penalty growth.  Deterministic for fixed inputs.
    """
    if cfg is None:
        cfg = SolverConfig()
    N = g.n_curves
    if cfg.eta_override is not None:
        eta = cfg.eta_override
    else:
        # the Frobenius bound alone can fall below the descent-stability
        # requirement at the initial penalty (spectral/beta0 + N) when the
        # tensor is small; take whichever is larger
        spec = max(float(np.linalg.norm(g.slices[i], 2)) for i in range(N))
        eta = max(eta_bound(g), spec / cfg.beta0 + N + 1)
    one = np.ones(N)
    W = np.zeros((N, N))
    y = np.zeros(N)
    beta = cfg.beta0

    obj_trace: list[float] = []
    feas_trace: list[float] = []
    beta_trace: list[float] = []
    fit_trace: list[float] = []
    converged = False
    k = 0
    for k in range(1, cfg.max_iters + 1):
        step = 1.0 / (eta * beta)
        target = W - step * smooth_gradient(W, y, beta, g)
        if not np.all(np.isfinite(target)):
            raise NumericalFailureError("non-finite iterate in self-expression solve", iteration=k)
        W_new, svals = _svt_with_values(target, cfg.lam * step)
        nuc = float(np.sum(svals))
        if cfg.zero_diagonal:
            np.fill_diagonal(W_new, 0.0)
            nuc = nuclear_norm(W_new)

        crit1 = beta * np.linalg.norm(W_new - W, "fro") <= cfg.eps1
        r = W_new @ one - one
        feas = float(np.linalg.norm(r))
        crit2 = feas <= cfg.eps2

        y = y + beta * r
        beta_trace.append(beta)
        beta = min(cfg.beta_max, (cfg.rho0 if crit1 else 1.0) * beta)
        W = W_new

        fit = fit_value(W, g)
        obj_trace.append(cfg.lam * nuc + fit)
        fit_trace.append(fit)
        feas_trace.append(feas)
        if crit1 and crit2:
            converged = True
            break

    sv = np.linalg.svd(W, compute_uv=False)
    rank = int(np.sum(sv > 1e-6 * sv[0])) if sv[0] > 0 else 0
    diag = SolverDiagnostics(
        iterations=k,
        objective_trace=obj_trace,
        feasibility_trace=feas_trace,
        beta_trace=beta_trace,
        fit_trace=fit_trace,
        final_rank=rank,
        converged=converged,
    )
    return W, diag


def solve_lrr(
    X: np.ndarray,
    lam: float,
    noise_norm: str = "fro2",
    cfg: SolverConfig | None = None,
) -> tuple[np.ndarray, SolverDiagnostics]:
    """Euclidean low-rank representation baseline on a D x N data matrix.

    Minimizes  noise(E) + lam * ||Z||_*  subject to  X = X Z + E  with an
    auxiliary split J = Z: SVT on J, a noise-dependent proximal update of E
    (squared Frobenius by default, column-wise l2,1 via ``noise_norm="l21"``),
    and a direct linear solve for Z; multiplier and penalty schedules mirror
    the curve solver.
    """
    if cfg is None:
        cfg = SolverConfig(lam=lam)
    if noise_norm not in ("fro2", "l21"):
        raise ValueError(f"unknown noise norm {noise_norm!r}")
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] < 2:
        raise ValueError("data matrix must be D x N with N >= 2")
    if not np.all(np.isfinite(X)):
        raise ValueError("data matrix must be finite")
    D, N = X.shape

    Z = np.zeros((N, N))
    J = np.zeros((N, N))
    E = np.zeros((D, N))
    Y1 = np.zeros((D, N))
    Y2 = np.zeros((N, N))
    XtX = X.T @ X
    # one factorization serves every iteration of the Z solve
    lhs_inv = np.linalg.inv(XtX + np.eye(N))
    mu = cfg.beta0

    obj_trace: list[float] = []
    feas_trace: list[float] = []
    beta_trace: list[float] = []
    fit_trace: list[float] = []
    converged = False
    k = 0
    for k in range(1, cfg.max_iters + 1):
        J = svt(Z + Y2 / mu, lam / mu)
        R = X - X @ Z + Y1 / mu
        if noise_norm == "fro2":
            E = mu * R / (1.0 + mu)
        else:
            E = _prox_l21(R, 1.0 / mu)
        Z_new = lhs_inv @ (X.T @ (X - E + Y1 / mu) + J - Y2 / mu)
        if not np.all(np.isfinite(Z_new)):
            raise NumericalFailureError("non-finite iterate in baseline solve", iteration=k)

        crit1 = mu * np.linalg.norm(Z_new - Z, "fro") <= cfg.eps1
        gap = float(np.linalg.norm(Z_new - J, "fro"))

        Y1 = Y1 + mu * (X - X @ Z_new - E)
        Y2 = Y2 + mu * (Z_new - J)
        beta_trace.append(mu)
        mu = min(cfg.beta_max, (cfg.rho0 if crit1 else 1.0) * mu)
        Z = Z_new

        fit = _noise_value(X - X @ Z, noise_norm)
        obj_trace.append(lam * nuclear_norm(J) + fit)
        fit_trace.append(fit)
        feas_trace.append(gap)
        if crit1 and gap <= cfg.eps2:
            converged = True
            break

    sv = np.linalg.svd(Z, compute_uv=False)
    rank = int(np.sum(sv > 1e-6 * sv[0])) if sv.size and sv[0] > 0 else 0
    diag = SolverDiagnostics(
        iterations=k,
        objective_trace=obj_trace,
        feasibility_trace=feas_trace,
        beta_trace=beta_trace,
        fit_trace=fit_trace,
        final_rank=rank,
        converged=converged,
        residual=X - X @ Z,
    )
    return Z, diag


def _noise_value(E: np.ndarray, noise_norm: str) -> float:
    if noise_norm == "fro2":
        return 0.5 * float(np.sum(E * E))
    return float(np.sum(np.linalg.norm(E, axis=0)))


def _prox_l21(B: np.ndarray, tau: float) -> np.ndarray:
    out = np.zeros_like(B)
    nrm = np.linalg.norm(B, axis=0)
    big = nrm > tau
    out[:, big] = B[:, big] * (1.0 - tau / nrm[big])
    return out
