"""Beamformer weight solvers.

Three designs share the distortionless constraint w^H a0 = 1:

* closed-form minimum-variance (quadratic objective only),
* l1-penalized: adds gamma * sum of |grid gain| over the whole grid,
* mixed-norm: gamma * (max mainlobe |gain| + sum of sidelobe |gain|).

The penalized problems are solved by an ADMM splitting on the grid gains
z = A^H w with the equality constraint eliminated up front, so every iterate
is feasible by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .arrays import LobePartition, SteeringMatrix
from .proximal import prox_l1_complex, prox_linf_complex
from .simulate import CovarianceMatrix

__all__ = [
    "WeightVector",
    "PenaltySpec",
    "SolverOptions",
    "SolveDiagnostics",
    "mvdr_closed_form",
    "sparse_beamformer",
    "mixed_norm_beamformer",
    "solve_composite",
    "penalized_objective",
]

# The ADMM works on a normalized problem: the covariance is scaled to unit
# mean eigenvalue and the steering columns to unit norm. On top of that the
# user-facing penalty parameter is damped by a fixed factor, calibrated so
# the default rho converges on grids much denser than the antenna count
# (N >> M), where the dual residual otherwise dominates the stopping test.
_RHO_DAMPING = 0.25


@dataclass(frozen=True)
class WeightVector:
    """Complex weights plus the angle they were steered to."""

    w: np.ndarray
    steering_angle_deg: float


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty weight and lobe layout; ``sparse_only`` ignores the partition."""

    gamma: float
    mode: str = "sparse_only"
    partition: LobePartition | None = None

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.mode not in ("sparse_only", "mixed"):
            raise ValueError(f"unknown penalty mode {self.mode!r}")
        if self.mode == "mixed" and self.partition is None:
            raise ValueError("mixed mode requires a lobe partition")


@dataclass(frozen=True)
class SolverOptions:
    max_iterations: int = 5000
    abs_tol: float = 1e-7
    rel_tol: float = 1e-5
    penalty_parameter_rho: float = 1.0
    over_relaxation: float = 1.0
    adaptive_rho: bool = False  # residual balancing, off for reproducibility

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.penalty_parameter_rho > 0:
            raise ValueError("penalty_parameter_rho must be positive")
        if not 1.0 <= self.over_relaxation <= 1.8:
            raise ValueError("over_relaxation must lie in [1, 1.8]")


@dataclass(frozen=True)
class SolveDiagnostics:
    iterations_used: int
    final_primal_residual: float
    final_dual_residual: float
    objective_value: float
    converged: bool


def mvdr_closed_form(cov: CovarianceMatrix, a0: np.ndarray,
                     steering_angle_deg: float = 0.0) -> WeightVector:
    """w = R^-1 a0 / (a0^H R^-1 a0), the minimum-variance distortionless weights."""
    a0 = np.asarray(a0, dtype=complex)
    if not np.any(a0):
        raise ValueError("steering vector must be nonzero")
    try:
        ra = sla.cho_solve(sla.cho_factor(cov.entries), a0)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            "covariance is singular; re-estimate with diagonal_loading > 0"
        ) from exc
    w = ra / (a0.conj() @ ra)
    return WeightVector(w=w, steering_angle_deg=steering_angle_deg)


def _penalty_index_sets(penalty: PenaltySpec, num_angles: int):
    if penalty.mode == "sparse_only":
        return np.array([], dtype=int), np.arange(num_angles)
    part = penalty.partition
    if part.mainlobe_indices.max() >= num_angles:
        raise ValueError("partition does not match the steering grid")
    return part.mainlobe_indices, part.sidelobe_indices


def penalized_objective(w: np.ndarray, cov: CovarianceMatrix,
                        steering: SteeringMatrix, penalty: PenaltySpec) -> float:
    """Quadratic-plus-penalty objective value at ``w``."""
    linf_idx, l1_idx = _penalty_index_sets(penalty, steering.grid.num_angles)
    gains = steering.entries.conj().T @ w
    val = float(np.real(w.conj() @ cov.entries @ w))
    if l1_idx.size:
        val += penalty.gamma * float(np.abs(gains[l1_idx]).sum())
    if linf_idx.size:
        val += penalty.gamma * float(np.abs(gains[linf_idx]).max())
    return val


def _admm_iterates(cov: CovarianceMatrix, steering: SteeringMatrix,
                   penalty: PenaltySpec, options: SolverOptions):
    """Yield (w, primal, dual, eps_primal, eps_dual) per iteration.

    Generator form so instrumented callers can watch the trajectory; normal
    callers drive it through solve_composite.
    """
    a_full = steering.entries
    a0 = steering.soi_column
    m, n = a_full.shape
    linf_idx, l1_idx = _penalty_index_sets(penalty, n)

    # normalized problem: unit mean eigenvalue, unit-norm steering columns
    scale = float(np.real(np.trace(cov.entries))) / m
    if not scale > 0:
        raise ValueError("covariance has non-positive trace")
    r_s = cov.entries / scale
    a_t = a_full / np.sqrt(m)
    gamma_s = penalty.gamma * np.sqrt(m) / scale

    # eliminate the constraint: w = w_p + B v with B spanning a0-perp
    w_p = a0 / (np.linalg.norm(a0) ** 2)
    q, _ = np.linalg.qr(np.column_stack([a0, np.eye(m)]))
    basis = q[:, 1:m]
    c_vec = a_t.conj().T @ w_p
    d_mat = a_t.conj().T @ basis
    g_mat = basis.conj().T @ r_s @ basis
    b_vec = basis.conj().T @ (r_s @ w_p)
    dhd = d_mat.conj().T @ d_mat

    rho = options.penalty_parameter_rho * _RHO_DAMPING
    alpha = options.over_relaxation
    factor = sla.cho_factor(g_mat + rho * dhd)
    z = c_vec.copy()
    u = np.zeros(n, dtype=complex)
    sqrt_n = np.sqrt(n)
    sqrt_v = np.sqrt(m - 1)

    for _ in range(options.max_iterations):
        rhs = rho * (d_mat.conj().T @ (z - u - c_vec)) - b_vec
        v = sla.cho_solve(factor, rhs)
        gains = c_vec + d_mat @ v
        relaxed = alpha * gains + (1.0 - alpha) * z
        z_old = z
        t = relaxed + u
        z = t.copy()
        tau = gamma_s / (2.0 * rho)
        if tau > 0:
            if l1_idx.size:
                z[l1_idx] = prox_l1_complex(t[l1_idx], tau)
            if linf_idx.size:
                z[linf_idx] = prox_linf_complex(t[linf_idx], tau)
        u = u + relaxed - z
        primal = float(np.linalg.norm(gains - z))
        dual = float(np.linalg.norm(rho * (d_mat.conj().T @ (z - z_old))))
        eps_primal = sqrt_n * options.abs_tol + options.rel_tol * max(
            np.linalg.norm(gains), np.linalg.norm(z))
        eps_dual = sqrt_v * options.abs_tol + options.rel_tol * float(
            np.linalg.norm(rho * (d_mat.conj().T @ u)))
        yield w_p + basis @ v, primal, dual, eps_primal, eps_dual
        if options.adaptive_rho:
            if primal > 10.0 * dual:
                rho *= 2.0
                u /= 2.0
                factor = sla.cho_factor(g_mat + rho * dhd)
            elif dual > 10.0 * primal:
                rho /= 2.0
                u *= 2.0
                factor = sla.cho_factor(g_mat + rho * dhd)


def _solve_quadratic(cov: CovarianceMatrix, steering: SteeringMatrix
                     ) -> tuple[WeightVector, SolveDiagnostics]:
    # zero penalty: one equality-constrained quadratic solve, no splitting
    a0 = steering.soi_column
    m = steering.geometry.num_antennas
    w_p = a0 / (np.linalg.norm(a0) ** 2)
    q, _ = np.linalg.qr(np.column_stack([a0, np.eye(m)]))
    basis = q[:, 1:m]
    g_mat = basis.conj().T @ cov.entries @ basis
    b_vec = basis.conj().T @ (cov.entries @ w_p)
    try:
        v = -sla.cho_solve(sla.cho_factor(g_mat), b_vec)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            "covariance is singular; re-estimate with diagonal_loading > 0") from exc
    w = w_p + basis @ v
    diag = SolveDiagnostics(
        iterations_used=1,
        final_primal_residual=0.0,
        final_dual_residual=0.0,
        objective_value=float(np.real(w.conj() @ cov.entries @ w)),
        converged=True,
    )
    return WeightVector(w=w, steering_angle_deg=steering.grid.soi_angle_deg), diag


def solve_composite(cov: CovarianceMatrix, steering: SteeringMatrix,
                    penalty: PenaltySpec, options: SolverOptions | None = None
                    ) -> tuple[WeightVector, SolveDiagnostics]:
    """Run the splitting solver to tolerance or the iteration cap.

    Non-convergence is reported through the diagnostics, never raised, so
    long Monte Carlo runs can record and continue.
    """
    if options is None:
        options = SolverOptions()
    if penalty.gamma == 0.0:
        return _solve_quadratic(cov, steering)
    w = steering.soi_column / steering.geometry.num_antennas
    primal = dual = np.inf
    iterations = 0
    converged = False
    for w, primal, dual, eps_primal, eps_dual in _admm_iterates(cov, steering, penalty, options):
        iterations += 1
        if primal <= eps_primal and dual <= eps_dual:
            converged = True
            break
    diag = SolveDiagnostics(
        iterations_used=iterations,
        final_primal_residual=primal,
        final_dual_residual=dual,
        objective_value=penalized_objective(w, cov, steering, penalty),
        converged=converged,
    )
    return WeightVector(w=w, steering_angle_deg=steering.grid.soi_angle_deg), diag


def sparse_beamformer(cov: CovarianceMatrix, steering: SteeringMatrix,
                      penalty: PenaltySpec, options: SolverOptions | None = None
                      ) -> tuple[WeightVector, SolveDiagnostics]:
    """l1-penalized design; the penalty sums |gain| over the whole grid."""
    if penalty.mode != "sparse_only":
        raise ValueError("sparse_beamformer requires a sparse_only penalty")
    return solve_composite(cov, steering, penalty, options)


def mixed_norm_beamformer(cov: CovarianceMatrix, steering: SteeringMatrix,
                          penalty: PenaltySpec, options: SolverOptions | None = None
                          ) -> tuple[WeightVector, SolveDiagnostics]:
    """Mixed-norm design: max |gain| over the mainlobe, sum over the sidelobes."""
    if penalty.mode != "mixed":
        raise ValueError("mixed_norm_beamformer requires a mixed penalty")
    return solve_composite(cov, steering, penalty, options)
