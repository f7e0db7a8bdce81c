"""Estimator-style front end: fit on snapshots, transform to beamformer output.

X follows the usual samples-by-features layout, here snapshots by antennas,
and may be complex. scikit-learn's own validators reject complex data, so
input checking is done by the local helpers below while the estimators keep
the standard BaseEstimator parameter plumbing (get_params / set_params /
clone / fit_transform).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .arrays import AngleGrid, ArrayGeometry, build_steering_matrix, partition_lobes, steering_vector
from .simulate import SnapshotBlock, sample_covariance
from .solvers import (
    PenaltySpec,
    SolverOptions,
    mixed_norm_beamformer,
    mvdr_closed_form,
    sparse_beamformer,
)

__all__ = [
    "MvdrBeamformer",
    "SparseBeamformer",
    "MixedNormBeamformer",
    "check_snapshot_array",
]


def check_snapshot_array(X, min_snapshots: int = 1) -> np.ndarray:
    """Validate a snapshots-by-antennas matrix and return it as complex128."""
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D snapshot array, got shape {X.shape}")
    if X.shape[0] < min_snapshots:
        raise ValueError(f"need at least {min_snapshots} snapshots, got {X.shape[0]}")
    if X.shape[1] < 2:
        raise ValueError(f"need at least 2 antennas, got {X.shape[1]}")
    X = X.astype(complex, copy=False)
    if not np.all(np.isfinite(X.real)) or not np.all(np.isfinite(X.imag)):
        raise ValueError("snapshot array contains NaN or infinite entries")
    return X


class _BaseBeamformer(TransformerMixin, BaseEstimator):
    """Shared fit machinery: estimate the covariance, delegate weight design."""

    def __init__(self, steering_deg=0.0, spacing_over_wavelength=0.5, diagonal_loading=0.0):
        self.steering_deg = steering_deg
        self.spacing_over_wavelength = spacing_over_wavelength
        self.diagonal_loading = diagonal_loading

    def _design(self, cov, geometry):
        raise NotImplementedError

    def fit(self, X, y=None):
        X = check_snapshot_array(X)
        self.n_features_in_ = X.shape[1]
        geometry = ArrayGeometry(num_antennas=X.shape[1],
                                 spacing_over_wavelength=self.spacing_over_wavelength)
        block = SnapshotBlock(data=X.T)  # columns are snapshots internally
        cov = sample_covariance(block, diagonal_loading=self.diagonal_loading)
        self._fit_design(cov, geometry)
        return self

    def _fit_design(self, cov, geometry):
        wv = self._design(cov, geometry)
        self.weights_ = wv.w
        return self

    def transform(self, X):
        if not hasattr(self, "weights_"):
            raise ValueError("estimator is not fitted; call fit first")
        X = check_snapshot_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} antennas but the fit saw {self.n_features_in_}")
        return (X @ self.weights_.conj()).reshape(-1, 1)


class MvdrBeamformer(_BaseBeamformer):
    """Closed-form minimum-variance distortionless beamformer."""

    def _design(self, cov, geometry):
        a0 = steering_vector(geometry, self.steering_deg)
        return mvdr_closed_form(cov, a0, self.steering_deg)


class SparseBeamformer(_BaseBeamformer):
    """Minimum-variance design with an l1 penalty on all grid gains.

    gamma=0 reproduces the closed-form MVDR weights up to solver tolerance.
    Fit exposes ``diagnostics_`` with iteration counts and convergence state.
    """

    def __init__(self, steering_deg=0.0, spacing_over_wavelength=0.5,
                 diagonal_loading=0.0, gamma=10.0, grid_step_deg=1.0,
                 solver_options=None):
        super().__init__(steering_deg=steering_deg,
                         spacing_over_wavelength=spacing_over_wavelength,
                         diagonal_loading=diagonal_loading)
        self.gamma = gamma
        self.grid_step_deg = grid_step_deg
        self.solver_options = solver_options

    def _steering(self, geometry):
        grid = AngleGrid.regular(step_deg=self.grid_step_deg, soi_deg=self.steering_deg)
        return build_steering_matrix(geometry, grid)

    def _options(self):
        return self.solver_options if self.solver_options is not None else SolverOptions()

    def _design_penalized(self, cov, steering):
        penalty = PenaltySpec(gamma=self.gamma, mode="sparse_only")
        return sparse_beamformer(cov, steering, penalty, self._options())

    def _fit_design(self, cov, geometry):
        wv, diag = self._design_penalized(cov, self._steering(geometry))
        self.weights_ = wv.w
        self.diagnostics_ = diag
        return self


class MixedNormBeamformer(SparseBeamformer):
    """Max-gain penalty inside a 2b+1 mainlobe window, l1 outside it."""

    def __init__(self, steering_deg=0.0, spacing_over_wavelength=0.5,
                 diagonal_loading=0.0, gamma=10.0, grid_step_deg=1.0,
                 solver_options=None, b=23):
        super().__init__(steering_deg=steering_deg,
                         spacing_over_wavelength=spacing_over_wavelength,
                         diagonal_loading=diagonal_loading, gamma=gamma,
                         grid_step_deg=grid_step_deg, solver_options=solver_options)
        self.b = b

    def _design_penalized(self, cov, steering):
        partition = partition_lobes(steering.grid, self.b)
        penalty = PenaltySpec(gamma=self.gamma, mode="mixed", partition=partition)
        return mixed_norm_beamformer(cov, steering, penalty, self._options())
