"""Snapshot generation and covariance estimation for the narrowband array model.

A snapshot is x(k) = s(k) a(theta_0) + sum_j beta_j(k) a(theta_j) + n(k) with
all amplitudes drawn i.i.d. circularly-symmetric complex Gaussian. Source
powers are specified in dB relative to the per-antenna noise power.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .arrays import ArrayGeometry, steering_vector

__all__ = [
    "SourceSpec",
    "Scenario",
    "SnapshotBlock",
    "CovarianceMatrix",
    "reference_scenario",
    "generate_snapshots",
    "sample_covariance",
    "true_covariance",
    "apply_weights",
]


@dataclass(frozen=True)
class SourceSpec:
    """One point source: arrival angle and power in dB over the noise floor."""

    doa_deg: float
    power_db: float

    def __post_init__(self):
        if not -90.0 <= self.doa_deg <= 90.0:
            raise ValueError(f"doa_deg must lie in [-90, 90], got {self.doa_deg}")


@dataclass(frozen=True)
class Scenario:
    geometry: ArrayGeometry
    soi: SourceSpec
    interferers: tuple[SourceSpec, ...]
    noise_power: float = 1.0
    num_snapshots: int = 100
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "interferers", tuple(self.interferers))
        if self.noise_power < 0:
            raise ValueError("noise_power must be non-negative")
        if self.num_snapshots < 1:
            raise ValueError("num_snapshots must be at least 1")
        for src in self.interferers:
            if src.doa_deg == self.soi.doa_deg:
                raise ValueError(f"interferer at {src.doa_deg} deg coincides with the SOI")

    def source_power(self, src: SourceSpec) -> float:
        """Linear source variance implied by its dB level and the noise power.

        dB levels are relative to the noise power, so SNR/INR read directly.
        When noise is disabled (noise_power == 0) the reference is unit power,
        which keeps the noiseless rank-one model expressible.
        """
        reference = self.noise_power if self.noise_power > 0 else 1.0
        return reference * 10.0 ** (src.power_db / 10.0)

    def with_seed(self, rng_seed: int) -> "Scenario":
        return replace(self, rng_seed=rng_seed)


def reference_scenario(num_snapshots: int = 100, rng_seed: int = 0) -> Scenario:
    """The 8-antenna benchmark scenario used across the docs and tests.

    SOI at 0 deg with 10 dB SNR; interferers at -30/30/70 deg with
    20/20/40 dB INR; unit noise power.
    """
    return Scenario(
        geometry=ArrayGeometry(num_antennas=8, spacing_over_wavelength=0.5),
        soi=SourceSpec(doa_deg=0.0, power_db=10.0),
        interferers=(
            SourceSpec(doa_deg=-30.0, power_db=20.0),
            SourceSpec(doa_deg=30.0, power_db=20.0),
            SourceSpec(doa_deg=70.0, power_db=40.0),
        ),
        noise_power=1.0,
        num_snapshots=num_snapshots,
        rng_seed=rng_seed,
    )


@dataclass(frozen=True)
class SnapshotBlock:
    """M x K matrix of received snapshots, one column per time instant."""

    data: np.ndarray

    @property
    def num_antennas(self) -> int:
        return self.data.shape[0]

    @property
    def num_snapshots(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class CovarianceMatrix:
    entries: np.ndarray
    kind: str  # "sample" or "analytic"

    def __post_init__(self):
        r = np.asarray(self.entries)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError("covariance must be square")
        scale = max(float(np.abs(r).max()), 1.0)
        if np.abs(r - r.conj().T).max() > 1e-12 * scale:
            raise ValueError("covariance must be Hermitian")
        eigs = np.linalg.eigvalsh(r)
        if eigs.min() < -1e-10 * max(float(np.real(np.trace(r))), 1.0):
            raise ValueError("covariance must be positive semidefinite")
        if self.kind not in ("sample", "analytic"):
            raise ValueError(f"unknown covariance kind {self.kind!r}")

    @property
    def num_antennas(self) -> int:
        return self.entries.shape[0]


def _complex_normal(rng: np.random.Generator, shape, variance: float) -> np.ndarray:
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def generate_snapshots(scenario: Scenario, rng: np.random.Generator | None = None) -> SnapshotBlock:
    """Draw a block of snapshots; deterministic for a given scenario seed.

    Draw order is fixed (SOI, then interferers in listed order, then noise) so
    that equal seeds give bit-identical blocks.
    """
    if rng is None:
        rng = np.random.default_rng(scenario.rng_seed)
    m = scenario.geometry.num_antennas
    k = scenario.num_snapshots
    x = np.zeros((m, k), dtype=complex)
    for src in (scenario.soi, *scenario.interferers):
        a = steering_vector(scenario.geometry, src.doa_deg)
        amps = _complex_normal(rng, k, scenario.source_power(src))
        x += np.outer(a, amps)
    x += _complex_normal(rng, (m, k), scenario.noise_power)
    return SnapshotBlock(data=x)


def sample_covariance(block: SnapshotBlock, diagonal_loading: float = 0.0) -> CovarianceMatrix:
    """R = (1/K) X X^H, symmetrized, with optional loading delta*I.

    Loading is only needed when K < M leaves the estimate singular; the
    default is no loading.
    """
    if diagonal_loading < 0:
        raise ValueError("diagonal_loading must be non-negative")
    x = block.data
    r = x @ x.conj().T / block.num_snapshots
    r = (r + r.conj().T) / 2.0  # exact Hermitian symmetry
    if diagonal_loading > 0:
        r = r + diagonal_loading * np.eye(block.num_antennas)
    return CovarianceMatrix(entries=r, kind="sample")


def true_covariance(scenario: Scenario, include_soi: bool = True) -> CovarianceMatrix:
    """Analytic covariance: source outer products plus the diagonal noise term.

    With ``include_soi=False`` the SOI term is dropped, which is the
    interference-plus-noise matrix used in the SINR denominator.
    """
    m = scenario.geometry.num_antennas
    r = scenario.noise_power * np.eye(m, dtype=complex)
    sources = (scenario.soi, *scenario.interferers) if include_soi else scenario.interferers
    for src in sources:
        a = steering_vector(scenario.geometry, src.doa_deg)
        r = r + scenario.source_power(src) * np.outer(a, a.conj())
    r = (r + r.conj().T) / 2.0
    return CovarianceMatrix(entries=r, kind="analytic")


def apply_weights(w: np.ndarray, block: SnapshotBlock) -> np.ndarray:
    """Beamformer output y(k) = w^H x(k) for every snapshot."""
    w = np.asarray(w)
    if w.shape != (block.num_antennas,):
        raise ValueError(f"weight shape {w.shape} does not match {block.num_antennas} antennas")
    return w.conj() @ block.data
