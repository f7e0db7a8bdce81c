"""Uniform linear array geometry, steering vectors, and lobe partitions.

Angles are degrees at every public interface and are converted to radians
internally. The m-th element of a steering vector for arrival angle theta is
exp(j * m * 2*pi * (d/lambda) * sin(theta)), m = 0..M-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ArrayGeometry",
    "AngleGrid",
    "SteeringMatrix",
    "LobePartition",
    "steering_vector",
    "build_steering_matrix",
    "partition_lobes",
]


@dataclass(frozen=True)
class ArrayGeometry:
    """Antenna count and element spacing in wavelengths."""

    num_antennas: int
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        if int(self.num_antennas) != self.num_antennas or self.num_antennas < 2:
            raise ValueError(f"num_antennas must be an integer >= 2, got {self.num_antennas}")
        if not self.spacing_over_wavelength > 0:
            raise ValueError("spacing_over_wavelength must be positive")


def steering_vector(geometry: ArrayGeometry, angle_deg: float) -> np.ndarray:
    """Array response to a unit plane wave arriving from ``angle_deg``.

    Every element has magnitude exactly 1; element 0 has phase 0.
    """
    if not -90.0 <= angle_deg <= 90.0:
        raise ValueError(f"angle_deg must lie in [-90, 90], got {angle_deg}")
    m = np.arange(geometry.num_antennas)
    phase = 2.0 * np.pi * geometry.spacing_over_wavelength * np.sin(np.deg2rad(angle_deg))
    return np.exp(1j * phase * m)


@dataclass(frozen=True)
class AngleGrid:
    """Strictly increasing angles in [-90, 90] with the steering angle on-grid."""

    angles_deg: np.ndarray
    soi_index: int

    def __post_init__(self):
        angles = np.asarray(self.angles_deg, dtype=float)
        object.__setattr__(self, "angles_deg", angles)
        if angles.ndim != 1 or angles.size == 0:
            raise ValueError("angles_deg must be a non-empty 1-D array")
        if np.any(np.diff(angles) <= 0):
            raise ValueError("grid angles must be strictly increasing")
        if angles[0] < -90.0 or angles[-1] > 90.0:
            raise ValueError("grid angles must lie in [-90, 90]")
        if not 0 <= self.soi_index < angles.size:
            raise ValueError(f"soi_index {self.soi_index} outside grid of size {angles.size}")

    @property
    def num_angles(self) -> int:
        return self.angles_deg.size

    @property
    def soi_angle_deg(self) -> float:
        return float(self.angles_deg[self.soi_index])

    @classmethod
    def regular(cls, step_deg: float = 1.0, soi_deg: float = 0.0,
                lo: float = -90.0, hi: float = 90.0) -> "AngleGrid":
        """Uniform grid from ``lo`` to ``hi`` inclusive; ``soi_deg`` must be a grid point."""
        if not step_deg > 0:
            raise ValueError("step_deg must be positive")
        n_steps = (hi - lo) / step_deg
        if abs(n_steps - round(n_steps)) > 1e-9:
            raise ValueError(f"step {step_deg} does not evenly divide [{lo}, {hi}]")
        angles = lo + step_deg * np.arange(int(round(n_steps)) + 1)
        hits = np.nonzero(np.isclose(angles, soi_deg, rtol=0.0, atol=1e-9))[0]
        if hits.size != 1:
            raise ValueError(f"steering angle {soi_deg} is not a point of the {step_deg} deg grid")
        return cls(angles_deg=angles, soi_index=int(hits[0]))


@dataclass(frozen=True)
class SteeringMatrix:
    """All grid steering vectors as columns, with their generating geometry and grid."""

    entries: np.ndarray  # (M, N) complex
    geometry: ArrayGeometry
    grid: AngleGrid

    @property
    def soi_column(self) -> np.ndarray:
        return self.entries[:, self.grid.soi_index]


def build_steering_matrix(geometry: ArrayGeometry, grid: AngleGrid) -> SteeringMatrix:
    cols = [steering_vector(geometry, a) for a in grid.angles_deg]
    return SteeringMatrix(entries=np.column_stack(cols), geometry=geometry, grid=grid)


@dataclass(frozen=True)
class LobePartition:
    """Index split of a grid into a mainlobe window of 2b+1 points and the rest."""

    b: int
    mainlobe_indices: np.ndarray = field(repr=False)
    sidelobe_indices: np.ndarray = field(repr=False)


def partition_lobes(grid: AngleGrid, b: int) -> LobePartition:
    """Mainlobe = grid indices within ``b`` steps of the steering index.

    The sidelobe set may be empty (mainlobe covering the whole grid is
    allowed); a window extending past either grid edge is an error.
    """
    if int(b) != b or b < 0:
        raise ValueError(f"b must be a non-negative integer, got {b}")
    lo = grid.soi_index - b
    hi = grid.soi_index + b
    if lo < 0 or hi >= grid.num_angles:
        raise ValueError(
            f"mainlobe window [{lo}, {hi}] exceeds grid bounds [0, {grid.num_angles - 1}]"
        )
    mainlobe = np.arange(lo, hi + 1)
    sidelobe = np.setdiff1d(np.arange(grid.num_angles), mainlobe)
    return LobePartition(b=int(b), mainlobe_indices=mainlobe, sidelobe_indices=sidelobe)
