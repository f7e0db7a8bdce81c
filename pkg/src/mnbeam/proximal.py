"""Proximal operators for complex l1 and l-infinity penalties.

Both norms act on magnitudes: ||v||_1 sums |v_i| and ||v||_inf takes
max |v_i|, so every operator here shrinks magnitudes and preserves phases.
"""

from __future__ import annotations

import numpy as np

__all__ = ["prox_l1_complex", "prox_linf_complex", "project_l1_ball_complex"]


def _check_tau(tau: float) -> None:
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")


def prox_l1_complex(v: np.ndarray, tau: float) -> np.ndarray:
    """argmin_x tau*||x||_1 + 0.5*||x - v||^2: per-element magnitude soft threshold."""
    _check_tau(tau)
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    safe = np.where(mags > 0, mags, 1.0)
    return v * (np.maximum(mags - tau, 0.0) / safe)


def project_l1_ball_complex(v: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto {x : sum |x_i| <= radius}, phases kept.

    Reduces to the simplex projection of the magnitude vector via the
    sorted-cumulative-sum threshold; ties need no special handling.
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    if mags.sum() <= radius:
        return v.copy()
    drop = np.sort(mags)[::-1]
    csum = np.cumsum(drop)
    counts = np.arange(1, mags.size + 1)
    admissible = drop - (csum - radius) / counts > 0
    k = counts[admissible][-1]
    theta = (csum[k - 1] - radius) / k
    shrunk = np.maximum(mags - theta, 0.0)
    safe = np.where(mags > 0, mags, 1.0)
    return v * (shrunk / safe)


def prox_linf_complex(v: np.ndarray, tau: float) -> np.ndarray:
    """argmin_x tau*||x||_inf + 0.5*||x - v||^2 via Moreau decomposition.

    Equals v minus the projection of v onto the l1 ball of radius tau.
    """
    _check_tau(tau)
    v = np.asarray(v, dtype=complex)
    return v - project_l1_ball_complex(v, tau)
