"""Regenerate the frozen solver reference tables in tests/_oracles.py.

Runs a long projected-subgradient descent on the 20 small solver instances
(4-antenna array, 19-point grid, gamma = 1, mainlobe half-width 2) and
prints the best objective per instance as a ready-to-paste array literal.
The descent uses only numpy and never imports the package, so the tables
it produces are an independent check on the splitting solver.

The method is deliberately crude but unimpeachable: normalized subgradient
steps of size c0/sqrt(k+1), each followed by an exact projection back onto
the unit-gain constraint, tracking the best objective seen. At the default
1e6 iterations the values are accurate to roughly 1e-4 relative, well
inside the 1e-3 tolerance the tests budget for them. Expect a run to take
tens of minutes; this script is an audit tool, not part of the test suite.

Usage: python tools/gen_solver_reference.py [iterations] [c0]
"""

import sys
import time

import numpy as np

NUM_ANTENNAS = 4
GRID_DEG = -90.0 + 10.0 * np.arange(19)
SOI_INDEX = 9  # GRID_DEG[9] == 0.0
GAMMA = 1.0
HALF_WIDTH = 2
SEED_BASE = 20260818
NUM_INSTANCES = 20


def steering(angle_deg: float) -> np.ndarray:
    k = np.arange(NUM_ANTENNAS)
    return np.exp(1j * np.pi * k * np.sin(np.deg2rad(angle_deg)))


A = np.column_stack([steering(a) for a in GRID_DEG])  # (4, 19)
A0 = A[:, SOI_INDEX]


def make_instances() -> np.ndarray:
    covs = []
    for i in range(NUM_INSTANCES):
        rng = np.random.default_rng(SEED_BASE + i)
        c = (rng.standard_normal((NUM_ANTENNAS, NUM_ANTENNAS))
             + 1j * rng.standard_normal((NUM_ANTENNAS, NUM_ANTENNAS))) / np.sqrt(2.0)
        covs.append(c @ c.conj().T + 0.5 * np.eye(NUM_ANTENNAS))
    return np.array(covs)


def subgradient_best(r_batch, linf_idx, l1_idx, iters, c0):
    """Best objective per instance over a projected-subgradient trajectory."""
    nb = r_batch.shape[0]
    w = np.tile(A0 / (np.linalg.norm(A0) ** 2), (nb, 1)).astype(complex)
    a0c = A0.conj()
    ac = A.conj()
    a_l1_t = A[:, l1_idx].T if len(l1_idx) else None
    best_f = np.full(nb, np.inf)

    def batch_objective(wb):
        g = wb @ ac  # per-instance grid gains, (nb, 19)
        val = np.real(np.einsum("bi,bij,bj->b", wb.conj(), r_batch, wb))
        if len(l1_idx):
            val = val + GAMMA * np.abs(g[:, l1_idx]).sum(axis=1)
        if len(linf_idx):
            val = val + GAMMA * np.abs(g[:, linf_idx]).max(axis=1)
        return val, g

    for k in range(iters):
        f, g = batch_objective(w)
        best_f = np.minimum(best_f, f)
        d = 2.0 * np.einsum("bij,bj->bi", r_batch, w)
        if len(l1_idx):
            gl = g[:, l1_idx]
            mag = np.abs(gl)
            s = np.where(mag > 0, gl / np.where(mag > 0, mag, 1.0), 0.0)
            d = d + GAMMA * (s @ a_l1_t)
        if len(linf_idx):
            gi = g[:, linf_idx]
            imax = np.argmax(np.abs(gi), axis=1)
            gmax = gi[np.arange(nb), imax]
            mag = np.abs(gmax)
            s = np.where(mag > 0, gmax / np.where(mag > 0, mag, 1.0), 0.0)
            d = d + GAMMA * s[:, None] * A[:, linf_idx[imax]].T
        dn = np.linalg.norm(d, axis=1, keepdims=True)
        dn = np.where(dn > 0, dn, 1.0)
        w = w - (c0 / np.sqrt(k + 1.0)) * d / dn
        # exact projection back onto w^H a0 = 1
        viol = (w @ a0c) - 1.0
        w = w - np.outer(viol, A0) / (np.linalg.norm(A0) ** 2)
    f, _ = batch_objective(w)
    best_f = np.minimum(best_f, f)
    return best_f


def print_table(name: str, values: np.ndarray) -> None:
    print(f"{name} = np.array([")
    for start in range(0, len(values), 3):
        chunk = ", ".join(f"{v:.17g}" for v in values[start:start + 3])
        print(f"    {chunk},")
    print("])")


def main(iters: int, c0: float) -> None:
    r_batch = make_instances()
    all_idx = np.arange(A.shape[1])
    mainlobe = np.arange(SOI_INDEX - HALF_WIDTH, SOI_INDEX + HALF_WIDTH + 1)
    sidelobe = np.setdiff1d(all_idx, mainlobe)
    empty = np.array([], dtype=int)

    jobs = [("SUBGRADIENT_REFERENCE_SPARSE", empty, all_idx),
            ("SUBGRADIENT_REFERENCE_MIXED", mainlobe, sidelobe)]
    for name, linf_idx, l1_idx in jobs:
        t0 = time.time()
        best = subgradient_best(r_batch, linf_idx, l1_idx, iters, c0)
        print(f"# {iters} iterations, c0={c0}, {time.time() - t0:.0f}s")
        print_table(name, best)


if __name__ == "__main__":
    iterations = int(sys.argv[1]) if len(sys.argv) > 1 else 1000000
    step_scale = float(sys.argv[2]) if len(sys.argv) > 2 else 0.5
    main(iterations, step_scale)
