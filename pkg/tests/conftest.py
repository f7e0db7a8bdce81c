"""Shared fixtures and the acceptance summary banner.

Acceptance tests register their verdicts in ACCEPTANCE_RESULTS; the terminal
summary prints one line per criterion so a run's headline status is visible
without scrolling through the full pytest report.
"""

import pytest

import mnbeam as mb

# criterion id -> (passed, detail); populated by tests/test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}

CRITERIA = {
    1: "matched-steering benchmark means and ordering",
    2: "4 deg mismatch benchmark means, ordering, notch depth",
    3: "mainlobe width sweep argmax location",
    4: "solver and prox operators vs independent oracles",
    5: "invariant suite",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(CRITERIA):
        if cid in ACCEPTANCE_RESULTS:
            ok, detail = ACCEPTANCE_RESULTS[cid]
            verdict = "PASS" if ok else "FAIL"
        else:
            verdict, detail = "NOT RUN", ""
        line = f"criterion {cid} [{verdict}] {CRITERIA[cid]}"
        if detail:
            line += f" :: {detail}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bench_scenario():
    """The 8-antenna benchmark scenario (seed 0)."""
    return mb.reference_scenario(rng_seed=0)


@pytest.fixture(scope="session")
def bench_grid():
    return mb.AngleGrid.regular(1.0, 0.0)


@pytest.fixture(scope="session")
def bench_steering(bench_scenario, bench_grid):
    return mb.build_steering_matrix(bench_scenario.geometry, bench_grid)


@pytest.fixture(scope="session")
def bench_sample_cov(bench_scenario):
    return mb.sample_covariance(mb.generate_snapshots(bench_scenario))


@pytest.fixture(scope="session")
def small_instances():
    """20 random 4x4 Hermitian PD covariances pinned to the oracle seeds."""
    from _oracles import make_small_covariances

    return make_small_covariances()
