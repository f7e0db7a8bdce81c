"""Snapshot generation, covariance estimation, and scenario plumbing."""

import numpy as np
import pytest

import mnbeam as mb


def _two_source_scenario(**overrides):
    kwargs = dict(
        geometry=mb.ArrayGeometry(num_antennas=4),
        soi=mb.SourceSpec(doa_deg=0.0, power_db=0.0),
        interferers=(mb.SourceSpec(doa_deg=40.0, power_db=10.0),),
        noise_power=1.0,
        num_snapshots=64,
        rng_seed=5,
    )
    kwargs.update(overrides)
    return mb.Scenario(**kwargs)


class TestScenario:
    def test_benchmark_scenario_fields(self):
        sc = mb.reference_scenario()
        assert sc.geometry.num_antennas == 8
        assert sc.geometry.spacing_over_wavelength == 0.5
        assert sc.soi.doa_deg == 0.0 and sc.soi.power_db == 10.0
        assert [s.doa_deg for s in sc.interferers] == [-30.0, 30.0, 70.0]
        assert [s.power_db for s in sc.interferers] == [20.0, 20.0, 40.0]
        assert sc.noise_power == 1.0
        assert sc.num_snapshots == 100

    def test_source_power_is_relative_to_noise(self):
        sc = _two_source_scenario(noise_power=2.0)
        assert sc.source_power(sc.soi) == pytest.approx(2.0)
        assert sc.source_power(sc.interferers[0]) == pytest.approx(20.0)

    def test_rejects_negative_noise(self):
        with pytest.raises(ValueError, match="noise_power"):
            _two_source_scenario(noise_power=-1.0)

    def test_rejects_zero_snapshots(self):
        with pytest.raises(ValueError, match="num_snapshots"):
            _two_source_scenario(num_snapshots=0)

    def test_rejects_interferer_on_soi(self):
        with pytest.raises(ValueError, match="coincides"):
            _two_source_scenario(
                interferers=(mb.SourceSpec(doa_deg=0.0, power_db=10.0),))

    def test_source_doa_domain(self):
        with pytest.raises(ValueError, match="doa_deg"):
            mb.SourceSpec(doa_deg=100.0, power_db=0.0)

    def test_with_seed(self):
        sc = _two_source_scenario()
        assert sc.with_seed(99).rng_seed == 99
        assert sc.rng_seed == 5


class TestGenerateSnapshots:
    def test_benchmark_block_shape(self):
        block = mb.generate_snapshots(mb.reference_scenario())
        assert block.data.shape == (8, 100)

    def test_same_seed_bit_identical(self):
        sc = _two_source_scenario()
        x1 = mb.generate_snapshots(sc).data
        x2 = mb.generate_snapshots(sc).data
        assert x1.tobytes() == x2.tobytes()

    def test_different_seeds_differ(self):
        x1 = mb.generate_snapshots(_two_source_scenario(rng_seed=1)).data
        x2 = mb.generate_snapshots(_two_source_scenario(rng_seed=2)).data
        assert not np.array_equal(x1, x2)

    def test_noiseless_single_source_is_rank_one(self):
        sc = mb.Scenario(
            geometry=mb.ArrayGeometry(num_antennas=4),
            soi=mb.SourceSpec(doa_deg=10.0, power_db=0.0),
            interferers=(), noise_power=0.0, num_snapshots=32, rng_seed=3)
        x = mb.generate_snapshots(sc).data
        a = mb.steering_vector(sc.geometry, 10.0)
        # every column is a complex multiple of the steering vector
        ratios = x / a[:, None]
        assert np.abs(ratios - ratios[0]).max() < 1e-12
        assert np.abs(x).max() > 0.0

    def test_disabled_soi_gives_noise_only_covariance(self):
        sc = mb.Scenario(
            geometry=mb.ArrayGeometry(num_antennas=4),
            soi=mb.SourceSpec(doa_deg=0.0, power_db=-np.inf),
            interferers=(), noise_power=1.0, num_snapshots=10000, rng_seed=4)
        cov = mb.sample_covariance(mb.generate_snapshots(sc))
        err = np.linalg.norm(cov.entries - np.eye(4), ord="fro")
        assert err < 0.05 * np.real(np.trace(cov.entries))


class TestSampleCovariance:
    def test_single_snapshot_rank_one(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        cov = mb.sample_covariance(mb.SnapshotBlock(data=x[:, None]))
        np.testing.assert_allclose(cov.entries, np.outer(x, x.conj()), atol=1e-12)
        assert cov.kind == "sample"

    def test_identical_columns(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        block = mb.SnapshotBlock(data=np.tile(x[:, None], (1, 7)))
        cov = mb.sample_covariance(block)
        np.testing.assert_allclose(cov.entries, np.outer(x, x.conj()), atol=1e-12)

    def test_exactly_hermitian(self):
        block = mb.generate_snapshots(mb.reference_scenario(rng_seed=2))
        r = mb.sample_covariance(block).entries
        np.testing.assert_array_equal(r, r.conj().T)

    def test_trace_tracks_analytic_trace(self):
        # K=100 leaves ~10% relative noise on the trace (the strong
        # interferer dominates), so individual seeds can stray past 25%;
        # the median and the 100-seed average must stay well inside it.
        sc = mb.reference_scenario()
        target = np.real(np.trace(mb.true_covariance(sc).entries))
        traces = np.array([
            np.real(np.trace(mb.sample_covariance(
                mb.generate_snapshots(sc.with_seed(seed))).entries))
            for seed in range(100)
        ])
        assert np.median(np.abs(traces - target)) < 0.25 * target
        assert abs(traces.mean() - target) < 0.25 * target

    def test_diagonal_loading(self):
        block = mb.generate_snapshots(_two_source_scenario())
        plain = mb.sample_covariance(block).entries
        loaded = mb.sample_covariance(block, diagonal_loading=0.5).entries
        np.testing.assert_allclose(loaded, plain + 0.5 * np.eye(4), atol=1e-12)
        with pytest.raises(ValueError, match="diagonal_loading"):
            mb.sample_covariance(block, diagonal_loading=-0.1)

    def test_convergence_to_analytic(self):
        # median Frobenius error over 20 seeds shrinks as K grows
        sc = _two_source_scenario()
        truth = mb.true_covariance(sc).entries
        medians = []
        for k in (100, 1000, 10000):
            errs = []
            for seed in range(20):
                block = mb.generate_snapshots(
                    mb.Scenario(geometry=sc.geometry, soi=sc.soi,
                                interferers=sc.interferers, noise_power=sc.noise_power,
                                num_snapshots=k, rng_seed=seed))
                errs.append(np.linalg.norm(
                    mb.sample_covariance(block).entries - truth, ord="fro"))
            medians.append(np.median(errs))
        assert medians[0] > medians[1] > medians[2]


class TestTrueCovariance:
    def test_no_sources_is_scaled_identity(self):
        sc = mb.Scenario(
            geometry=mb.ArrayGeometry(num_antennas=3),
            soi=mb.SourceSpec(doa_deg=0.0, power_db=-np.inf),
            interferers=(), noise_power=2.5, num_snapshots=1, rng_seed=0)
        cov = mb.true_covariance(sc)
        np.testing.assert_allclose(cov.entries, 2.5 * np.eye(3), atol=1e-12)
        assert cov.kind == "analytic"

    def test_single_source_rank_one_plus_identity(self):
        sc = mb.Scenario(
            geometry=mb.ArrayGeometry(num_antennas=2),
            soi=mb.SourceSpec(doa_deg=0.0, power_db=0.0),
            interferers=(), noise_power=1.0, num_snapshots=1, rng_seed=0)
        a = mb.steering_vector(sc.geometry, 0.0)
        np.testing.assert_allclose(
            mb.true_covariance(sc).entries,
            np.eye(2) + np.outer(a, a.conj()), atol=1e-12)

    def test_exclude_soi_term(self):
        sc = _two_source_scenario()
        full = mb.true_covariance(sc, include_soi=True).entries
        part = mb.true_covariance(sc, include_soi=False).entries
        a = mb.steering_vector(sc.geometry, 0.0)
        np.testing.assert_allclose(full - part, np.outer(a, a.conj()), atol=1e-12)

    def test_benchmark_has_four_dominant_eigenvalues(self):
        eigs = np.linalg.eigvalsh(mb.true_covariance(mb.reference_scenario()).entries)
        assert np.sum(eigs > 2.0) == 4  # SOI + 3 interferers above the unit noise floor
        np.testing.assert_allclose(eigs[:4], 1.0, atol=1e-9)


class TestCovarianceMatrixValidation:
    def test_rejects_non_hermitian(self):
        bad = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            mb.CovarianceMatrix(entries=bad, kind="sample")

    def test_rejects_indefinite(self):
        bad = np.diag([1.0, -1.0]).astype(complex)
        with pytest.raises(ValueError, match="positive semidefinite"):
            mb.CovarianceMatrix(entries=bad, kind="sample")

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            mb.CovarianceMatrix(entries=np.eye(2, dtype=complex), kind="guess")

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError, match="square"):
            mb.CovarianceMatrix(entries=np.ones((2, 3), dtype=complex), kind="sample")


class TestApplyWeights:
    def test_basis_vector_selects_row(self):
        block = mb.generate_snapshots(_two_source_scenario())
        e1 = np.zeros(4, dtype=complex)
        e1[0] = 1.0
        np.testing.assert_array_equal(mb.apply_weights(e1, block), block.data[0])

    def test_distortionless_recovers_source(self):
        sc = mb.Scenario(
            geometry=mb.ArrayGeometry(num_antennas=4),
            soi=mb.SourceSpec(doa_deg=20.0, power_db=0.0),
            interferers=(), noise_power=0.0, num_snapshots=16, rng_seed=9)
        block = mb.generate_snapshots(sc)
        a = mb.steering_vector(sc.geometry, 20.0)
        y = mb.apply_weights(a / 4.0, block)
        # w^H a = 1 so the output reproduces the source amplitudes exactly
        s = block.data[0]  # element 0 has unit response: x[0,k] = s(k)
        np.testing.assert_allclose(y, s, atol=1e-12)

    def test_matches_direct_inner_products(self):
        rng = np.random.default_rng(12)
        block = mb.SnapshotBlock(
            data=rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3)))
        w = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        expected = np.array([np.vdot(w, block.data[:, k]) for k in range(3)])
        np.testing.assert_allclose(mb.apply_weights(w, block), expected, atol=1e-12)

    def test_dimension_mismatch(self):
        block = mb.generate_snapshots(_two_source_scenario())
        with pytest.raises(ValueError, match="antennas"):
            mb.apply_weights(np.ones(3, dtype=complex), block)
