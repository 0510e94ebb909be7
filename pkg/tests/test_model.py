"""Tests for kernels, probability matrices, and graph sampling.

Rationale:
- kernels: range, monotonicity, and the worked scalar values
- build_prob_matrix: entrywise agreement with an independent scalar loop
- sample_graph: exact support, symmetry/hollowness, binomial concentration
- perturbations: scaling and variance contracts, moment checks
"""

from __future__ import annotations

import numpy as np
import pytest

from rankgraph import (
    GaussianLink,
    GraphModel,
    InputError,
    LogisticLink,
    ParameterError,
    SqExponentialLink,
    build_prob_matrix,
    generate_std_normal_positions,
    perturb_m1,
    perturb_m2,
    procrustes_distance,
    sample_graph,
)

ALL_KERNELS = [
    LogisticLink(alpha=1.0, beta=2.0),
    GaussianLink(gamma=0.8, phi=2.0),
    SqExponentialLink(scale=1.0),
    SqExponentialLink(scale=4.0),
]


class TestKernels:
    @pytest.mark.parametrize("kernel", ALL_KERNELS)
    def test_range_and_monotone(self, kernel):
        r = np.linspace(0.0, 12.0, 500)
        h = kernel(r)
        assert np.all(h >= 0.0) and np.all(h <= 1.0)
        assert np.all(np.diff(h) <= 1e-15)

    def test_logistic_value(self):
        k = LogisticLink(alpha=0.0, beta=1.0)
        assert k(np.array([0.0]))[0] == pytest.approx(0.5)

    def test_gaussian_value(self):
        k = GaussianLink(gamma=0.5, phi=2.0)
        assert k(np.array([2.0]))[0] == pytest.approx(0.5 * np.exp(-1.0))

    def test_sq_exponential_value(self):
        k = SqExponentialLink(scale=1.0)
        assert k(np.array([1.0]))[0] == pytest.approx(np.exp(-1.0))

    def test_parameter_domains(self):
        with pytest.raises(ParameterError):
            LogisticLink(alpha=0.0, beta=0.0)
        with pytest.raises(ParameterError):
            GaussianLink(gamma=1.5, phi=1.0)
        with pytest.raises(ParameterError):
            SqExponentialLink(scale=-1.0)


class TestBuildProbMatrix:
    def test_identical_points_connect_with_probability_one(self):
        x = np.zeros((2, 2))
        p = build_prob_matrix(GraphModel(x, SqExponentialLink(1.0), 1.0))
        assert p.upper_offdiag()[0] == 1.0

    def test_unit_distance_sq_exponential(self):
        x = np.array([[0.0, 0.0], [1.0, 0.0]])
        p = build_prob_matrix(GraphModel(x, SqExponentialLink(1.0), 1.0))
        assert p.upper_offdiag()[0] == pytest.approx(np.exp(-1.0), abs=1e-12)

    def test_matches_scalar_loop(self):
        rng = np.random.default_rng(20)
        x = rng.standard_normal((5, 3))
        kernel = GaussianLink(gamma=0.8, phi=2.0)
        p = build_prob_matrix(GraphModel(x, kernel, rho=0.7)).to_dense()
        for i in range(5):
            assert p[i, i] == 0.0
            for j in range(5):
                if i == j:
                    continue
                r = np.sqrt(((x[i] - x[j]) ** 2).sum())
                expect = 0.7 * 0.8 * np.exp(-r * r / 4.0)
                assert p[i, j] == pytest.approx(expect, abs=1e-12)

    def test_entries_bounded_by_rho_and_monotone_in_distance(self):
        rng = np.random.default_rng(21)
        x = rng.standard_normal((30, 2))
        rho = 0.6
        for kernel in ALL_KERNELS:
            p = build_prob_matrix(GraphModel(x, kernel, rho))
            vals = p.upper_offdiag()
            assert vals.min() >= 0.0 and vals.max() <= rho + 1e-15
            from scipy.spatial.distance import pdist

            dists = pdist(x)
            order = np.argsort(dists)
            assert np.all(np.diff(vals[order]) <= 1e-12)

    def test_rho_validated(self):
        x = np.zeros((3, 1))
        with pytest.raises(ParameterError):
            GraphModel(x, SqExponentialLink(1.0), rho=0.0)
        with pytest.raises(ParameterError):
            GraphModel(x, SqExponentialLink(1.0), rho=1.5)


class TestSampleGraph:
    def test_all_zero_probabilities_give_empty_graph(self):
        rng = np.random.default_rng(22)
        p = build_prob_matrix(GraphModel(np.array([[0.0], [100.0], [200.0]]),
                                         SqExponentialLink(1.0), 1.0))
        g = sample_graph(p, rng)
        assert not g.data.any()

    def test_all_one_probabilities_give_complete_graph(self):
        rng = np.random.default_rng(23)
        p = build_prob_matrix(GraphModel(np.zeros((4, 2)), SqExponentialLink(1.0), 1.0))
        g = sample_graph(p, rng)
        assert np.array_equal(g.upper_offdiag(), np.ones(6))
        assert not g.diagonal().any()

    def test_entries_binary_symmetric_hollow(self):
        rng = np.random.default_rng(24)
        x = rng.standard_normal((20, 2))
        g = sample_graph(build_prob_matrix(GraphModel(x, SqExponentialLink(1.0), 0.8)), rng)
        dense = g.to_dense()
        assert set(np.unique(dense)) <= {0.0, 1.0}
        assert np.array_equal(dense, dense.T)
        assert not dense.diagonal().any()

    def test_density_concentrates(self):
        rng = np.random.default_rng(25)
        n, p0 = 200, 0.3
        from rankgraph import SymMatrix

        p = SymMatrix.from_upper(n, np.full(n * (n - 1) // 2, p0))
        g = sample_graph(p, rng)
        density = g.upper_offdiag().mean()
        se = np.sqrt(p0 * (1 - p0) / (n * (n - 1) / 2))
        assert abs(density - p0) <= 3 * se

    def test_deterministic_given_seed(self):
        x = np.random.default_rng(26).standard_normal((15, 2))
        p = build_prob_matrix(GraphModel(x, SqExponentialLink(1.0), 1.0))
        g1 = sample_graph(p, np.random.default_rng(99))
        g2 = sample_graph(p, np.random.default_rng(99))
        assert np.array_equal(g1.data, g2.data)

    def test_rejects_invalid_probabilities(self):
        from rankgraph import SymMatrix

        bad = SymMatrix.from_upper(3, np.array([0.5, 1.2, 0.1]))
        with pytest.raises(InputError):
            sample_graph(bad, np.random.default_rng(0))


class TestPositionsAndPerturbations:
    def test_positions_deterministic(self):
        a = generate_std_normal_positions(10, 2, np.random.default_rng(5))
        b = generate_std_normal_positions(10, 2, np.random.default_rng(5))
        assert np.array_equal(a, b)

    def test_positions_moments(self):
        x = generate_std_normal_positions(10_000, 2, np.random.default_rng(6))
        assert np.abs(x.mean(axis=0)).max() <= 3 / np.sqrt(10_000)
        assert np.abs(x.var(axis=0) - 1.0).max() <= 0.05

    def test_m1_identity_and_scaling(self):
        x = generate_std_normal_positions(50, 2, np.random.default_rng(7))
        assert np.array_equal(perturb_m1(x, 0.0), x)
        y = perturb_m1(x, 0.5)
        assert np.allclose(np.linalg.norm(y, axis=1), 1.5 * np.linalg.norm(x, axis=1))

    def test_m1_is_exact_similarity(self):
        x = generate_std_normal_positions(40, 2, np.random.default_rng(8))
        for eps in (0.0, 0.1, 2.0):
            dn, _ = procrustes_distance(x, perturb_m1(x, eps))
            assert dn <= 1e-8

    def test_m2_identity_at_zero(self):
        x = generate_std_normal_positions(30, 2, np.random.default_rng(9))
        assert np.array_equal(perturb_m2(x, 0.0, np.random.default_rng(0)), x)

    def test_m2_noise_variance(self):
        x = generate_std_normal_positions(10_000, 2, np.random.default_rng(10))
        y = perturb_m2(x, 0.25, np.random.default_rng(11))
        msd = ((y - x) ** 2).mean()
        assert abs(msd - 0.25) <= 0.05 * 0.25

    def test_m2_breaks_similarity(self):
        rng = np.random.default_rng(12)
        for _ in range(5):
            x = generate_std_normal_positions(30, 2, rng)
            y = perturb_m2(x, 0.3, rng)
            dn, _ = procrustes_distance(x, y)
            assert dn > 0.0
