"""Tests for packed symmetric matrices and spectral operations.

Rationale:
- eigendecompose: ordering/tie-break contract, orthonormality, reconstruction
- low_rank_approx: idempotence, exactness on low-rank input, Eckart-Young
  optimality against random competitors and the spectral-tail error formula
"""

from __future__ import annotations

import numpy as np
import pytest

from rankgraph import InputError, ParameterError, SymMatrix, eigendecompose, low_rank_approx


def random_symmetric(n: int, rng: np.random.Generator) -> SymMatrix:
    a = rng.standard_normal((n, n))
    return SymMatrix.from_dense((a + a.T) / 2)


class TestSymMatrix:
    def test_packed_round_trip(self):
        rng = np.random.default_rng(1)
        m = random_symmetric(7, rng)
        again = SymMatrix.from_dense(m.to_dense())
        assert np.array_equal(m.data, again.data)

    def test_from_dense_rejects_asymmetric(self):
        with pytest.raises(InputError):
            SymMatrix.from_dense(np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_upper_offdiag_row_major_order(self):
        dense = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]])
        m = SymMatrix.from_dense(dense)
        assert np.array_equal(m.upper_offdiag(), [1.0, 2.0, 3.0])
        assert np.array_equal(m.diagonal(), [0.0, 0.0, 0.0])

    def test_from_upper_matches_dense(self):
        m = SymMatrix.from_upper(3, np.array([1.0, 2.0, 3.0]), diag=5.0)
        expect = np.array([[5.0, 1.0, 2.0], [1.0, 5.0, 3.0], [2.0, 3.0, 5.0]])
        assert np.array_equal(m.to_dense(), expect)

    def test_frobenius_norm_matches_dense(self):
        rng = np.random.default_rng(2)
        m = random_symmetric(6, rng)
        assert m.frobenius_norm() == pytest.approx(np.linalg.norm(m.to_dense()), rel=1e-12)


class TestEigendecompose:
    def test_identity_eigenvalues(self):
        dec = eigendecompose(SymMatrix.from_dense(np.eye(3)))
        assert np.allclose(dec.eigenvalues, [1.0, 1.0, 1.0])

    def test_diagonal_ordering_by_magnitude(self):
        dec = eigendecompose(SymMatrix.from_dense(np.diag([3.0, -2.0, 1.0])))
        assert np.allclose(dec.eigenvalues, [3.0, -2.0, 1.0])

    def test_magnitude_tie_broken_by_signed_value(self):
        dec = eigendecompose(SymMatrix.from_dense(np.diag([-2.0, 2.0])))
        assert np.allclose(dec.eigenvalues, [2.0, -2.0])

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(3)
        m = random_symmetric(6, rng)
        dec = eigendecompose(m)
        v, w = dec.eigenvectors, dec.eigenvalues
        recon = (v * w) @ v.T
        dense = m.to_dense()
        assert np.linalg.norm(recon - dense) <= 1e-8 * np.linalg.norm(dense)
        assert np.abs(v.T @ v - np.eye(6)).max() <= 1e-8

    def test_deterministic_for_fixed_input(self):
        rng = np.random.default_rng(4)
        m = random_symmetric(8, rng)
        d1, d2 = eigendecompose(m), eigendecompose(m)
        assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
        assert np.array_equal(d1.eigenvectors, d2.eigenvectors)

    def test_sign_canonicalization(self):
        rng = np.random.default_rng(5)
        m = random_symmetric(5, rng)
        vecs = eigendecompose(m).eigenvectors
        for col in vecs.T:
            lead = col[np.abs(col) > 1e-12 * np.abs(col).max()][0]
            assert lead > 0

    def test_rejects_non_finite(self):
        data = np.zeros(6)
        data[2] = np.nan
        with pytest.raises(InputError):
            eigendecompose(SymMatrix(3, data))


class TestLowRankApprox:
    def test_full_rank_is_identity_operation(self):
        rng = np.random.default_rng(6)
        m = random_symmetric(5, rng)
        approx = low_rank_approx(m, 5)
        assert np.abs(approx.to_dense() - m.to_dense()).max() <= 1e-8

    def test_exact_on_low_rank_input(self):
        rng = np.random.default_rng(7)
        b = rng.standard_normal((6, 2))
        m = SymMatrix.from_dense(b @ b.T)
        approx = low_rank_approx(m, 2)
        assert np.abs(approx.to_dense() - m.to_dense()).max() <= 1e-8

    def test_idempotent(self):
        rng = np.random.default_rng(8)
        m = random_symmetric(9, rng)
        once = low_rank_approx(m, 3)
        twice = low_rank_approx(once, 3)
        assert np.abs(once.to_dense() - twice.to_dense()).max() <= 1e-8

    def test_error_equals_spectral_tail(self):
        rng = np.random.default_rng(9)
        m = random_symmetric(8, rng)
        w = eigendecompose(m).eigenvalues
        for k in (1, 3, 6):
            err = np.linalg.norm(m.to_dense() - low_rank_approx(m, k).to_dense())
            tail = np.sqrt((w[k:] ** 2).sum())
            assert err == pytest.approx(tail, rel=1e-6)

    def test_beats_random_rank_k_competitors(self):
        rng = np.random.default_rng(10)
        m = random_symmetric(8, rng)
        dense = m.to_dense()
        k = 3
        best = np.linalg.norm(dense - low_rank_approx(m, k).to_dense())
        for _ in range(200):
            b = rng.standard_normal((8, k))
            c = rng.standard_normal((k, k))
            cand = b @ ((c + c.T) / 2) @ b.T
            assert best <= np.linalg.norm(dense - cand) + 1e-12

    def test_zero_matrix(self):
        approx = low_rank_approx(SymMatrix.zeros(4), 2)
        assert not approx.data.any()

    def test_partial_solver_matches_dense_path(self):
        # n above the ARPACK cutoff: both paths must agree on the truncation
        rng = np.random.default_rng(11)
        b = rng.standard_normal((200, 3)) * np.array([9.0, 5.0, 2.0])
        noise = rng.standard_normal((200, 200)) * 0.01
        m = SymMatrix.from_dense(b @ b.T + (noise + noise.T) / 2)
        fast = low_rank_approx(m, 3).to_dense()
        dec = eigendecompose(m)
        v, w = dec.eigenvectors[:, :3], dec.eigenvalues[:3]
        slow = (v * w) @ v.T
        assert np.abs(fast - slow).max() <= 1e-8

    def test_rank_out_of_range(self):
        m = SymMatrix.zeros(4)
        with pytest.raises(ParameterError):
            low_rank_approx(m, 0)
        with pytest.raises(ParameterError):
            low_rank_approx(m, 5)
