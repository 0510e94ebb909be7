"""Dense symmetric matrices in packed-triangle storage plus spectral ops.

A :class:`SymMatrix` stores only the upper triangle (diagonal included), so
the logical matrix is symmetric by construction. Adjacency matrices,
edge-probability matrices and their estimates are all instances of it.

Decompositions are delegated to LAPACK (`numpy.linalg.eigh`); rank-K
truncation uses ARPACK (`scipy.sparse.linalg.eigsh`) when only a few leading
components of a large matrix are needed, with a deterministic start vector so
repeated runs are bit-identical.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg

from .errors import InputError, ParameterError

# eigsh is only worthwhile when the requested rank is far below n
_PARTIAL_MIN_N = 160
_PARTIAL_MAX_K = 10


@functools.lru_cache(maxsize=8)
def _layout(n: int):
    """Packed-layout index helpers for size n (cached per size).

    Returns (rows, cols, diag_pos, offdiag_pos): the (i, j) coordinates of
    each packed slot in row-major upper-triangle order, and the packed
    positions of diagonal and strict-upper entries.
    """
    rows, cols = np.triu_indices(n)
    diag_pos = np.flatnonzero(rows == cols)
    offdiag_pos = np.flatnonzero(rows < cols)
    return rows, cols, diag_pos, offdiag_pos


def packed_length(n: int) -> int:
    return n * (n + 1) // 2


class SymMatrix:
    """A real symmetric n x n matrix stored as its packed upper triangle.

    ``data`` holds the entries (i, j) with i <= j in row-major order,
    length n(n+1)/2. The array is never aliased to caller memory unless
    ``copy=False`` is requested by internal code.
    """

    __slots__ = ("n", "data")

    def __init__(self, n: int, data: np.ndarray, copy: bool = True):
        n = int(n)
        if n < 1:
            raise InputError(f"matrix size must be >= 1, got {n}")
        data = np.asarray(data, dtype=np.float64)
        if data.shape != (packed_length(n),):
            raise InputError(
                f"packed data for n={n} must have length {packed_length(n)}, "
                f"got shape {data.shape}"
            )
        self.n = n
        self.data = data.copy() if copy else data

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_dense(cls, dense: np.ndarray, atol: float = 1e-8) -> "SymMatrix":
        """Pack a dense symmetric array, checking symmetry to ``atol``."""
        dense = np.asarray(dense, dtype=np.float64)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise InputError(f"expected a square matrix, got shape {dense.shape}")
        asym = np.abs(dense - dense.T).max() if dense.size else 0.0
        if asym > atol:
            raise InputError(f"matrix is not symmetric (max |a_ij - a_ji| = {asym:.3g})")
        rows, cols, _, _ = _layout(dense.shape[0])
        return cls(dense.shape[0], dense[rows, cols], copy=False)

    @classmethod
    def from_upper(
        cls,
        n: int,
        offdiag: np.ndarray,
        diag: float | np.ndarray = 0.0,
    ) -> "SymMatrix":
        """Build from strict-upper entries (row-major, i < j) and a diagonal."""
        offdiag = np.asarray(offdiag, dtype=np.float64)
        m = n * (n - 1) // 2
        if offdiag.shape != (m,):
            raise InputError(f"expected {m} strict-upper entries for n={n}, got {offdiag.shape}")
        _, _, diag_pos, offdiag_pos = _layout(n)
        data = np.empty(packed_length(n))
        data[offdiag_pos] = offdiag
        data[diag_pos] = diag
        return cls(n, data, copy=False)

    @classmethod
    def zeros(cls, n: int) -> "SymMatrix":
        return cls(n, np.zeros(packed_length(n)), copy=False)

    # -- views -------------------------------------------------------------

    def to_dense(self) -> np.ndarray:
        rows, cols, _, _ = _layout(self.n)
        out = np.empty((self.n, self.n))
        out[rows, cols] = self.data
        out[cols, rows] = self.data
        return out

    def upper_offdiag(self) -> np.ndarray:
        """Strict-upper entries in row-major order (length n(n-1)/2)."""
        _, _, _, offdiag_pos = _layout(self.n)
        return self.data[offdiag_pos]

    def diagonal(self) -> np.ndarray:
        _, _, diag_pos, _ = _layout(self.n)
        return self.data[diag_pos]

    def with_zero_diagonal(self) -> "SymMatrix":
        _, _, diag_pos, _ = _layout(self.n)
        data = self.data.copy()
        data[diag_pos] = 0.0
        return SymMatrix(self.n, data, copy=False)

    def frobenius_norm(self) -> float:
        d2 = float(np.dot(self.diagonal(), self.diagonal()))
        o = self.upper_offdiag()
        return float(np.sqrt(d2 + 2.0 * np.dot(o, o)))

    def __repr__(self) -> str:  # pragma: no cover
        return f"SymMatrix(n={self.n})"


@dataclass(frozen=True, eq=False)
class SpectralDecomp:
    """Full eigendecomposition, ordered by descending |eigenvalue|.

    ``eigenvalues`` has length n; ``eigenvectors`` holds the matching
    orthonormal columns. Reconstruction ``V diag(w) V^T`` recovers the input
    to floating-point accuracy for well-conditioned matrices.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _canonical_order(vals: np.ndarray, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort by descending |w| (ties: descending signed value) and fix signs.

    Each eigenvector is flipped so that its first component of non-negligible
    magnitude is positive, making outputs reproducible across LAPACK builds.
    """
    order = np.lexsort((-vals, -np.abs(vals)))
    vals = vals[order]
    vecs = vecs[:, order]
    absv = np.abs(vecs)
    thresh = 1e-12 * absv.max(axis=0)
    first = (absv > thresh).argmax(axis=0)
    signs = np.sign(vecs[first, np.arange(vecs.shape[1])])
    signs[signs == 0.0] = 1.0
    return vals, vecs * signs


def eigendecompose(m: SymMatrix) -> SpectralDecomp:
    """Full symmetric eigendecomposition with deterministic ordering.

    Raises
    ------
    InputError
        If the matrix contains non-finite entries.
    """
    if not np.isfinite(m.data).all():
        raise InputError("matrix contains non-finite entries")
    vals, vecs = np.linalg.eigh(m.to_dense())
    vals, vecs = _canonical_order(vals, vecs)
    return SpectralDecomp(eigenvalues=vals, eigenvectors=vecs)


@functools.lru_cache(maxsize=8)
def _lanczos_start(n: int) -> np.ndarray:
    # fixed start vector keeps ARPACK output deterministic per input
    return np.random.default_rng(0x5EED1E55).standard_normal(n)


def _top_components(dense: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """The k spectrally largest eigenpairs of a dense symmetric matrix."""
    n = dense.shape[0]
    if k < n and n >= _PARTIAL_MIN_N and k <= _PARTIAL_MAX_K:
        try:
            vals, vecs = scipy.sparse.linalg.eigsh(
                dense, k=k, which="LM", v0=_lanczos_start(n)
            )
            return _canonical_order(vals, vecs)
        except scipy.sparse.linalg.ArpackError:
            pass  # rare non-convergence: fall through to the dense solver
    vals, vecs = np.linalg.eigh(dense)
    vals, vecs = _canonical_order(vals, vecs)
    return vals[:k], vecs[:, :k]


def truncate_decomposition(dec: SpectralDecomp, k: int) -> SymMatrix:
    """Rank-k reconstruction from an existing decomposition."""
    vals = dec.eigenvalues[:k]
    vecs = dec.eigenvectors[:, :k]
    dense = (vecs * vals) @ vecs.T
    rows, cols, _, _ = _layout(dense.shape[0])
    return SymMatrix(dense.shape[0], dense[rows, cols], copy=False)


def low_rank_approx(m: SymMatrix, k: int) -> SymMatrix:
    """Best rank-k Frobenius approximation of a symmetric matrix.

    Keeps the k components of largest |eigenvalue|; for symmetric matrices
    this coincides with the truncated SVD. Output is exactly symmetric by
    packed construction.

    Raises
    ------
    ParameterError
        If k is outside [1, n].
    """
    if not 1 <= k <= m.n:
        raise ParameterError(f"rank k={k} outside [1, {m.n}]")
    if not np.isfinite(m.data).all():
        raise InputError("matrix contains non-finite entries")
    if not m.data.any():
        return SymMatrix.zeros(m.n)
    vals, vecs = _top_components(m.to_dense(), k)
    dense = (vecs * vals) @ vecs.T
    rows, cols, _, _ = _layout(m.n)
    return SymMatrix(m.n, dense[rows, cols], copy=False)
