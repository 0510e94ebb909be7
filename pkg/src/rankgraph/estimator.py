"""Edge-probability estimation by spectral truncation of averaged graphs.

The estimator averages the adjacency matrices of a sample, keeps the K
spectrally largest components of the average, and optionally clips the result
into [0, 1] and snaps it upward onto an eta-grid. K can be fixed, chosen by a
singular-value threshold c0 * sqrt(n * rho_hat), or picked at the elbow of
the eigenvalue scree via a two-segment Gaussian profile likelihood.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import EstimationError, InputError, ParameterError
from .symmat import (
    SymMatrix,
    eigendecompose,
    low_rank_approx,
    truncate_decomposition,
)

DEFAULT_C0 = 4.5
DEFAULT_MAX_RANK = 50
# shields exact grid points from upward promotion by representation error
_CEIL_NUDGE = 1e-12


@dataclass(frozen=True)
class FixedRank:
    """Truncate to a fixed rank k >= 1 (capped at n)."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"fixed rank must be >= 1, got {self.k}")


@dataclass(frozen=True)
class ThresholdRank:
    """Keep eigenvalues with |w| >= c0 * sqrt(n * rho_hat), at least one."""

    c0: float = DEFAULT_C0

    def __post_init__(self):
        if not self.c0 > 0:
            raise ParameterError(f"threshold constant c0 must be > 0, got {self.c0}")


@dataclass(frozen=True)
class ProfileLikelihoodRank:
    """Elbow of the |eigenvalue| scree over the top ``max_rank`` values."""

    max_rank: int | None = None

    def __post_init__(self):
        if self.max_rank is not None and self.max_rank < 2:
            raise ParameterError(f"max_rank must be >= 2, got {self.max_rank}")


RankSelection = Union[FixedRank, ThresholdRank, ProfileLikelihoodRank]


@dataclass(frozen=True)
class EstimatorConfig:
    """Rank selection rule, [0, 1] clipping, and optional eta-discretization."""

    rank: RankSelection = FixedRank(3)
    clip: bool = True
    eta: float | None = None

    def __post_init__(self):
        if self.eta is not None and not 0 < self.eta <= 1:
            raise ParameterError(f"eta must lie in (0, 1], got {self.eta}")


@dataclass(frozen=True, eq=False)
class EstimateResult:
    """An estimated probability matrix plus how its rank was resolved."""

    phat: SymMatrix
    k: int
    rho_hat: float


def average_adjacency(graphs: Sequence[SymMatrix]) -> SymMatrix:
    """Entrywise mean of a non-empty list of same-size adjacency matrices."""
    if len(graphs) == 0:
        raise InputError("cannot average an empty list of graphs")
    n = graphs[0].n
    for g in graphs[1:]:
        if g.n != n:
            raise InputError(f"graph sizes differ: {g.n} vs {n}")
    if len(graphs) == 1:
        return SymMatrix(n, graphs[0].data)
    acc = np.zeros_like(graphs[0].data)
    for g in graphs:
        acc += g.data
    return SymMatrix(n, acc / len(graphs), copy=False)


def estimate_rho(abar: SymMatrix) -> float:
    """Mean off-diagonal entry of the averaged adjacency matrix."""
    off = abar.upper_offdiag()
    return float(off.mean()) if off.size else 0.0


def _profile_likelihood_split(values: np.ndarray) -> int:
    """Split index maximizing the two-segment equal-variance Gaussian fit.

    ``values`` is the descending |eigenvalue| scree. For each split q the two
    segments get their own mean and a pooled variance; the returned q (the
    proposed rank) maximizes the combined log-likelihood.
    """
    m = values.size
    if m == 1:
        return 1
    best_q, best_ll = 1, -np.inf
    for q in range(1, m):
        seg1, seg2 = values[:q], values[q:]
        ss = float(((seg1 - seg1.mean()) ** 2).sum() + ((seg2 - seg2.mean()) ** 2).sum())
        sigma2 = max(ss / m, 1e-30)
        ll = -0.5 * m * (np.log(2.0 * np.pi * sigma2) + ss / (m * sigma2))
        if ll > best_ll:
            best_q, best_ll = q, ll
    return best_q


def resolve_rank(spectrum: np.ndarray, method: RankSelection, rho_hat: float) -> int:
    """Resolve the truncation rank from a |w|-descending eigenvalue vector.

    Raises
    ------
    EstimationError
        If the spectrum is identically zero (carries it for diagnosis).
    """
    spectrum = np.asarray(spectrum, dtype=np.float64)
    n = spectrum.size
    if n == 0 or not np.abs(spectrum).max() > 0:
        raise EstimationError("spectrum is identically zero", spectrum=spectrum)
    if isinstance(method, FixedRank):
        return min(method.k, n)
    if isinstance(method, ThresholdRank):
        tau = method.c0 * np.sqrt(n * max(rho_hat, 0.0))
        return max(int((np.abs(spectrum) >= tau).sum()), 1)
    if isinstance(method, ProfileLikelihoodRank):
        cap = method.max_rank if method.max_rank is not None else min(n - 1, DEFAULT_MAX_RANK)
        cap = max(min(cap, n), 1)
        return _profile_likelihood_split(np.abs(spectrum[:cap]))
    raise ParameterError(f"unknown rank selection method: {method!r}")


def _finalize(phat: SymMatrix, clip: bool) -> SymMatrix:
    data = phat.data
    if clip:
        np.clip(data, 0.0, 1.0, out=data)
    return phat.with_zero_diagonal()


def estimate_details(abar: SymMatrix, cfg: EstimatorConfig) -> EstimateResult:
    """Estimate the edge-probability matrix and report the resolved rank."""
    if abar.data.size and (abar.data.min() < 0.0 or abar.data.max() > 1.0):
        raise InputError("averaged adjacency entries must lie in [0, 1]")
    rho_hat = estimate_rho(abar)
    if isinstance(cfg.rank, FixedRank):
        # fixed K never needs the full spectrum; use the fast truncation path
        k = min(cfg.rank.k, abar.n)
        phat = low_rank_approx(abar, k)
    else:
        dec = eigendecompose(abar)
        k = resolve_rank(dec.eigenvalues, cfg.rank, rho_hat)
        if k < 1:
            raise EstimationError("resolved rank < 1", spectrum=dec.eigenvalues)
        phat = truncate_decomposition(dec, k)
    return EstimateResult(phat=_finalize(phat, cfg.clip), k=k, rho_hat=rho_hat)


def estimate_prob_matrix(abar: SymMatrix, cfg: EstimatorConfig) -> SymMatrix:
    """Rank-K spectral estimate of the edge probabilities (see module doc)."""
    return estimate_details(abar, cfg).phat


def discretize(p: SymMatrix, eta: float) -> SymMatrix:
    """Snap entries upward onto the eta-grid: ceil(p / eta) * eta.

    Zero stays zero, and values already sitting on a grid point are not
    promoted by floating-point representation error (a 1e-12 nudge is
    subtracted before the ceiling). Requires entries in [0, 1]; clip first.
    """
    if not 0 < eta <= 1:
        raise ParameterError(f"eta must lie in (0, 1], got {eta}")
    if p.data.size and (p.data.min() < 0.0 or p.data.max() > 1.0):
        raise InputError("discretize requires entries in [0, 1]; clip the estimate first")
    snapped = np.ceil((p.data - _CEIL_NUDGE) / eta) * eta
    np.maximum(snapped, 0.0, out=snapped)
    return SymMatrix(p.n, snapped, copy=False)
