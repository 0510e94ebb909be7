"""Spearman rank correlation between two edge-probability matrices.

The statistic ranks the strict-upper-triangle entries of each matrix
(midranks for ties) and returns the Pearson correlation of the two rank
vectors. It is invariant under entrywise strictly increasing transformations
of either matrix, equals 1 when the orderings agree exactly, and is close to
1 when two graphs share generating latent positions up to a similarity
transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .estimator import EstimatorConfig, average_adjacency, discretize, estimate_details
from .symmat import SymMatrix


@dataclass(frozen=True)
class TestStatistic:
    """Observed correlation t in [-1, 1] for an n-vertex pair.

    ``degenerate`` marks the zero-variance case (all ranks tied on one side),
    where t is defined as 0 so resampling loops never abort.
    """

    t: float
    n: int
    degenerate: bool = False


def midranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing the mean of their rank span."""
    v = np.asarray(values, dtype=np.float64)
    m = v.size
    if m == 0:
        return np.empty(0)
    order = np.argsort(v)
    s = v[order]
    group_start = np.empty(m, dtype=bool)
    group_start[0] = True
    np.not_equal(s[1:], s[:-1], out=group_start[1:])
    starts = np.flatnonzero(group_start)
    counts = np.diff(np.append(starts, m))
    mean_rank = starts + 0.5 * (counts + 1)
    out = np.empty(m)
    out[order] = np.repeat(mean_rank, counts)
    return out


def rank_upper_triangle(p: SymMatrix) -> np.ndarray:
    """Midranks of the n(n-1)/2 strict-upper entries, row-major."""
    if p.n < 2:
        raise InputError(f"ranking needs n >= 2, got n={p.n}")
    return midranks(p.upper_offdiag())


def _rank_correlation(rp: np.ndarray, rq: np.ndarray, n: int) -> TestStatistic:
    a = rp - rp.mean()
    b = rq - rq.mean()
    va = float(np.dot(a, a))
    vb = float(np.dot(b, b))
    if va <= 0.0 or vb <= 0.0:
        return TestStatistic(t=0.0, n=n, degenerate=True)
    t = float(np.dot(a, b) / np.sqrt(va * vb))
    return TestStatistic(t=min(max(t, -1.0), 1.0), n=n)


def spearman_statistic(p: SymMatrix, q: SymMatrix) -> TestStatistic:
    """Spearman correlation of the upper triangles of two matrices."""
    if p.n != q.n:
        raise InputError(f"matrix sizes differ: {p.n} vs {q.n}")
    if p.n < 3:
        raise InputError(f"the statistic needs n >= 3, got n={p.n}")
    return _rank_correlation(rank_upper_triangle(p), rank_upper_triangle(q), p.n)


@dataclass(frozen=True)
class PipelineResult:
    """Statistic plus the estimation context it was computed under."""

    stat: TestStatistic
    k_a: int
    k_b: int
    rho_hat_a: float
    rho_hat_b: float


def pipeline_from_averages(abar: SymMatrix, bbar: SymMatrix, cfg: EstimatorConfig) -> PipelineResult:
    """Estimate both sides from pre-averaged adjacency matrices, then correlate."""
    if abar.n != bbar.n:
        raise InputError(f"samples have different vertex counts: {abar.n} vs {bbar.n}")
    est_a = estimate_details(abar, cfg)
    est_b = estimate_details(bbar, cfg)
    pa, pb = est_a.phat, est_b.phat
    if cfg.eta is not None:
        pa = discretize(pa, cfg.eta)
        pb = discretize(pb, cfg.eta)
    return PipelineResult(
        stat=spearman_statistic(pa, pb),
        k_a=est_a.k,
        k_b=est_b.k,
        rho_hat_a=est_a.rho_hat,
        rho_hat_b=est_b.rho_hat,
    )


def statistic_pipeline(
    graphs_a: Sequence[SymMatrix],
    graphs_b: Sequence[SymMatrix],
    cfg: EstimatorConfig,
) -> PipelineResult:
    """Average each sample, estimate, optionally discretize, correlate."""
    return pipeline_from_averages(average_adjacency(graphs_a), average_adjacency(graphs_b), cfg)
