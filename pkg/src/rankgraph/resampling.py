"""Calibration of the rank-correlation statistic: permutation and bootstrap.

Small values of the statistic are evidence against the null, so all
calibrations are one-sided lower-tail tests.

* ``permutation_test`` repartitions the pooled graphs across the two group
  labels; it needs at least two graphs per side.
* ``bootstrap_test`` resamples pairs of graphs from each side's estimated
  probability matrix and compares the observed statistic against the
  within-population resampled statistics; it works with a single graph per
  side.
* ``null_reference_test`` regenerates fresh graph pairs from a known null
  model; it is the oracle calibration available only in simulations.

All three derive one random stream per replication from the caller's seed,
so reports are reproducible regardless of execution order or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Sequence, Union

import numpy as np

from . import seeding
from .errors import CalibrationError, InputError
from .estimator import EstimatorConfig, average_adjacency, estimate_details
from .model import GraphModel, build_prob_matrix, sample_graph
from .ranktest import PipelineResult, pipeline_from_averages, spearman_statistic
from .symmat import SymMatrix

GraphOrSample = Union[SymMatrix, Sequence[SymMatrix]]


def config_snapshot(cfg: EstimatorConfig) -> dict[str, Any]:
    """JSON-friendly snapshot of an estimator configuration."""
    rank = cfg.rank
    method = type(rank).__name__
    if method == "FixedRank":
        rank_info: dict[str, Any] = {"method": "fixed", "k": rank.k}
    elif method == "ThresholdRank":
        rank_info = {"method": "threshold", "c0": rank.c0}
    else:
        rank_info = {"method": "profile_likelihood", "max_rank": rank.max_rank}
    return {"rank": rank_info, "clip": cfg.clip, "eta": cfg.eta}


@dataclass
class TestReport:
    """Outcome of one calibrated two-sample test."""

    t_observed: float
    p_value: float
    method: str
    n_reps: int
    seed: int
    seed_path: tuple[int, ...]
    n: int
    k_a: int
    k_b: int
    settings: dict[str, Any]
    null_samples: dict[str, np.ndarray] = field(default_factory=dict)
    degenerate_observed: bool = False
    n_degenerate: int = 0


def _report_seed(seed: int | np.random.SeedSequence) -> tuple[int, tuple[int, ...]]:
    base = seeding.root_sequence(seed)
    return int(base.entropy), tuple(base.spawn_key)


def _stack(graphs: Sequence[SymMatrix]) -> np.ndarray:
    n = graphs[0].n
    for g in graphs[1:]:
        if g.n != n:
            raise InputError(f"graph sizes differ: {g.n} vs {n}")
    return np.stack([g.data for g in graphs])


def permutation_test(
    graphs_a: Sequence[SymMatrix],
    graphs_b: Sequence[SymMatrix],
    cfg: EstimatorConfig,
    n_reps: int,
    seed: int | np.random.SeedSequence,
) -> TestReport:
    """Two-sample test calibrated by permuting graph-to-group labels.

    The observed statistic is compared against ``n_reps`` random
    repartitions of the pooled graphs into groups of the original sizes;
    the p-value is the add-one-smoothed lower-tail fraction
    (1 + #{t_perm <= t_obs}) / (n_reps + 1).

    Raises
    ------
    CalibrationError
        If either side has fewer than two graphs (use ``bootstrap_test``).
    """
    ma, mb = len(graphs_a), len(graphs_b)
    if ma < 2 or mb < 2:
        raise CalibrationError(
            "permutation needs >= 2 graphs per side "
            f"(got {ma} and {mb}); use bootstrap_test for single graphs"
        )
    pooled = _stack(list(graphs_a) + list(graphs_b))
    n = graphs_a[0].n

    def group_statistic(idx_a: np.ndarray, idx_b: np.ndarray) -> PipelineResult:
        abar = SymMatrix(n, pooled[idx_a].mean(axis=0), copy=False)
        bbar = SymMatrix(n, pooled[idx_b].mean(axis=0), copy=False)
        return pipeline_from_averages(abar, bbar, cfg)

    identity = np.arange(ma + mb)
    obs = group_statistic(identity[:ma], identity[ma:])
    t_obs = obs.stat.t

    t_perm = np.empty(n_reps)
    n_degenerate = 0
    for k in range(n_reps):
        rng = seeding.generator(seed, k)
        perm = rng.permutation(ma + mb)
        rep = group_statistic(perm[:ma], perm[ma:])
        t_perm[k] = rep.stat.t
        n_degenerate += int(rep.stat.degenerate)

    p_value = (1.0 + int((t_perm <= t_obs).sum())) / (n_reps + 1.0)
    entropy, path = _report_seed(seed)
    return TestReport(
        t_observed=t_obs,
        p_value=p_value,
        method="permutation",
        n_reps=n_reps,
        seed=entropy,
        seed_path=path,
        n=n,
        k_a=obs.k_a,
        k_b=obs.k_b,
        settings=config_snapshot(cfg),
        null_samples={"t_perm": t_perm},
        degenerate_observed=obs.stat.degenerate,
        n_degenerate=n_degenerate,
    )


def bootstrap_p_value(
    t_obs: float,
    t_p: np.ndarray,
    t_q: np.ndarray,
    degenerate_p: np.ndarray | None = None,
    degenerate_q: np.ndarray | None = None,
) -> float:
    """Combine within-population bootstrap samples into one p-value.

    Each side contributes the fraction of its resampled statistics at or
    below the observed one; the p-value is the larger fraction, capped at 1.
    Degenerate resamples carry no ordering signal and count toward the
    fraction, which can only make the test more conservative.
    """
    t_p = np.asarray(t_p, dtype=np.float64)
    t_q = np.asarray(t_q, dtype=np.float64)
    ind_p = t_p <= t_obs
    ind_q = t_q <= t_obs
    if degenerate_p is not None:
        ind_p = ind_p | np.asarray(degenerate_p, dtype=bool)
    if degenerate_q is not None:
        ind_q = ind_q | np.asarray(degenerate_q, dtype=bool)
    return float(min(max(ind_p.mean(), ind_q.mean()), 1.0))


def _as_average(sample: GraphOrSample) -> SymMatrix:
    if isinstance(sample, SymMatrix):
        return sample
    return average_adjacency(sample)


def bootstrap_test(
    a: GraphOrSample,
    b: GraphOrSample,
    cfg: EstimatorConfig,
    n_reps: int,
    seed: int | np.random.SeedSequence,
) -> TestReport:
    """Parametric bootstrap for one (or few, averaged) graphs per side.

    Estimates each side's probability matrix, then per replication draws two
    fresh graphs per side from the estimates, re-estimates, and records the
    within-population statistics t_P and t_Q. Estimates are always clipped to
    [0, 1] so they are valid Bernoulli parameters, and no eta-discretization
    is applied anywhere in this scheme.
    """
    abar = _as_average(a)
    bbar = _as_average(b)
    if abar.n != bbar.n:
        raise InputError(f"samples have different vertex counts: {abar.n} vs {bbar.n}")
    boot_cfg = replace(cfg, clip=True, eta=None)
    est_a = estimate_details(abar, boot_cfg)
    est_b = estimate_details(bbar, boot_cfg)
    obs = spearman_statistic(est_a.phat, est_b.phat)

    t_p = np.empty(n_reps)
    t_q = np.empty(n_reps)
    deg_p = np.zeros(n_reps, dtype=bool)
    deg_q = np.zeros(n_reps, dtype=bool)
    for k in range(n_reps):
        rng = seeding.generator(seed, k)
        rep_a1 = estimate_details(sample_graph(est_a.phat, rng), boot_cfg).phat
        rep_a2 = estimate_details(sample_graph(est_a.phat, rng), boot_cfg).phat
        rep_b1 = estimate_details(sample_graph(est_b.phat, rng), boot_cfg).phat
        rep_b2 = estimate_details(sample_graph(est_b.phat, rng), boot_cfg).phat
        stat_p = spearman_statistic(rep_a1, rep_a2)
        stat_q = spearman_statistic(rep_b1, rep_b2)
        t_p[k], deg_p[k] = stat_p.t, stat_p.degenerate
        t_q[k], deg_q[k] = stat_q.t, stat_q.degenerate

    p_value = bootstrap_p_value(obs.t, t_p, t_q, deg_p, deg_q)
    entropy, path = _report_seed(seed)
    return TestReport(
        t_observed=obs.t,
        p_value=p_value,
        method="bootstrap",
        n_reps=n_reps,
        seed=entropy,
        seed_path=path,
        n=abar.n,
        k_a=est_a.k,
        k_b=est_b.k,
        settings=config_snapshot(boot_cfg),
        null_samples={"t_p": t_p, "t_q": t_q},
        degenerate_observed=obs.degenerate,
        n_degenerate=int(deg_p.sum() + deg_q.sum()),
    )


def null_reference_test(
    model_a: GraphModel,
    graphs_a: Sequence[SymMatrix],
    graphs_b: Sequence[SymMatrix],
    cfg: EstimatorConfig,
    n_reps: int,
    seed: int | np.random.SeedSequence,
    model_b: GraphModel | None = None,
) -> TestReport:
    """Oracle calibration against a known null model (simulations only).

    Fresh graph pairs are regenerated from the null model per replication:
    side A from ``model_a`` and side B from ``model_b`` (defaults to
    ``model_a``), with the observed sample sizes. The p-value is the same
    add-one-smoothed lower-tail fraction as in ``permutation_test``.
    """
    if model_b is None:
        model_b = model_a
    ma, mb = len(graphs_a), len(graphs_b)
    if ma < 1 or mb < 1:
        raise InputError("each side needs at least one graph")
    prob_a = build_prob_matrix(model_a)
    prob_b = build_prob_matrix(model_b)
    if prob_a.n != graphs_a[0].n or prob_b.n != graphs_b[0].n:
        raise InputError("null model size does not match the observed graphs")

    obs = pipeline_from_averages(average_adjacency(graphs_a), average_adjacency(graphs_b), cfg)
    t_obs = obs.stat.t

    t_null = np.empty(n_reps)
    n_degenerate = 0
    for k in range(n_reps):
        rng = seeding.generator(seed, k)
        fresh_a = [sample_graph(prob_a, rng) for _ in range(ma)]
        fresh_b = [sample_graph(prob_b, rng) for _ in range(mb)]
        rep = pipeline_from_averages(
            average_adjacency(fresh_a), average_adjacency(fresh_b), cfg
        )
        t_null[k] = rep.stat.t
        n_degenerate += int(rep.stat.degenerate)

    p_value = (1.0 + int((t_null <= t_obs).sum())) / (n_reps + 1.0)
    entropy, path = _report_seed(seed)
    return TestReport(
        t_observed=t_obs,
        p_value=p_value,
        method="null_reference",
        n_reps=n_reps,
        seed=entropy,
        seed_path=path,
        n=prob_a.n,
        k_a=obs.k_a,
        k_b=obs.k_b,
        settings=config_snapshot(cfg),
        null_samples={"t_null": t_null},
        degenerate_observed=obs.stat.degenerate,
        n_degenerate=n_degenerate,
    )
