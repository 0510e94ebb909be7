"""Power experiments over the simulated latent-position settings.

Each experiment cell (setting, n, eps) runs independent end-to-end trials:
fresh standard-normal latent positions in R^2, the configured perturbation of
the second sample, graph sampling, and one calibrated test. Power is the
exact fraction of trials with p-value below alpha.

The two settings and their kernels follow the simulation design:

* M1: y_i = (1 + eps) x_i (a similarity transform; the null always holds).
* M2: y_i = x_i + z_i with z entries N(0, eps) (the null holds iff eps = 0).
* side A uses h(r) = exp(-r^2), side B uses g(r) = exp(-r^2 / 4).

Trials derive their streams from (seed, cell index, trial index), so results
are identical for any worker count and any scheduling order.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import seeding
from .align import procrustes_distance
from .errors import ParameterError, RankGraphError
from .estimator import (
    EstimatorConfig,
    FixedRank,
    average_adjacency,
    discretize,
    estimate_prob_matrix,
)
from .model import (
    GraphModel,
    LinkKernel,
    SqExponentialLink,
    build_prob_matrix,
    generate_std_normal_positions,
    perturb_m1,
    perturb_m2,
    sample_graph,
)
from .ranktest import spearman_statistic
from .resampling import TestReport, bootstrap_test, null_reference_test, permutation_test

LATENT_DIM = 2
KERNEL_A = SqExponentialLink(1.0)
KERNEL_B = SqExponentialLink(4.0)

SETTINGS = ("M1", "M2")
CALIBRATIONS = ("null_reference", "permutation", "bootstrap")
RHO_RULES = ("dense", "gamma_log")

CSV_HEADER = ("setting", "n", "eps", "rho", "power", "mean_t", "mean_dn", "trials", "N", "seed")


@dataclass(frozen=True)
class ExperimentSpec:
    """Full description of one power experiment."""

    setting: str
    n_list: tuple[int, ...]
    eps_list: tuple[float, ...]
    calibration: str = "null_reference"
    rho_rule: str = "dense"
    gamma: float = 1.0
    m: int = 1
    trials: int = 100
    n_reps: int = 200
    alpha: float = 0.05
    cfg: EstimatorConfig = EstimatorConfig(rank=FixedRank(3))
    seed: int = 0

    def __post_init__(self):
        if self.setting not in SETTINGS:
            raise ParameterError(f"setting must be one of {SETTINGS}, got {self.setting!r}")
        if self.calibration not in CALIBRATIONS:
            raise ParameterError(
                f"calibration must be one of {CALIBRATIONS}, got {self.calibration!r}"
            )
        if self.rho_rule not in RHO_RULES:
            raise ParameterError(f"rho_rule must be one of {RHO_RULES}, got {self.rho_rule!r}")
        if self.rho_rule == "gamma_log" and not self.gamma > 0:
            raise ParameterError(f"gamma_log requires gamma > 0, got {self.gamma}")
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.trials < 1 or self.n_reps < 1 or self.m < 1:
            raise ParameterError("trials, n_reps and m must all be >= 1")
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "eps_list", tuple(float(e) for e in self.eps_list))

    def rho_for(self, n: int) -> float:
        if self.rho_rule == "dense":
            return 1.0
        rho = self.gamma * math.log(n) / n
        if not 0 < rho <= 1:
            raise ParameterError(f"gamma_log rule yields rho={rho:.4g} outside (0, 1] at n={n}")
        return rho


@dataclass(frozen=True)
class TrialRecord:
    """One end-to-end trial, replayable from its seed key."""

    trial: int
    t: float
    p_value: float
    reject: bool
    dn: float
    k_a: int
    k_b: int
    seed_key: str
    wall_s: float


@dataclass
class CellResult:
    setting: str
    n: int
    eps: float
    rho: float
    power: float
    mean_t: float
    t_quantiles: dict[str, float]
    mean_dn: float
    trials: int
    n_reps: int
    seed: int
    wall_s: float
    records: list[TrialRecord] = field(default_factory=list)
    error: str | None = None


@dataclass
class PowerTable:
    cells: list[CellResult]

    def write_csv(self, path) -> None:
        """Write one row per completed cell in the fixed column layout."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for cell in self.cells:
                if cell.error is not None:
                    continue
                writer.writerow(
                    (
                        cell.setting,
                        cell.n,
                        _fmt(cell.eps),
                        _fmt(cell.rho),
                        _fmt(cell.power),
                        _fmt(cell.mean_t),
                        _fmt(cell.mean_dn),
                        cell.trials,
                        cell.n_reps,
                        cell.seed,
                    )
                )


def _fmt(x: float) -> str:
    return format(float(x), ".10g")


def _run_trial(spec: ExperimentSpec, cell_index: int, n: int, eps: float, rho: float,
               trial: int) -> TrialRecord:
    start = time.perf_counter()
    trial_ss = seeding.child_sequence(spec.seed, cell_index, trial)
    rng = seeding.generator(trial_ss, 0)

    x = generate_std_normal_positions(n, LATENT_DIM, rng)
    if spec.setting == "M1":
        y = perturb_m1(x, eps)
    else:
        y = perturb_m2(x, eps, rng)

    prob_a = build_prob_matrix(GraphModel(x, KERNEL_A, rho))
    prob_b = build_prob_matrix(GraphModel(y, KERNEL_B, rho))
    graphs_a = [sample_graph(prob_a, rng) for _ in range(spec.m)]
    graphs_b = [sample_graph(prob_b, rng) for _ in range(spec.m)]
    dn, _ = procrustes_distance(x, y)

    calib_seed = seeding.child_sequence(trial_ss, 1)
    report = _calibrate(spec, x, rho, graphs_a, graphs_b, calib_seed)

    return TrialRecord(
        trial=trial,
        t=report.t_observed,
        p_value=report.p_value,
        reject=report.p_value < spec.alpha,
        dn=dn,
        k_a=report.k_a,
        k_b=report.k_b,
        seed_key=seeding.describe(trial_ss),
        wall_s=time.perf_counter() - start,
    )


def _calibrate(spec, x, rho, graphs_a, graphs_b, calib_seed) -> TestReport:
    if spec.calibration == "null_reference":
        # the null reference regenerates pairs from Y = X with each side's kernel
        return null_reference_test(
            GraphModel(x, KERNEL_A, rho),
            graphs_a,
            graphs_b,
            spec.cfg,
            spec.n_reps,
            calib_seed,
            model_b=GraphModel(x, KERNEL_B, rho),
        )
    if spec.calibration == "permutation":
        return permutation_test(graphs_a, graphs_b, spec.cfg, spec.n_reps, calib_seed)
    return bootstrap_test(graphs_a, graphs_b, spec.cfg, spec.n_reps, calib_seed)


def _trial_task(args) -> tuple[int, int, "TrialRecord | str"]:
    spec, cell_index, n, eps, rho, trial = args
    try:
        return cell_index, trial, _run_trial(spec, cell_index, n, eps, rho, trial)
    except RankGraphError as exc:
        return cell_index, trial, f"{type(exc).__name__}: {exc}"


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> PowerTable:
    """Run every (n, eps) cell of the experiment and tabulate power.

    ``workers`` > 1 distributes trials over processes; results are identical
    for any value because every trial owns a derived random stream. A trial
    failure marks its whole cell as missing, with the diagnostic preserved.
    """
    cells_meta = []
    tasks = []
    index = 0
    for n in spec.n_list:
        for eps in spec.eps_list:
            rho = spec.rho_for(n)
            cells_meta.append((index, n, eps, rho))
            for trial in range(spec.trials):
                tasks.append((spec, index, n, eps, rho, trial))
            index += 1

    outcomes: dict[int, dict[int, TrialRecord | str]] = {i: {} for i, *_ in cells_meta}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(tasks) // (workers * 8))
            for cell_index, trial, outcome in pool.map(_trial_task, tasks, chunksize=chunk):
                outcomes[cell_index][trial] = outcome
    else:
        for task in tasks:
            cell_index, trial, outcome = _trial_task(task)
            outcomes[cell_index][trial] = outcome

    cells = []
    for index, n, eps, rho in cells_meta:
        by_trial = outcomes[index]
        errors = [v for v in by_trial.values() if isinstance(v, str)]
        records = [by_trial[t] for t in sorted(by_trial) if not isinstance(by_trial[t], str)]
        if errors:
            cells.append(
                CellResult(
                    setting=spec.setting, n=n, eps=eps, rho=rho,
                    power=float("nan"), mean_t=float("nan"), t_quantiles={},
                    mean_dn=float("nan"), trials=spec.trials, n_reps=spec.n_reps,
                    seed=spec.seed, wall_s=sum(r.wall_s for r in records),
                    records=records, error=errors[0],
                )
            )
            continue
        t_vals = np.array([r.t for r in records])
        cells.append(
            CellResult(
                setting=spec.setting,
                n=n,
                eps=eps,
                rho=rho,
                power=sum(r.reject for r in records) / spec.trials,
                mean_t=float(t_vals.mean()),
                t_quantiles={
                    "q05": float(np.quantile(t_vals, 0.05)),
                    "q50": float(np.quantile(t_vals, 0.50)),
                    "q95": float(np.quantile(t_vals, 0.95)),
                },
                mean_dn=float(np.mean([r.dn for r in records])),
                trials=spec.trials,
                n_reps=spec.n_reps,
                seed=spec.seed,
                wall_s=sum(r.wall_s for r in records),
                records=records,
            )
        )
    return PowerTable(cells=cells)


@dataclass(frozen=True)
class GapRow:
    """Discretized-estimate vs truth statistic gap at one graph size."""

    n: int
    median_gap: float
    gaps: tuple[float, ...]


def convergence_diagnostic(
    n_list: Sequence[int],
    trials: int,
    seed: int,
    kernel_a: LinkKernel = KERNEL_A,
    kernel_b: LinkKernel = KERNEL_B,
    setting: str = "M1",
    eps: float = 0.0,
    m: int = 1,
    rho: float = 1.0,
    eta: float | None = 0.05,
    cfg: EstimatorConfig = EstimatorConfig(rank=FixedRank(3)),
) -> list[GapRow]:
    """Median |T(estimated, discretized) - T(true)| per graph size.

    For each n and trial, builds the simulation model, computes the statistic
    on the true probability matrices and on discretized estimates from m
    sampled graphs per side, and records the absolute gap.
    """
    rows = []
    for n_index, n in enumerate(n_list):
        gaps = []
        for trial in range(trials):
            rng = seeding.generator(seed, n_index, trial)
            x = generate_std_normal_positions(int(n), LATENT_DIM, rng)
            y = perturb_m1(x, eps) if setting == "M1" else perturb_m2(x, eps, rng)
            prob_a = build_prob_matrix(GraphModel(x, kernel_a, rho))
            prob_b = build_prob_matrix(GraphModel(y, kernel_b, rho))
            t_true = spearman_statistic(prob_a, prob_b).t
            abar = average_adjacency([sample_graph(prob_a, rng) for _ in range(m)])
            bbar = average_adjacency([sample_graph(prob_b, rng) for _ in range(m)])
            phat = estimate_prob_matrix(abar, cfg)
            qhat = estimate_prob_matrix(bbar, cfg)
            if eta is not None:
                phat = discretize(phat, eta)
                qhat = discretize(qhat, eta)
            t_est = spearman_statistic(phat, qhat).t
            gaps.append(abs(t_est - t_true))
        rows.append(GapRow(n=int(n), median_gap=float(np.median(gaps)), gaps=tuple(gaps)))
    return rows
