"""Latent distance random graphs: kernels, edge probabilities, sampling.

A graph model is a set of latent positions in R^d, a non-increasing link
kernel h mapping pairwise distance to [0, 1], and a sparsity multiplier rho.
Edge probabilities are rho * h(||x_i - x_j||) off the diagonal and zero on it;
graphs are sampled as independent Bernoulli draws of the upper triangle,
mirrored to keep the matrix symmetric and hollow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist
from scipy.special import expit

from .errors import InputError, ParameterError
from .symmat import SymMatrix


class LinkKernel:
    """Base class for link kernels h(r), r >= 0. Subclasses are callable."""

    def __call__(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class LogisticLink(LinkKernel):
    """h(r) = exp(alpha - beta r) / (1 + exp(alpha - beta r)), beta > 0."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ParameterError(f"logistic link requires beta > 0, got {self.beta}")

    def __call__(self, r: np.ndarray) -> np.ndarray:
        return expit(self.alpha - self.beta * np.asarray(r))


@dataclass(frozen=True)
class GaussianLink(LinkKernel):
    """h(r) = gamma * exp(-r^2 / (2 phi)), gamma in (0, 1], phi > 0."""

    gamma: float
    phi: float

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ParameterError(f"gaussian link requires gamma in (0, 1], got {self.gamma}")
        if not self.phi > 0:
            raise ParameterError(f"gaussian link requires phi > 0, got {self.phi}")

    def __call__(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r)
        return self.gamma * np.exp(-(r * r) / (2.0 * self.phi))


@dataclass(frozen=True)
class SqExponentialLink(LinkKernel):
    """h(r) = exp(-r^2 / scale), scale > 0."""

    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ParameterError(f"sq-exponential link requires scale > 0, got {self.scale}")

    def __call__(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r)
        return np.exp(-(r * r) / self.scale)


def _check_positions(positions: np.ndarray) -> np.ndarray:
    positions = np.asarray(positions, dtype=np.float64)
    if positions.ndim != 2:
        raise InputError(f"latent positions must be an n x d array, got ndim={positions.ndim}")
    n, d = positions.shape
    if n < 2 or d < 1:
        raise InputError(f"latent positions need n >= 2 and d >= 1, got {positions.shape}")
    if not np.isfinite(positions).all():
        raise InputError("latent positions contain non-finite values")
    return positions


@dataclass(frozen=True, eq=False)
class GraphModel:
    """Latent positions + link kernel + sparsity rho in (0, 1]."""

    positions: np.ndarray
    kernel: LinkKernel
    rho: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "positions", _check_positions(self.positions))
        if not 0 < self.rho <= 1:
            raise ParameterError(f"sparsity rho must lie in (0, 1], got {self.rho}")

    @property
    def n(self) -> int:
        return self.positions.shape[0]


def build_prob_matrix(model: GraphModel) -> SymMatrix:
    """Edge-probability matrix p_ij = rho * h(||x_i - x_j||), hollow."""
    probs = model.rho * model.kernel(pdist(model.positions))
    return SymMatrix.from_upper(model.n, probs, diag=0.0)


def sample_graph(p: SymMatrix, rng: np.random.Generator) -> SymMatrix:
    """One Bernoulli graph from an edge-probability matrix.

    Each strict-upper entry is an independent Bernoulli(p_ij) draw; the
    result is symmetric, hollow, and exactly {0, 1}-valued. The diagonal of
    ``p`` is ignored.
    """
    probs = p.upper_offdiag()
    if probs.size and (probs.min() < 0.0 or probs.max() > 1.0):
        raise InputError("edge probabilities must lie in [0, 1]")
    edges = (rng.random(probs.size) < probs).astype(np.float64)
    return SymMatrix.from_upper(p.n, edges, diag=0.0)


def generate_std_normal_positions(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. standard-normal points in R^d."""
    if n < 2 or d < 1:
        raise ParameterError(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    return rng.standard_normal((n, d))


def perturb_m1(x: np.ndarray, eps: float) -> np.ndarray:
    """Global rescaling y_i = (1 + eps) x_i; an exact similarity transform."""
    if eps < 0:
        raise ParameterError(f"eps must be >= 0, got {eps}")
    return (1.0 + eps) * _check_positions(x)


def perturb_m2(x: np.ndarray, eps: float, rng: np.random.Generator) -> np.ndarray:
    """Additive Gaussian noise y_i = x_i + z_i with entries N(0, eps).

    ``eps`` is the noise variance; eps=0 returns the input unchanged.
    """
    if eps < 0:
        raise ParameterError(f"eps must be >= 0, got {eps}")
    x = _check_positions(x)
    if eps == 0.0:
        return x.copy()
    return x + np.sqrt(eps) * rng.standard_normal(x.shape)
