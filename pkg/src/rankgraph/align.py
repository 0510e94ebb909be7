"""Similarity-transform Procrustes distance between latent-position sets.

Finds the scale s >= 0, orthogonal matrix W (reflections allowed) and
translation t minimizing ||X - s Y W - 1 t^T||_F in closed form, and reports
the achieved residual. The residual is zero exactly when X is a similarity
transform of Y, which is the null hypothesis of the two-sample test; on
simulated data it doubles as the effect size separating null from
alternative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True, eq=False)
class SimilarityTransform:
    """y -> s * y @ w + t with orthogonal w."""

    s: float
    w: np.ndarray
    t: np.ndarray

    def apply(self, y: np.ndarray) -> np.ndarray:
        return self.s * np.asarray(y) @ self.w + self.t


def procrustes_distance(x: np.ndarray, y: np.ndarray) -> tuple[float, SimilarityTransform]:
    """Minimum Frobenius distance from x to similarity transforms of y.

    Both inputs are n x d arrays over the same vertices. Returns the residual
    together with the optimal transform. If the rows of y are all identical
    (zero centered norm) the transform degenerates to s=0 and the residual is
    the centered norm of x.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 2:
        raise InputError(f"position shapes differ or are not 2-D: {x.shape} vs {y.shape}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise InputError("positions contain non-finite values")
    d = x.shape[1]
    x_mean = x.mean(axis=0)
    y_mean = y.mean(axis=0)
    xc = x - x_mean
    yc = y - y_mean
    x_norm2 = float((xc * xc).sum())
    y_norm2 = float((yc * yc).sum())
    if y_norm2 <= 1e-24 * max(1.0, float((y * y).sum())):
        transform = SimilarityTransform(s=0.0, w=np.eye(d), t=x_mean.copy())
        return float(np.sqrt(x_norm2)), transform

    # maximize trace(W^T Yc^T Xc) over orthogonal W, then scale in closed form
    u, sig, vt = np.linalg.svd(yc.T @ xc)
    w = u @ vt
    trace = float(sig.sum())
    s = trace / y_norm2
    resid2 = x_norm2 - trace * trace / y_norm2
    dn = float(np.sqrt(max(resid2, 0.0)))
    t = x_mean - s * (y_mean @ w)
    return dn, SimilarityTransform(s=s, w=w, t=t)
