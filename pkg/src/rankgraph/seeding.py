"""Deterministic random-stream derivation.

Every stochastic routine in the package draws from a generator keyed by an
integer seed plus a structural path (cell index, trial index, replication
index, ...). Results are therefore independent of scheduling: a replication
gets the same stream whether it runs first, last, or on another worker.
"""

from __future__ import annotations

import numpy as np


def root_sequence(seed: int | np.random.SeedSequence) -> np.random.SeedSequence:
    """Normalize an integer seed or an existing sequence to a SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def child_sequence(seed: int | np.random.SeedSequence, *key: int) -> np.random.SeedSequence:
    """Derive the child stream at position ``key`` below ``seed``.

    Children are keyed positionally (spawn keys), so two calls with the same
    seed and key always yield the same stream, and distinct keys yield
    independent streams.
    """
    base = root_sequence(seed)
    return np.random.SeedSequence(
        entropy=base.entropy,
        spawn_key=tuple(base.spawn_key) + tuple(int(k) for k in key),
    )


def generator(seed: int | np.random.SeedSequence, *key: int) -> np.random.Generator:
    """A fresh PCG64 generator for the derived stream at ``key``."""
    return np.random.default_rng(child_sequence(seed, *key))


def describe(seq: np.random.SeedSequence) -> str:
    """Replay key for a derived stream, e.g. ``20240817/3.17``."""
    path = ".".join(str(k) for k in seq.spawn_key)
    return f"{seq.entropy}/{path}" if path else str(seq.entropy)
