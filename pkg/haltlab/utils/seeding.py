"""Deterministic seed derivation for sharded Monte Carlo runs."""

from __future__ import annotations

import numpy as np

from ..core.errors import ParameterError

_MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, index: int) -> int:
    """Return the 64-bit seed of sample ``index`` under ``master_seed``.

    The value depends only on the pair, so serial and parallel runs (and
    streams of different length) agree sample by sample.
    """

    if index < 0:
        raise ParameterError("sample index must be nonnegative")
    sequence = np.random.SeedSequence(entropy=int(master_seed) & _MASK64, spawn_key=(int(index),))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & _MASK64)


__all__ = ["derive_seed", "make_rng"]
