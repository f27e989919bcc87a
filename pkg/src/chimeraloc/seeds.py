"""Deterministic seed derivation and random-number streams.

Every stochastic quantity in the package is drawn from a stream whose seed
is derived from a master seed plus structural indices (grid index,
realization index, chain index, ...).  The derivation below is part of the
package contract and must stay stable across versions:

* ``splitmix64`` is the reference SplitMix64 finalizer (Steele et al.).
* ``derive_seed(p0, p1, ...)`` starts from the fixed salt ``0x243F6A8885A308D3``
  (first 64 fractional bits of pi) and folds each part in with
  ``h = splitmix64(h ^ part)``.
* Array-valued draws use NumPy's counter-based Philox bit generator keyed
  with the derived seed; values are produced as ``lo + (hi-lo) * random()``.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_SALT = 0x243F6A8885A308D3


def splitmix64(x: int) -> int:
    """One SplitMix64 step: mix a 64-bit value into a new 64-bit value."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(*parts: int) -> int:
    """Mix any number of integers into one 64-bit seed, order-sensitively."""
    h = _SALT
    for p in parts:
        h = splitmix64(h ^ (int(p) & _MASK64))
    return h


def generator(*parts: int) -> np.random.Generator:
    """Philox-backed Generator keyed by ``derive_seed(*parts)``."""
    return np.random.Generator(np.random.Philox(key=derive_seed(*parts)))
