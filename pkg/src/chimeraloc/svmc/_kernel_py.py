"""Pure-Python twin of the compiled rotor-sweep kernel.

Slow (interpreted inner loop) but bit-identical to the extension module:
same xoshiro256++ stream, same operation order in every float expression.
Selected automatically when the extension is unavailable, or forced with
CHIMERALOC_PURE_PYTHON=1; also serves as the reference for the
compiled-vs-python equivalence test and the benchmark baseline.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_TWO_PI = 2.0 * math.pi
_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


def backend_name():
    return "python"


class Xoshiro256pp:
    """xoshiro256++ with SplitMix64 seeding; mirrors the C implementation."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        state = seed & _MASK64
        words = []
        for _ in range(4):
            state = (state + 0x9E3779B97F4A7C15) & _MASK64
            z = state
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
            words.append(z ^ (z >> 31))
        self.s0, self.s1, self.s2, self.s3 = words

    def next_raw(self) -> int:
        x = (self.s0 + self.s3) & _MASK64
        result = (((x << 23) | (x >> 41)) + self.s0) & _MASK64
        t = (self.s1 << 17) & _MASK64
        self.s2 ^= self.s0
        self.s3 ^= self.s1
        self.s1 ^= self.s2
        self.s0 ^= self.s3
        self.s2 ^= t
        x = self.s3
        self.s3 = ((x << 45) | (x >> 19)) & _MASK64
        return result

    def unit(self) -> float:
        """Uniform double in [0, 1): top 53 bits scaled by 2^-53."""
        return (self.next_raw() >> 11) * _INV_2_53


def sweep_once(theta, cth, sth, a, b, beta, indptr, neighbors, neighbor_j, field, rng):
    """One Metropolis sweep over all sites, in place, in ascending site order."""
    if a >= b:
        factor = 1.0
    else:
        factor = a / b
    for i in range(len(theta)):
        u = 2.0 * rng.unit() - 1.0
        tnew = theta[i] + math.pi * u * factor
        tnew = math.fmod(tnew, _TWO_PI)
        if tnew < 0.0:
            tnew += _TWO_PI
        cn = math.cos(tnew)
        sn = math.sin(tnew)
        local = field[i]
        for p in range(indptr[i], indptr[i + 1]):
            local = local + neighbor_j[p] * cth[neighbors[p]]
        dv = -a * (sn - sth[i]) + b * (cn - cth[i]) * local
        if dv <= 0.0:
            theta[i] = tnew
            cth[i] = cn
            sth[i] = sn
        elif rng.unit() < math.exp(-beta * dv):
            theta[i] = tnew
            cth[i] = cn
            sth[i] = sn


def run_chain(theta, a_seq, b_seq, beta, indptr, neighbors, neighbor_j, field, seed,
              record=None, record_stride=0):
    """Same contract as the compiled ``run_chain``; ``theta`` updated in place."""
    n = theta.shape[0]
    th = theta.tolist()
    cth = [math.cos(v) for v in th]
    sth = [math.sin(v) for v in th]
    a_list = a_seq.tolist()
    b_list = b_seq.tolist()
    ip = [int(v) for v in indptr]
    nbr = [int(v) for v in neighbors]
    jv = neighbor_j.tolist()
    fld = field.tolist()
    rng = Xoshiro256pp(seed)
    recording = record is not None and record_stride > 0
    max_rows = record.shape[0] if recording else 0
    row = 0
    for t in range(len(a_list)):
        sweep_once(th, cth, sth, a_list[t], b_list[t], beta, ip, nbr, jv, fld, rng)
        if recording and (t + 1) % record_stride == 0 and row < max_rows:
            for i in range(n):
                record[row, i] = th[i]
            row += 1
    for i in range(n):
        theta[i] = th[i]
