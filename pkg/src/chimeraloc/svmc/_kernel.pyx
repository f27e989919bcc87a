# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Metropolis kernel for planar-rotor annealing chains.

One chain = a sequence of sweeps over all rotors in ascending site order.
Per site: propose theta' = theta + pi * u * min(1, A/B) with u uniform on
[-1, 1], wrap into [0, 2pi), and accept with the Metropolis probability
for the local potential change.  The in-chain RNG is xoshiro256++ seeded
through the sequential SplitMix64 generator; the pure-Python twin in
``_kernel_py`` follows the exact same operation order, so both backends
produce bit-identical trajectories (the extension is compiled with
-ffp-contract=off to keep that true).
"""

from libc.math cimport cos, sin, exp, fmod, M_PI
from libc.stdlib cimport malloc, free

ctypedef unsigned long long u64

cdef double TWO_PI = 2.0 * M_PI
cdef double INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


cdef inline u64 _rotl(u64 x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef inline u64 _splitmix_next(u64* state) nogil:
    state[0] = state[0] + <u64>0x9E3779B97F4A7C15
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef struct Xoshiro:
    u64 s0
    u64 s1
    u64 s2
    u64 s3


cdef inline void _xo_seed(Xoshiro* r, u64 seed) nogil:
    cdef u64 sm = seed
    r.s0 = _splitmix_next(&sm)
    r.s1 = _splitmix_next(&sm)
    r.s2 = _splitmix_next(&sm)
    r.s3 = _splitmix_next(&sm)


cdef inline u64 _xo_next(Xoshiro* r) nogil:
    cdef u64 result = _rotl(r.s0 + r.s3, 23) + r.s0
    cdef u64 t = r.s1 << 17
    r.s2 ^= r.s0
    r.s3 ^= r.s1
    r.s1 ^= r.s2
    r.s0 ^= r.s3
    r.s2 ^= t
    r.s3 = _rotl(r.s3, 45)
    return result


cdef inline double _xo_unit(Xoshiro* r) nogil:
    return <double>(_xo_next(r) >> 11) * INV_2_53


def backend_name():
    return "compiled"


def run_chain(double[::1] theta,
              const double[::1] a_seq,
              const double[::1] b_seq,
              double beta,
              const int[::1] indptr,
              const int[::1] neighbors,
              const double[::1] neighbor_j,
              const double[::1] field,
              unsigned long long seed,
              double[:, ::1] record=None,
              long record_stride=0):
    """Run len(a_seq) sweeps in place on ``theta``.

    ``indptr``/``neighbors``/``neighbor_j`` hold the coupling lists in CSR
    layout; ``field`` is the per-site longitudinal coefficient.  When
    ``record_stride`` > 0, the angles after every ``record_stride``-th
    sweep are copied into consecutive rows of ``record``.
    """
    cdef Py_ssize_t n = theta.shape[0]
    cdef Py_ssize_t n_sweeps = a_seq.shape[0]
    cdef Py_ssize_t max_rows = 0 if record is None else record.shape[0]
    cdef bint recording = record is not None and record_stride > 0

    cdef double* cth = <double*> malloc(n * sizeof(double))
    cdef double* sth = <double*> malloc(n * sizeof(double))
    if cth == NULL or sth == NULL:
        free(cth)
        free(sth)
        raise MemoryError()

    cdef Xoshiro rng
    _xo_seed(&rng, seed)

    cdef Py_ssize_t t, i, p, row = 0
    cdef double a, b, factor, u, tnew, cn, sn, local, dv
    with nogil:
        for i in range(n):
            cth[i] = cos(theta[i])
            sth[i] = sin(theta[i])
        for t in range(n_sweeps):
            a = a_seq[t]
            b = b_seq[t]
            if a >= b:
                factor = 1.0
            else:
                factor = a / b
            for i in range(n):
                u = 2.0 * _xo_unit(&rng) - 1.0
                tnew = theta[i] + M_PI * u * factor
                tnew = fmod(tnew, TWO_PI)
                if tnew < 0.0:
                    tnew += TWO_PI
                cn = cos(tnew)
                sn = sin(tnew)
                local = field[i]
                for p in range(indptr[i], indptr[i + 1]):
                    local = local + neighbor_j[p] * cth[neighbors[p]]
                dv = -a * (sn - sth[i]) + b * (cn - cth[i]) * local
                if dv <= 0.0:
                    theta[i] = tnew
                    cth[i] = cn
                    sth[i] = sn
                elif _xo_unit(&rng) < exp(-beta * dv):
                    theta[i] = tnew
                    cth[i] = cn
                    sth[i] = sn
            if recording and (t + 1) % record_stride == 0 and row < max_rows:
                for i in range(n):
                    record[row, i] = theta[i]
                row += 1
    free(cth)
    free(sth)
