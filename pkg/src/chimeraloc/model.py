"""Disorder sampling and dense Hamiltonians for the transverse-field Ising model.

Model: H = -delta * sum_k sx_k + sum_<ij> J_ij sz_i sz_j + sum_i h_i sz_i,
with J_ij and h_i drawn i.i.d. uniform on [-J, +J].  The interpolated form
A * H_transverse + B * H_ising is also provided for annealing-schedule work.

Basis convention: bit k of a basis index holds spin k, with bit value 0
meaning sz = +1 (spin up), so the all-up state is index 0 and
sz_k = 1 - 2*bit_k.  Off-diagonal elements sit at Hamming-distance-1
index pairs only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chimera import ChimeraGraph
from .seeds import generator

BASIS_CONVENTION = "bit k of basis index = spin k; bit value 0 = spin up (sz=+1)"

# 2^14 = 16384 is the largest dense dimension we allow by default.
MAX_DENSE_SPINS = 14


@dataclass(frozen=True)
class DisorderRealization:
    """One sampled set {J_ij, h_i}; arrays are aligned with the graph's edge list."""

    j_couplings: np.ndarray
    h_fields: np.ndarray
    disorder_strength: float
    seed: int

    def __post_init__(self):
        self.j_couplings.setflags(write=False)
        self.h_fields.setflags(write=False)
        bound = self.disorder_strength + 1e-12
        if np.any(np.abs(self.j_couplings) > bound) or np.any(
            np.abs(self.h_fields) > bound
        ):
            raise ValueError("disorder values exceed the stated strength")


@dataclass(frozen=True)
class ScheduleWeights:
    """Instantaneous transverse/Ising weights (GHz, h=1 units)."""

    a_value: float
    b_value: float

    def __post_init__(self):
        if self.a_value < 0 or self.b_value < 0:
            raise ValueError("schedule weights must be non-negative")
        if self.a_value == 0 and self.b_value == 0:
            raise ValueError("schedule weights cannot both vanish")


@dataclass(frozen=True)
class DenseHamiltonian:
    """Real symmetric matrix of the model in the computational z-basis."""

    dim: int
    matrix: np.ndarray
    n_spins: int

    basis_convention = BASIS_CONVENTION


def sample_disorder(g: ChimeraGraph, strength: float, seed: int) -> DisorderRealization:
    """Draw J_ij then h_i uniform on [-strength, strength] from one Philox stream.

    Edge couplings are drawn first (in graph edge order), fields second;
    identical (graph, strength, seed) always reproduces the same values.
    """
    if strength < 0:
        raise ValueError(f"disorder strength must be >= 0, got {strength}")
    rng = generator(seed)
    j = strength * (2.0 * rng.random(len(g.edges)) - 1.0)
    h = strength * (2.0 * rng.random(g.n_spins) - 1.0)
    return DisorderRealization(j, h, float(strength), int(seed))


def spin_values(n_spins: int) -> np.ndarray:
    """(2^n, n) array of sz values (+-1) per basis index and spin."""
    idx = np.arange(1 << n_spins, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n_spins)) & 1
    return (1 - 2 * bits).astype(np.float64)


def ising_energies(g: ChimeraGraph, d: DisorderRealization) -> np.ndarray:
    """Classical Ising energy of every basis state (the diagonal of H_ising)."""
    s = spin_values(g.n_spins)
    ei = np.asarray([i for i, _ in g.edges])
    ej = np.asarray([j for _, j in g.edges])
    return (s[:, ei] * s[:, ej]) @ d.j_couplings + s @ d.h_fields


def build_scaled(
    g: ChimeraGraph,
    d: DisorderRealization,
    w: ScheduleWeights,
    max_spins: int = MAX_DENSE_SPINS,
) -> DenseHamiltonian:
    """Dense matrix of A * H_transverse + B * H_ising."""
    n = g.n_spins
    if n > max_spins:
        raise ValueError(
            f"dense build limited to {max_spins} spins ({n} requested); "
            "raise max_spins explicitly if you really want this"
        )
    dim = 1 << n
    m = np.zeros((dim, dim))
    idx = np.arange(dim)
    m[idx, idx] = w.b_value * ising_energies(g, d)
    for k in range(n):
        m[idx, idx ^ (1 << k)] = -w.a_value
    return DenseHamiltonian(dim=dim, matrix=m, n_spins=n)


def build_tfi(
    g: ChimeraGraph,
    d: DisorderRealization,
    delta: float = 1.0,
    max_spins: int = MAX_DENSE_SPINS,
) -> DenseHamiltonian:
    """Dense matrix of the fixed-transverse-field model (delta > 0)."""
    if delta <= 0:
        raise ValueError(f"transverse field delta must be > 0, got {delta}")
    return build_scaled(g, d, ScheduleWeights(delta, 1.0), max_spins=max_spins)


def disorder_to_record(g: ChimeraGraph, d: DisorderRealization) -> dict:
    """JSON-serializable record of one realization, replayable elsewhere."""
    return {
        "n_spins": g.n_spins,
        "edges": [[i, j] for i, j in g.edges],
        "j_couplings": d.j_couplings.tolist(),
        "h_fields": d.h_fields.tolist(),
        "disorder_strength": d.disorder_strength,
        "seed": d.seed,
    }


def disorder_from_record(record: dict) -> tuple[int, tuple[tuple[int, int], ...], DisorderRealization]:
    """Inverse of :func:`disorder_to_record`; returns (n_spins, edges, realization)."""
    edges = tuple((int(i), int(j)) for i, j in record["edges"])
    d = DisorderRealization(
        np.asarray(record["j_couplings"], dtype=float),
        np.asarray(record["h_fields"], dtype=float),
        float(record["disorder_strength"]),
        int(record["seed"]),
    )
    if len(d.j_couplings) != len(edges):
        raise ValueError("coupling array does not match the edge list")
    return int(record["n_spins"]), edges, d
