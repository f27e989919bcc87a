"""Planar-rotor Monte Carlo emulation of the reverse-anneal pause-quench run.

Each spin becomes a 2-d rotor with angle theta in [0, 2pi) under the
potential

    V(s, theta) = -A(s) sum_i sin(theta_i)
                  + B(s) (sum_i f_i cos(theta_i)
                          + sum_<ij> J_ij cos(theta_i) cos(theta_j)),

where f_i is the longitudinal field h_i by default; the
``verbatim_field_term`` switch sets f_i = 1 instead, reproducing the bare
published update rule (which omits the h_i coefficient) literally.

A protocol run starts from a classical state at s = 1 (theta 0 for spin
+1, pi for -1), ramps s linearly to the pause point over
floor(ramp_rate * (1 - s_pause)) sweeps, holds for ``pause_sweeps``
sweeps, ramps back with the same sweep-count rule, and projects each
rotor onto sign(cos theta), with cos theta = 0 mapped to +1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..chimera import ChimeraGraph
from ..model import DisorderRealization
from ..seeds import derive_seed
from . import _backend
from ._kernel_py import Xoshiro256pp, sweep_once
from .schedule import AnnealSchedule, default_schedule

DEFAULT_RAMP_RATE = 2000
DEFAULT_PAUSE_SWEEPS = 200_000

# Temperature 1.57146 GHz read in the schedule's h=1 energy units; the
# hbar-units reading of the same temperature is 2*pi times smaller, i.e.
# beta larger by 2*pi -- exposed here for convenience.
DEFAULT_BETA = 1.0 / 1.57146
BETA_HBAR_CONVENTION = 2.0 * math.pi / 1.57146

_CHAIN_SALT = 0x5EED


class DegenerateRampWarning(UserWarning):
    """Pause point so late that the ramp rounds down to zero sweeps."""


@dataclass(frozen=True)
class SvmcInstance:
    """Coupling data the rotor dynamics runs on."""

    n_spins: int
    edges: tuple[tuple[int, int], ...]
    j_couplings: np.ndarray
    h_fields: np.ndarray
    verbatim_field_term: bool = False

    def __post_init__(self):
        self.j_couplings.setflags(write=False)
        self.h_fields.setflags(write=False)
        if len(self.j_couplings) != len(self.edges):
            raise ValueError("one coupling per edge required")
        if len(self.h_fields) != self.n_spins:
            raise ValueError("one field per spin required")

    @property
    def field_coefficients(self) -> np.ndarray:
        if self.verbatim_field_term:
            return np.ones(self.n_spins)
        return self.h_fields


def instance_from_disorder(
    g: ChimeraGraph, d: DisorderRealization, verbatim_field_term: bool = False
) -> SvmcInstance:
    return SvmcInstance(
        n_spins=g.n_spins,
        edges=g.edges,
        j_couplings=np.asarray(d.j_couplings, dtype=float),
        h_fields=np.asarray(d.h_fields, dtype=float),
        verbatim_field_term=verbatim_field_term,
    )


def uniform_instance(g: ChimeraGraph, j: float) -> SvmcInstance:
    """Uniform coupling strength on every edge, no longitudinal fields."""
    return SvmcInstance(
        n_spins=g.n_spins,
        edges=g.edges,
        j_couplings=np.full(len(g.edges), float(j)),
        h_fields=np.zeros(g.n_spins),
    )


@dataclass(frozen=True)
class RotorState:
    angles: np.ndarray  # theta_i in [0, 2pi)
    s: float

    def __post_init__(self):
        if np.any(self.angles < 0.0) or np.any(self.angles >= 2.0 * math.pi):
            raise ValueError("angles must lie in [0, 2pi)")


@dataclass(frozen=True)
class SvmcConfig:
    instance: SvmcInstance
    initial_state: tuple[int, ...]
    s_pause: float
    pause_sweeps: int
    beta: float = DEFAULT_BETA
    chains: int = 1
    seed: int = 0
    ramp_rate: int = DEFAULT_RAMP_RATE
    schedule: AnnealSchedule = field(default_factory=default_schedule)

    def __post_init__(self):
        if not 0.0 < self.s_pause < 1.0:
            raise ValueError(f"pause location must be in (0, 1), got {self.s_pause}")
        if self.pause_sweeps < 1:
            raise ValueError("pause_sweeps must be >= 1")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.chains < 1:
            raise ValueError("chains must be >= 1")
        if len(self.initial_state) != self.instance.n_spins:
            raise ValueError("initial state length does not match the instance")
        if any(v not in (-1, 1) for v in self.initial_state):
            raise ValueError("initial state entries must be +-1")


@dataclass(frozen=True)
class MagnetizationRecord:
    spins: np.ndarray  # projected +-1 per site
    m_z: int
    chain_index: int
    seed: int


def _csr(instance: SvmcInstance):
    """Neighbor lists in CSR layout for the sweep kernels."""
    adj: list[list[tuple[int, float]]] = [[] for _ in range(instance.n_spins)]
    for (i, j), jv in zip(instance.edges, instance.j_couplings):
        adj[i].append((j, float(jv)))
        adj[j].append((i, float(jv)))
    indptr = np.zeros(instance.n_spins + 1, dtype=np.int32)
    nbr: list[int] = []
    jv_out: list[float] = []
    for i, lst in enumerate(adj):
        for j, jv in lst:
            nbr.append(j)
            jv_out.append(jv)
        indptr[i + 1] = len(nbr)
    return (
        indptr,
        np.asarray(nbr, dtype=np.int32),
        np.asarray(jv_out, dtype=float),
        np.asarray(instance.field_coefficients, dtype=float),
    )


def potential(s: float, state: RotorState, instance: SvmcInstance,
              schedule: AnnealSchedule | None = None) -> float:
    """Rotor potential V(s, theta) for the full configuration."""
    schedule = schedule or default_schedule()
    a = float(schedule.a_of(s))
    b = float(schedule.b_of(s))
    cth = np.cos(state.angles)
    ei = np.asarray([i for i, _ in instance.edges], dtype=int)
    ej = np.asarray([j for _, j in instance.edges], dtype=int)
    ising = instance.field_coefficients @ cth
    if len(instance.edges):
        ising += instance.j_couplings @ (cth[ei] * cth[ej])
    return float(-a * np.sin(state.angles).sum() + b * ising)


def potential_change(state: RotorState, site: int, new_angle: float, s: float,
                     instance: SvmcInstance, schedule: AnnealSchedule | None = None) -> float:
    """Single-site potential change, computed locally from the site's neighbors."""
    schedule = schedule or default_schedule()
    a = float(schedule.a_of(s))
    b = float(schedule.b_of(s))
    th = state.angles
    local = float(instance.field_coefficients[site])
    for (i, j), jv in zip(instance.edges, instance.j_couplings):
        if i == site:
            local += jv * math.cos(th[j])
        elif j == site:
            local += jv * math.cos(th[i])
    return -a * (math.sin(new_angle) - math.sin(th[site])) + b * (
        math.cos(new_angle) - math.cos(th[site])
    ) * local


def propose_angle(theta_i: float, s: float, rng: Xoshiro256pp,
                  schedule: AnnealSchedule | None = None) -> float:
    """Schedule-narrowed symmetric proposal, wrapped into [0, 2pi)."""
    schedule = schedule or default_schedule()
    a = float(schedule.a_of(s))
    b = float(schedule.b_of(s))
    factor = 1.0 if a >= b else a / b
    u = 2.0 * rng.unit() - 1.0
    tnew = math.fmod(theta_i + math.pi * u * factor, 2.0 * math.pi)
    if tnew < 0.0:
        tnew += 2.0 * math.pi
    return tnew


def sweep(state: RotorState, s: float, beta: float, instance: SvmcInstance,
          rng: Xoshiro256pp, schedule: AnnealSchedule | None = None) -> RotorState:
    """One Metropolis sweep (every rotor once, ascending site order)."""
    schedule = schedule or default_schedule()
    indptr, nbr, jv, fld = _csr(instance)
    th = state.angles.tolist()
    cth = [math.cos(v) for v in th]
    sth = [math.sin(v) for v in th]
    sweep_once(
        th, cth, sth,
        float(schedule.a_of(s)), float(schedule.b_of(s)),
        beta, indptr.tolist(), nbr.tolist(), jv.tolist(), fld.tolist(), rng,
    )
    return RotorState(angles=np.asarray(th), s=s)


def ramp_sweep_count(s_pause: float, ramp_rate: int = DEFAULT_RAMP_RATE) -> int:
    return int(math.floor(ramp_rate * (1.0 - s_pause)))


def protocol_sequences(schedule: AnnealSchedule, s_pause: float, pause_sweeps: int,
                       ramp_rate: int = DEFAULT_RAMP_RATE):
    """Per-sweep (A, B) values for reverse ramp, pause, forward ramp.

    The ramp steps s linearly, one step per sweep, landing exactly on the
    endpoint of each leg; a zero-length ramp (very late pause point) emits
    DegenerateRampWarning and contributes no sweeps.
    """
    n_ramp = ramp_sweep_count(s_pause, ramp_rate)
    if n_ramp == 0:
        warnings.warn(
            f"pause point {s_pause} gives a zero-sweep ramp; only the pause runs",
            DegenerateRampWarning,
            stacklevel=2,
        )
        reverse_s = np.empty(0)
        forward_s = np.empty(0)
    else:
        steps = np.arange(1, n_ramp + 1)
        reverse_s = 1.0 + steps * ((s_pause - 1.0) / n_ramp)
        forward_s = s_pause + steps * ((1.0 - s_pause) / n_ramp)
    s_all = np.concatenate([reverse_s, np.full(pause_sweeps, s_pause), forward_s])
    return schedule.a_of(s_all), schedule.b_of(s_all), n_ramp


def initial_angles(initial_state) -> np.ndarray:
    return np.where(np.asarray(initial_state) > 0, 0.0, math.pi)


def project(angles: np.ndarray) -> np.ndarray:
    """Project rotors onto +-1 by the sign of cos(theta); ties go to +1."""
    return np.where(np.cos(angles) >= 0.0, 1, -1).astype(np.int8)


def run_protocol(cfg: SvmcConfig) -> list[MagnetizationRecord]:
    """Run the full reverse-pause-forward protocol for every chain.

    Chain c uses the derived seed ``derive_seed(cfg.seed, _CHAIN_SALT, c)``;
    records come back in chain order, so the output is reproducible
    regardless of how callers schedule the work.
    """
    a_seq, b_seq, _ = protocol_sequences(
        cfg.schedule, cfg.s_pause, cfg.pause_sweeps, cfg.ramp_rate
    )
    indptr, nbr, jv, fld = _csr(cfg.instance)
    records = []
    for c in range(cfg.chains):
        chain_seed = derive_seed(cfg.seed, _CHAIN_SALT, c)
        theta = initial_angles(cfg.initial_state)
        _backend.run_chain(theta, a_seq, b_seq, cfg.beta, indptr, nbr, jv, fld, chain_seed)
        spins = project(theta)
        records.append(
            MagnetizationRecord(
                spins=spins, m_z=int(spins.sum()), chain_index=c, seed=chain_seed
            )
        )
    return records
