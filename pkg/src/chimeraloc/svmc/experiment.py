"""Magnetization-vs-disorder-strength experiments for rotor annealing runs.

A scenario fixes an instance family (random couplings/fields at J = 1, or
a uniform-J cell with no fields), an initial classical state, and a grid
of target B/A ratios.  Each grid point inverts the schedule ratio to a
pause location, runs ``chains`` independent protocol chains per
realization, and reports the disorder-averaged magnetization with a 95%
bootstrap interval over the per-realization means.

Disordered realizations are drawn once per realization index (the same
instances are reused across the whole grid, as one would rerun the same
programmed problems at every pause point); uniform-family "realizations"
are independent chain groups of the single fixed instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..ensemble import BootstrapEstimate, bootstrap
from ..model import sample_disorder
from ..parallel import ordered_map
from ..seeds import derive_seed
from .core import (
    DEFAULT_BETA,
    DEFAULT_PAUSE_SWEEPS,
    DEFAULT_RAMP_RATE,
    SvmcConfig,
    instance_from_disorder,
    run_protocol,
    uniform_instance,
)
from .schedule import default_schedule, load_schedule_file, ratio_to_s
from ..ensemble import _graph

FAMILIES = ("disordered", "uniform")

_INSTANCE_SALT = 0xD150
_RUN_SALT = 0x2C4A
_BOOT_SALT = 0xB007


@dataclass(frozen=True)
class Scenario:
    name: str
    family: str
    initial_state: tuple[int, ...]
    ba_grid: tuple[float, ...]
    realizations: int
    chains: int
    seed: int
    pause_sweeps: int = DEFAULT_PAUSE_SWEEPS
    beta: float = DEFAULT_BETA
    cells: int = 1
    k: int = 4
    uniform_j: float | None = None
    disorder_strength: float = 1.0
    ramp_rate: int = DEFAULT_RAMP_RATE
    verbatim_field_term: bool = False
    bootstrap_resamples: int = 1000
    schedule_path: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown instance family {self.family!r}; known: {FAMILIES}")
        if self.family == "uniform" and self.uniform_j is None:
            raise ValueError("uniform family needs uniform_j")
        grid = np.asarray(self.ba_grid, dtype=float)
        if grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
            raise ValueError("B/A grid must be positive and strictly increasing")
        if self.realizations < 2:
            raise ValueError("need at least 2 realizations")
        if self.chains < 1:
            raise ValueError("need at least 1 chain")
        n = 2 * self.k * self.cells
        if len(self.initial_state) != n:
            raise ValueError(f"initial state must have {n} entries")
        if any(v not in (-1, 1) for v in self.initial_state):
            raise ValueError("initial state entries must be +-1")

    def resolved(self) -> dict:
        return {
            "name": self.name,
            "family": self.family,
            "initial_state": list(self.initial_state),
            "ba_grid": list(self.ba_grid),
            "realizations": self.realizations,
            "chains": self.chains,
            "seed": self.seed,
            "pause_sweeps": self.pause_sweeps,
            "beta": self.beta,
            "cells": self.cells,
            "k": self.k,
            "uniform_j": self.uniform_j,
            "disorder_strength": self.disorder_strength,
            "ramp_rate": self.ramp_rate,
            "verbatim_field_term": self.verbatim_field_term,
            "bootstrap_resamples": self.bootstrap_resamples,
            "schedule_path": self.schedule_path,
        }


@dataclass(frozen=True)
class MagnetizationCurve:
    name: str
    target_ratio: np.ndarray
    achieved_ratio: np.ndarray
    s_pause: np.ndarray
    mean_mz: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    realizations: int
    chains: int


@lru_cache(maxsize=8)
def _schedule_for(path: str | None):
    return default_schedule() if path is None else load_schedule_file(path)


def _chain_group_task(task):
    """One (grid point, realization) -> mean magnetization over its chains."""
    sc: Scenario
    sc, s_pause, ri, run_seed = task
    g = _graph(sc.cells, sc.k)
    if sc.family == "disordered":
        d = sample_disorder(
            g, sc.disorder_strength, derive_seed(sc.seed, _INSTANCE_SALT, ri)
        )
        instance = instance_from_disorder(g, d, verbatim_field_term=sc.verbatim_field_term)
    else:
        instance = uniform_instance(g, sc.uniform_j)
    cfg = SvmcConfig(
        instance=instance,
        initial_state=sc.initial_state,
        s_pause=s_pause,
        pause_sweeps=sc.pause_sweeps,
        beta=sc.beta,
        chains=sc.chains,
        seed=run_seed,
        ramp_rate=sc.ramp_rate,
        schedule=_schedule_for(sc.schedule_path),
    )
    records = run_protocol(cfg)
    return float(np.mean([r.m_z for r in records]))


def magnetization_experiment(sc: Scenario, workers: int | None = None) -> MagnetizationCurve:
    """Disorder-averaged final magnetization across the scenario's B/A grid."""
    schedule = _schedule_for(sc.schedule_path)
    s_pauses = [ratio_to_s(schedule, target) for target in sc.ba_grid]
    tasks = []
    for gi, s_pause in enumerate(s_pauses):
        for ri in range(sc.realizations):
            tasks.append((sc, s_pause, ri, derive_seed(sc.seed, _RUN_SALT, gi, ri)))
    results = ordered_map(_chain_group_task, tasks, workers=workers)

    n_grid = len(sc.ba_grid)
    mean = np.empty(n_grid)
    lo = np.empty(n_grid)
    hi = np.empty(n_grid)
    for gi in range(n_grid):
        means = np.asarray(results[gi * sc.realizations : (gi + 1) * sc.realizations])
        est: BootstrapEstimate = bootstrap(
            means,
            resamples=sc.bootstrap_resamples,
            seed=derive_seed(sc.seed, _BOOT_SALT, gi),
        )
        mean[gi], lo[gi], hi[gi] = est.mean, est.ci_low, est.ci_high
    return MagnetizationCurve(
        name=sc.name,
        target_ratio=np.asarray(sc.ba_grid, dtype=float),
        achieved_ratio=np.asarray([schedule.ratio_of(s) for s in s_pauses]),
        s_pause=np.asarray(s_pauses),
        mean_mz=mean,
        ci_low=lo,
        ci_high=hi,
        realizations=sc.realizations,
        chains=sc.chains,
    )


def onset_ratio(curve: MagnetizationCurve) -> float | None:
    """First grid ratio from which the CI excludes zero at every later point.

    None when the curve never departs from zero persistently.
    """
    excludes = (curve.ci_low > 0.0) | (curve.ci_high < 0.0)
    idx = None
    for i in range(len(excludes) - 1, -1, -1):
        if excludes[i]:
            idx = i
        else:
            break
    return None if idx is None else float(curve.target_ratio[idx])
