"""Disorder-ensemble orchestration: entropy scans, variance-peak critical
points, mobility-edge diagrams, gap-ratio curves, and bootstrap intervals.

Realization seeds derive as ``derive_seed(master_seed, grid_index,
realization_index)``, so ensembles are reproducible point-by-point and can
be distributed across workers in any order; aggregation always happens in
realization-index order, which keeps result files bit-identical regardless
of the worker count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .chimera import Bipartition, ChimeraGraph, bipartition_from_a, named_bipartition, tile_horizontal
from .entanglement import block_entropies, entropy, reduce_state
from .eigen import EigensolverError, eigenvalues_only, middle_index
from .levelstats import DEFAULT_DEGENERACY_TOL, energy_density, gap_ratios
from .model import build_tfi, sample_disorder
from .parallel import ordered_map, single_thread_blas
from .seeds import derive_seed, generator

# Fraction of failed realizations (eigensolver non-convergence) above which
# a scan aborts instead of silently excluding data.
FAILURE_BUDGET = 0.01

_BOOTSTRAP_SALT = 0xB007


@dataclass(frozen=True)
class GraphSpec:
    """How to build the coupling graph (horizontally tiled K_{k,k} cells)."""

    cells: int = 1
    k: int = 4

    def build(self) -> ChimeraGraph:
        return _graph(self.cells, self.k)


@lru_cache(maxsize=None)
def _graph(cells: int, k: int) -> ChimeraGraph:
    return tile_horizontal(cells, k)


@dataclass(frozen=True)
class ScanConfig:
    """One ensemble scan over a disorder-strength grid (transverse field = 1)."""

    graph: GraphSpec
    grid: tuple[float, ...]
    realizations: int
    master_seed: int
    eigenstates: str | tuple[int, ...] = "middle"
    partition: str | tuple[int, ...] = "up-down"
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.size == 0 or np.any(g <= 0) or np.any(np.diff(g) <= 0):
            raise ValueError("grid must be positive and strictly increasing")
        if self.realizations < 2:
            raise ValueError("need at least 2 realizations per grid point")
        if isinstance(self.eigenstates, str):
            if self.eigenstates not in ("middle", "all"):
                raise ValueError("eigenstate selector must be 'middle', 'all', or indices")
        elif not self.eigenstates:
            raise ValueError("explicit eigenstate selection must be non-empty")

    def resolve_partition(self) -> Bipartition:
        g = self.graph.build()
        if isinstance(self.partition, str):
            return named_bipartition(g, self.partition)
        return bipartition_from_a(self.partition, g.n_spins)

    def resolved(self) -> dict:
        return {
            "graph": {"cells": self.graph.cells, "k": self.graph.k},
            "grid": list(self.grid),
            "realizations": self.realizations,
            "master_seed": self.master_seed,
            "eigenstates": self.eigenstates
            if isinstance(self.eigenstates, str)
            else list(self.eigenstates),
            "partition": self.partition
            if isinstance(self.partition, str)
            else list(self.partition),
            "degeneracy_tol": self.degeneracy_tol,
        }


@dataclass(frozen=True)
class EntropyScanResult:
    grid: np.ndarray
    mean: np.ndarray
    variance: np.ndarray  # population variance <S^2> - <S>^2
    std_error: np.ndarray
    counts: np.ndarray
    failures: np.ndarray


@dataclass(frozen=True)
class CriticalPoint:
    value: float
    grid_value: float
    index: int
    boundary_warning: bool


@dataclass(frozen=True)
class MobilityEdgePoint:
    eigenstate_index: int
    critical_disorder: float
    critical_disorder_grid: float
    boundary_warning: bool
    mean_energy_density: float
    energy_density_error: float


@dataclass(frozen=True)
class MobilityEdgeResult:
    grid: np.ndarray
    points: tuple[MobilityEdgePoint, ...]
    failures: int


@dataclass(frozen=True)
class RScanResult:
    grid: np.ndarray
    mean_r: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    counts: np.ndarray
    dropped_pairs: np.ndarray
    pooled: bool


@dataclass(frozen=True)
class BootstrapEstimate:
    mean: float
    ci_low: float
    ci_high: float
    resamples: int


# ---------------------------------------------------------------------------
# workers (module-level so they can cross process boundaries)

def _middle_entropy_task(task):
    """One realization -> block entropy of the mid-spectrum eigenstate."""
    from scipy.linalg import LinAlgError
    from scipy.linalg import eigh as scipy_eigh

    cells, k, strength, seed, part_a = task
    g = _graph(cells, k)
    with single_thread_blas():
        d = sample_disorder(g, strength, seed)
        h = build_tfi(g, d)
        mid = middle_index(h.dim)
        try:
            _, vec = scipy_eigh(
                h.matrix,
                subset_by_index=(mid, mid),
                driver="evr",
                overwrite_a=True,
                check_finite=False,
            )
        except LinAlgError:
            return ("fail", seed)
        p = bipartition_from_a(part_a, g.n_spins)
        return ("ok", entropy(reduce_state(vec[:, 0], p)))


def _all_states_task(task):
    """One realization -> (block entropies, energy densities) of all eigenstates."""
    cells, k, strength, seed, part_a = task
    g = _graph(cells, k)
    with single_thread_blas():
        d = sample_disorder(g, strength, seed)
        h = build_tfi(g, d)
        try:
            values, vectors = np.linalg.eigh(h.matrix)
        except np.linalg.LinAlgError:
            return ("fail", seed)
        p = bipartition_from_a(part_a, g.n_spins)
        ent = block_entropies(vectors, p)
        eps = energy_density(values).densities
        return ("ok", (ent, eps))


def _gap_ratio_task(task):
    """One realization -> (mean_r, pair count, dropped pairs)."""
    cells, k, strength, seed, tol = task
    g = _graph(cells, k)
    with single_thread_blas():
        d = sample_disorder(g, strength, seed)
        h = build_tfi(g, d)
        try:
            values = eigenvalues_only(h, context=seed)
        except EigensolverError:
            return ("fail", seed)
        stats = gap_ratios(values, degeneracy_tol=tol)
        return ("ok", (stats.mean_r, stats.count, stats.dropped_degenerate))


def _check_failure_budget(n_failed: int, n_total: int):
    if n_failed > FAILURE_BUDGET * n_total:
        raise RuntimeError(
            f"{n_failed}/{n_total} realizations failed to diagonalize "
            f"(budget {FAILURE_BUDGET:.0%}); aborting scan"
        )


# ---------------------------------------------------------------------------
# scans

def _scan_tasks(cfg: ScanConfig, extra=()):
    tasks = []
    for gi, strength in enumerate(cfg.grid):
        for ri in range(cfg.realizations):
            seed = derive_seed(cfg.master_seed, gi, ri)
            tasks.append((cfg.graph.cells, cfg.graph.k, strength, seed) + tuple(extra))
    return tasks


def entropy_scan(cfg: ScanConfig, workers: int | None = None) -> EntropyScanResult:
    """Mean/variance block entropy of the selected eigenstates per grid point."""
    part_a = tuple(cfg.resolve_partition().part_a)
    tasks = _scan_tasks(cfg, extra=(part_a,))
    if cfg.eigenstates == "middle":
        results = ordered_map(_middle_entropy_task, tasks, workers=workers)
    else:
        results = ordered_map(_all_states_task, tasks, workers=workers)

    n_grid = len(cfg.grid)
    samples: list[list[float]] = [[] for _ in range(n_grid)]
    failures = np.zeros(n_grid, dtype=int)
    for t_index, res in enumerate(results):
        gi = t_index // cfg.realizations
        if res[0] == "fail":
            failures[gi] += 1
            continue
        if cfg.eigenstates == "middle":
            samples[gi].append(res[1])
        else:
            ent, _ = res[1]
            if cfg.eigenstates == "all":
                samples[gi].extend(ent.tolist())
            else:
                samples[gi].extend(ent[list(cfg.eigenstates)].tolist())
    _check_failure_budget(int(failures.sum()), len(tasks))

    mean = np.empty(n_grid)
    var = np.empty(n_grid)
    se = np.empty(n_grid)
    counts = np.empty(n_grid, dtype=int)
    for gi in range(n_grid):
        vals = np.asarray(samples[gi])
        if vals.size < 2:
            raise RuntimeError(f"grid point {cfg.grid[gi]} has fewer than 2 samples")
        mean[gi] = vals.mean()
        var[gi] = np.mean(vals**2) - mean[gi] ** 2
        se[gi] = vals.std(ddof=1) / np.sqrt(vals.size)
        counts[gi] = vals.size
    return EntropyScanResult(
        grid=np.asarray(cfg.grid, dtype=float),
        mean=mean,
        variance=np.maximum(var, 0.0),
        std_error=se,
        counts=counts,
        failures=failures,
    )


def _parabolic_vertex(x: np.ndarray, y: np.ndarray) -> float | None:
    """Vertex abscissa of the parabola through three points, if it is a
    maximum lying inside the bracketing interval."""
    c2, c1, _ = np.polyfit(x, y, 2)
    if c2 >= 0:
        return None
    vertex = -c1 / (2.0 * c2)
    if not x[0] <= vertex <= x[2]:
        return None
    return float(vertex)


def critical_point(result: EntropyScanResult, refine: bool = True) -> CriticalPoint:
    """Grid point maximizing the entropy variance, optionally refined by a
    3-point parabola around the discrete argmax."""
    idx = int(np.argmax(result.variance))
    grid_value = float(result.grid[idx])
    boundary = idx == 0 or idx == len(result.grid) - 1
    value = grid_value
    if refine and not boundary and len(result.grid) >= 3:
        vertex = _parabolic_vertex(
            result.grid[idx - 1 : idx + 2], result.variance[idx - 1 : idx + 2]
        )
        if vertex is not None:
            value = vertex
    return CriticalPoint(
        value=value, grid_value=grid_value, index=idx, boundary_warning=boundary
    )


def mobility_edge(cfg: ScanConfig, workers: int | None = None) -> MobilityEdgeResult:
    """Per-eigenstate critical disorder vs mean energy density.

    For each eigenstate index n: the critical disorder is the variance peak
    of its block entropy over the grid; the mean energy density and its
    standard error are taken at that peak's grid point (no interpolation
    across grid points).
    """
    if cfg.eigenstates != "all":
        raise ValueError("mobility_edge requires the all-eigenstate selector")
    part_a = tuple(cfg.resolve_partition().part_a)
    tasks = _scan_tasks(cfg, extra=(part_a,))
    results = ordered_map(_all_states_task, tasks, workers=workers)

    n_grid = len(cfg.grid)
    dim = 1 << cfg.graph.build().n_spins
    sum_s = np.zeros((n_grid, dim))
    sum_s2 = np.zeros((n_grid, dim))
    sum_e = np.zeros((n_grid, dim))
    sum_e2 = np.zeros((n_grid, dim))
    counts = np.zeros(n_grid, dtype=int)
    failures = 0
    for t_index, res in enumerate(results):
        gi = t_index // cfg.realizations
        if res[0] == "fail":
            failures += 1
            continue
        ent, eps = res[1]
        sum_s[gi] += ent
        sum_s2[gi] += ent**2
        sum_e[gi] += eps
        sum_e2[gi] += eps**2
        counts[gi] += 1
    _check_failure_budget(failures, len(tasks))

    grid = np.asarray(cfg.grid, dtype=float)
    points = []
    for n in range(dim):
        mean_s = sum_s[:, n] / counts
        var_s = sum_s2[:, n] / counts - mean_s**2
        idx = int(np.argmax(var_s))
        boundary = idx == 0 or idx == n_grid - 1
        cp = float(grid[idx])
        if not boundary and n_grid >= 3:
            vertex = _parabolic_vertex(grid[idx - 1 : idx + 2], var_s[idx - 1 : idx + 2])
            if vertex is not None:
                cp = vertex
        c = counts[idx]
        mean_e = sum_e[idx, n] / c
        var_e = max(sum_e2[idx, n] / c - mean_e**2, 0.0)
        err_e = np.sqrt(var_e * c / (c - 1)) / np.sqrt(c)
        points.append(
            MobilityEdgePoint(
                eigenstate_index=n,
                critical_disorder=cp,
                critical_disorder_grid=float(grid[idx]),
                boundary_warning=boundary,
                mean_energy_density=float(mean_e),
                energy_density_error=float(err_e),
            )
        )
    return MobilityEdgeResult(grid=grid, points=tuple(points), failures=failures)


def r_scan(
    cfg: ScanConfig,
    workers: int | None = None,
    bootstrap_resamples: int = 1000,
    pooled: bool = False,
) -> RScanResult:
    """Mean adjacent-gap ratio per disorder strength with bootstrap CIs.

    Default averaging is within-realization first, then across realizations
    (unweighted); ``pooled=True`` weights realizations by their pair counts
    instead.
    """
    tasks = _scan_tasks(cfg, extra=(cfg.degeneracy_tol,))
    results = ordered_map(_gap_ratio_task, tasks, workers=workers)

    n_grid = len(cfg.grid)
    per_real: list[list[tuple[float, int, int]]] = [[] for _ in range(n_grid)]
    failures = 0
    for t_index, res in enumerate(results):
        gi = t_index // cfg.realizations
        if res[0] == "fail":
            failures += 1
            continue
        per_real[gi].append(res[1])
    _check_failure_budget(failures, len(tasks))

    mean_r = np.empty(n_grid)
    ci_low = np.empty(n_grid)
    ci_high = np.empty(n_grid)
    counts = np.empty(n_grid, dtype=int)
    dropped = np.empty(n_grid, dtype=int)
    for gi in range(n_grid):
        rows = per_real[gi]
        if len(rows) < 2:
            raise RuntimeError(f"grid point {cfg.grid[gi]} has fewer than 2 realizations")
        rs = np.asarray([r for r, _, _ in rows])
        ns = np.asarray([n for _, n, _ in rows])
        dropped[gi] = sum(d for _, _, d in rows)
        counts[gi] = len(rows)
        if pooled:
            mean_r[gi] = float((rs * ns).sum() / ns.sum())
            stat = lambda idx: (rs[idx] * ns[idx]).sum(axis=-1) / ns[idx].sum(axis=-1)
        else:
            mean_r[gi] = float(rs.mean())
            stat = lambda idx: rs[idx].mean(axis=-1)
        rng = generator(cfg.master_seed, _BOOTSTRAP_SALT, gi)
        idx = rng.integers(0, len(rows), size=(bootstrap_resamples, len(rows)))
        boots = stat(idx)
        ci_low[gi], ci_high[gi] = np.percentile(boots, [2.5, 97.5])
    return RScanResult(
        grid=np.asarray(cfg.grid, dtype=float),
        mean_r=mean_r,
        ci_low=ci_low,
        ci_high=ci_high,
        counts=counts,
        dropped_pairs=dropped,
        pooled=pooled,
    )


# ---------------------------------------------------------------------------
# bootstrap

def bootstrap(samples, resamples: int = 1000, seed: int = 0) -> BootstrapEstimate:
    """Percentile-method 95% CI of the mean from with-replacement resamples."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("samples must be non-empty")
    if resamples < 100:
        raise ValueError("need at least 100 resamples")
    rng = generator(seed)
    idx = rng.integers(0, samples.size, size=(resamples, samples.size))
    means = samples[idx].mean(axis=1)
    lo, hi = np.percentile(means, [2.5, 97.5])
    return BootstrapEstimate(
        mean=float(samples.mean()), ci_low=float(lo), ci_high=float(hi), resamples=resamples
    )


def nested_bootstrap(groups, resamples: int = 1000, seed: int = 0) -> BootstrapEstimate:
    """Two-level bootstrap: within each group first, then across groups.

    Mirrors the hardware-analysis convention of bootstrapping instance
    magnetizations per cell and then bootstrapping the per-cell means.
    """
    groups = [np.asarray(g, dtype=float) for g in groups]
    if not groups or any(g.size == 0 for g in groups):
        raise ValueError("groups must be non-empty")
    if resamples < 100:
        raise ValueError("need at least 100 resamples")
    group_means = np.empty(len(groups))
    for gi, g in enumerate(groups):
        rng = generator(seed, 1, gi)
        idx = rng.integers(0, g.size, size=(resamples, g.size))
        group_means[gi] = g[idx].mean(axis=1).mean()
    rng = generator(seed, 2)
    idx = rng.integers(0, len(groups), size=(resamples, len(groups)))
    boots = group_means[idx].mean(axis=1)
    lo, hi = np.percentile(boots, [2.5, 97.5])
    return BootstrapEstimate(
        mean=float(group_means.mean()), ci_low=float(lo), ci_high=float(hi), resamples=resamples
    )
