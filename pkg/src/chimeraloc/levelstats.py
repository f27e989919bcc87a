"""Spectral statistics: normalized energy densities and adjacent-gap ratios.

The gap-ratio observable r = min(d_n, d_{n+1}) / max(d_n, d_{n+1}) has
ensemble means 4 - 2*sqrt(3) ~ 0.5359 for GOE level repulsion and
2*ln(2) - 1 ~ 0.3863 for uncorrelated (Poisson) levels; both constants are
kept as exact expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GOE = "goe"
POISSON = "poisson"

_REFERENCE_MEANS = {
    GOE: 4.0 - 2.0 * math.sqrt(3.0),
    POISSON: 2.0 * math.log(2.0) - 1.0,
}

DEFAULT_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class EnergyDensitySpectrum:
    """Per-eigenstate normalized energy density, 1 at E_min down to 0 at E_max."""

    densities: np.ndarray


@dataclass(frozen=True)
class GapRatioStats:
    mean_r: float
    count: int
    dropped_degenerate: int
    ratios: np.ndarray  # kept ratios, for pooled aggregation


def energy_density(values: np.ndarray) -> EnergyDensitySpectrum:
    """Map ascending energies E_n to (E_max - E_n) / (E_max - E_0)."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise ValueError("need at least 2 energies")
    if np.any(np.diff(values) < 0):
        raise ValueError("energies must be ascending")
    lo, hi = values[0], values[-1]
    if hi == lo:
        raise ValueError("fully degenerate spectrum: energy density undefined")
    return EnergyDensitySpectrum(densities=(hi - values) / (hi - lo))


def gap_ratios(
    values: np.ndarray, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL
) -> GapRatioStats:
    """Adjacent-gap ratio statistics of one ascending spectrum.

    Pairs whose larger gap is below degeneracy_tol * (spectral range) are
    treated as numerically degenerate: dropped from the mean and counted.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        raise ValueError("need at least 3 energies for gap ratios")
    if np.any(np.diff(values) < 0):
        raise ValueError("energies must be ascending")
    deltas = np.diff(values)
    lo_gap = np.minimum(deltas[:-1], deltas[1:])
    hi_gap = np.maximum(deltas[:-1], deltas[1:])
    keep = hi_gap >= degeneracy_tol * (values[-1] - values[0])
    dropped = int((~keep).sum())
    if not np.any(keep):
        raise ValueError("all gap pairs degenerate: cannot form ratios")
    ratios = lo_gap[keep] / hi_gap[keep]
    return GapRatioStats(
        mean_r=float(ratios.mean()),
        count=int(ratios.size),
        dropped_degenerate=dropped,
        ratios=ratios,
    )


def reference_mean(ensemble: str) -> float:
    """Exact mean gap ratio of the GOE or Poisson reference ensemble."""
    key = ensemble.strip().lower()
    if key not in _REFERENCE_MEANS:
        raise ValueError(f"unknown ensemble {ensemble!r}; known: {sorted(_REFERENCE_MEANS)}")
    return _REFERENCE_MEANS[key]


def reference_density(ensemble: str, delta, mean_spacing: float):
    """Reference level-spacing probability density, normalized in the spacing.

    GOE surmise: (pi/2) * (d / m^2) * exp(-pi d^2 / (4 m^2));
    Poisson:     (1/m) * exp(-d/m), with m the mean spacing.
    """
    if mean_spacing <= 0:
        raise ValueError("mean spacing must be positive")
    d = np.asarray(delta, dtype=float)
    if np.any(d < 0):
        raise ValueError("spacing must be non-negative")
    key = ensemble.strip().lower()
    if key == GOE:
        out = (math.pi / 2.0) * (d / mean_spacing**2) * np.exp(
            -math.pi * d**2 / (4.0 * mean_spacing**2)
        )
    elif key == POISSON:
        out = np.exp(-d / mean_spacing) / mean_spacing
    else:
        raise ValueError(f"unknown ensemble {ensemble!r}; known: ['goe', 'poisson']")
    return out if out.ndim else float(out)
