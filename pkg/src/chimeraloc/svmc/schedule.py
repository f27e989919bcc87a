"""Tabulated annealing schedules A(s), B(s) with interpolation and inversion.

A schedule is a strictly increasing table of (s, A, B) rows covering
s in [0, 1], interpolated piecewise-linearly.  A decreases, B increases,
so the ratio B/A increases monotonically wherever A > 0; that ratio is
what experiment scenarios are parameterized by.  Units are GHz with h = 1.

The packaged default is the synthetic monotone schedule
A(s) = 8 (1-s)^2, B(s) = 8 s^2, tabulated on a 0.0005 grid; any other
schedule can be loaded from a CSV with header ``s,A,B``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

import numpy as np


class ScheduleRangeError(ValueError):
    """Requested ratio outside the schedule's achievable range."""

    def __init__(self, target: float, lo: float, hi: float):
        super().__init__(
            f"target ratio {target} outside the achievable range [{lo:.6g}, {hi:.6g}]"
        )
        self.target = target
        self.bounds = (lo, hi)


@dataclass(frozen=True)
class AnnealSchedule:
    s: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        for arr in (self.s, self.a, self.b):
            arr.setflags(write=False)
        if self.s.size < 2:
            raise ValueError("schedule needs at least 2 rows")
        if self.s[0] != 0.0 or self.s[-1] != 1.0:
            raise ValueError("schedule must cover s in [0, 1]")
        if np.any(np.diff(self.s) <= 0):
            raise ValueError("s column must be strictly increasing")
        if np.any(self.a < 0) or np.any(self.b < 0):
            raise ValueError("A and B must be non-negative")
        if np.any(np.diff(self.a) > 0):
            raise ValueError("A(s) must be non-increasing")
        if np.any(np.diff(self.b) < 0):
            raise ValueError("B(s) must be non-decreasing")

    def a_of(self, s):
        return np.interp(s, self.s, self.a)

    def b_of(self, s):
        return np.interp(s, self.s, self.b)

    def ratio_of(self, s):
        return self.b_of(s) / self.a_of(s)


def load_schedule_csv(stream) -> AnnealSchedule:
    """Parse a schedule table from a CSV stream with header ``s,A,B``."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [c.strip() for c in header] != ["s", "A", "B"]:
        raise ValueError("schedule CSV must start with header 's,A,B'")
    rows = [(float(r[0]), float(r[1]), float(r[2])) for r in reader if r]
    if not rows:
        raise ValueError("schedule CSV has no data rows")
    s, a, b = (np.asarray(col, dtype=float) for col in zip(*rows))
    return AnnealSchedule(s=s, a=a, b=b)


def load_schedule_file(path) -> AnnealSchedule:
    with open(path, newline="") as fh:
        return load_schedule_csv(fh)


_default: AnnealSchedule | None = None


def default_schedule() -> AnnealSchedule:
    """The packaged synthetic schedule (cached)."""
    global _default
    if _default is None:
        text = resources.files("chimeraloc.svmc").joinpath(
            "data/default_schedule.csv"
        ).read_text()
        _default = load_schedule_csv(io.StringIO(text))
    return _default


def ratio_to_s(schedule: AnnealSchedule, target: float, rel_tol: float = 1e-6) -> float:
    """Invert the interpolated ratio B(s)/A(s): find s with ratio(s) = target.

    Bisection on the monotone interpolated ratio; the result satisfies
    |ratio(s) - target| / target < rel_tol.  Raises ScheduleRangeError with
    the achievable bounds when the target cannot be reached.
    """
    if target <= 0:
        raise ScheduleRangeError(target, float(schedule.ratio_of(0.0)), _max_ratio(schedule))
    hi_s = _max_usable_s(schedule)
    lo_r = float(schedule.ratio_of(0.0))
    hi_r = float(schedule.ratio_of(hi_s))
    if not lo_r < target <= hi_r:
        raise ScheduleRangeError(target, lo_r, hi_r)
    lo, hi = 0.0, hi_s
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        r = float(schedule.ratio_of(mid))
        if r < target:
            lo = mid
        else:
            hi = mid
        if r > 0 and abs(r - target) / target < rel_tol:
            return mid
    return hi


def _max_usable_s(schedule: AnnealSchedule) -> float:
    """Largest s at which the interpolated A is still positive."""
    s = 1.0
    while schedule.a_of(s) == 0.0:
        s = np.nextafter(s, 0.0)
    return float(s)


def _max_ratio(schedule: AnnealSchedule) -> float:
    return float(schedule.ratio_of(_max_usable_s(schedule)))
