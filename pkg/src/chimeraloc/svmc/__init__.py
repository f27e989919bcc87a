"""Planar-rotor Monte Carlo annealing emulation (schedules, protocol, scans)."""

from ._backend import BACKEND, kernel_backends
from .core import (
    DEFAULT_BETA,
    DEFAULT_PAUSE_SWEEPS,
    DEFAULT_RAMP_RATE,
    DegenerateRampWarning,
    MagnetizationRecord,
    RotorState,
    SvmcConfig,
    SvmcInstance,
    instance_from_disorder,
    potential,
    potential_change,
    project,
    propose_angle,
    ramp_sweep_count,
    run_protocol,
    sweep,
    uniform_instance,
)
from .experiment import MagnetizationCurve, Scenario, magnetization_experiment, onset_ratio
from .schedule import (
    AnnealSchedule,
    ScheduleRangeError,
    default_schedule,
    load_schedule_csv,
    load_schedule_file,
    ratio_to_s,
)

__all__ = [
    "AnnealSchedule",
    "BACKEND",
    "DEFAULT_BETA",
    "DEFAULT_PAUSE_SWEEPS",
    "DEFAULT_RAMP_RATE",
    "DegenerateRampWarning",
    "MagnetizationCurve",
    "MagnetizationRecord",
    "RotorState",
    "Scenario",
    "ScheduleRangeError",
    "SvmcConfig",
    "SvmcInstance",
    "default_schedule",
    "instance_from_disorder",
    "kernel_backends",
    "load_schedule_csv",
    "load_schedule_file",
    "magnetization_experiment",
    "onset_ratio",
    "potential",
    "potential_change",
    "project",
    "propose_angle",
    "ramp_sweep_count",
    "ratio_to_s",
    "run_protocol",
    "sweep",
    "uniform_instance",
]
