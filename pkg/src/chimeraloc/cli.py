"""Command-line front end.

Subcommands: ``entropy-scan``, ``mobility-edge``, ``level-stats``, ``svmc``,
``replay``.  Each run reads a JSON config, writes tidy CSV tables plus a
JSON manifest recording the fully resolved config; ``replay <manifest>``
re-executes a manifest and reproduces byte-identical CSVs.

Exit codes: 0 success, 1 config/validation error, 2 runtime error,
3 assertion-flag failure (e.g. ``--assert-dome``).
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
import time

import numpy as np

from . import __version__
from .ensemble import (
    GraphSpec,
    ScanConfig,
    critical_point,
    entropy_scan,
    mobility_edge,
    r_scan,
)
from .levelstats import GOE, POISSON, reference_mean
from .svmc.experiment import Scenario, magnetization_experiment, onset_ratio

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_ASSERTION = 3


class ConfigError(Exception):
    pass


class AssertionFlagFailure(Exception):
    pass


# ---------------------------------------------------------------------------
# config helpers

def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc


def _require(cfg: dict, key: str, path: str):
    if key not in cfg:
        raise ConfigError(f"{path}: missing required key {key!r}")
    return cfg[key]


def _grid_from(spec, path: str) -> tuple[float, ...]:
    if isinstance(spec, list):
        return tuple(float(v) for v in spec)
    if isinstance(spec, dict):
        start, stop, step = (float(_require(spec, k, path)) for k in ("start", "stop", "step"))
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(n))
    raise ConfigError(f"{path}: grid must be a list or a start/stop/step object")


def _apply_full_scale(cfg: dict, full_scale: bool) -> dict:
    """Swap in the *_full variants of count keys when --full-scale is given."""
    out = {}
    for key, value in cfg.items():
        if key.endswith("_full"):
            continue
        if full_scale and f"{key}_full" in cfg:
            out[key] = cfg[f"{key}_full"]
        else:
            out[key] = value
    return out


def _resolve_seed(cfg: dict, override: int | None) -> int:
    if override is not None:
        return override
    if "seed" in cfg and cfg["seed"] is not None:
        return int(cfg["seed"])
    return secrets.randbits(63)


def _scan_config(cfg: dict, path: str, seed: int, eigenstates=None) -> ScanConfig:
    graph = cfg.get("graph", {})
    partition = cfg.get("partition", "up-down")
    if isinstance(partition, list):
        partition = tuple(int(v) for v in partition)
    if eigenstates is None:
        eigenstates = cfg.get("eigenstates", "middle")
    if isinstance(eigenstates, list):
        eigenstates = tuple(int(v) for v in eigenstates)
    try:
        return ScanConfig(
            graph=GraphSpec(cells=int(graph.get("cells", 1)), k=int(graph.get("k", 4))),
            grid=_grid_from(_require(cfg, "grid", path), path),
            realizations=int(_require(cfg, "realizations", path)),
            master_seed=seed,
            eigenstates=eigenstates,
            partition=partition,
            degeneracy_tol=float(cfg.get("degeneracy_tol", 1e-12)),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# output helpers

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_atomic(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    _write_atomic(path, "\n".join(lines) + "\n")


def _write_manifest(out_dir: str, command: str, config: dict, seed: int,
                    outputs: list[str], failures: int, started: float) -> str:
    manifest = {
        "command": command,
        "config": config,
        "master_seed": seed,
        "version": __version__,
        "started": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "finished": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "outputs": outputs,
        "failures": failures,
    }
    path = os.path.join(out_dir, "manifest.json")
    _write_atomic(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------------------
# commands

def cmd_entropy_scan(config: dict, config_path: str, out_dir: str, workers: int | None,
                     seed_override: int | None, full_scale: bool) -> int:
    started = time.time()
    cfg_eff = _apply_full_scale(config, full_scale)
    seed = _resolve_seed(cfg_eff, seed_override)
    scan_cfg = _scan_config(cfg_eff, config_path, seed)
    result = entropy_scan(scan_cfg, workers=workers)
    cp = critical_point(result)

    csv_path = os.path.join(out_dir, "entropy_scan.csv")
    _write_csv(
        csv_path,
        ["disorder", "mean_entropy", "variance", "std_error", "count", "failures"],
        zip(result.grid, result.mean, result.variance, result.std_error,
            result.counts, result.failures),
    )
    resolved = scan_cfg.resolved()
    _write_manifest(out_dir, "entropy-scan", resolved, seed, ["entropy_scan.csv"],
                    int(result.failures.sum()), started)
    print(f"critical disorder (variance peak): {cp.value:.4f} "
          f"(grid point {cp.grid_value}, index {cp.index})")
    if cp.boundary_warning:
        print("warning: variance peak sits on the grid boundary; widen the grid")
    return EXIT_OK


def cmd_mobility_edge(config: dict, config_path: str, out_dir: str, workers: int | None,
                      seed_override: int | None, full_scale: bool, assert_dome: bool) -> int:
    started = time.time()
    cfg_eff = _apply_full_scale(config, full_scale)
    seed = _resolve_seed(cfg_eff, seed_override)
    scan_cfg = _scan_config(cfg_eff, config_path, seed, eigenstates="all")
    result = mobility_edge(scan_cfg, workers=workers)

    csv_path = os.path.join(out_dir, "mobility_edge.csv")
    _write_csv(
        csv_path,
        ["eigenstate", "critical_disorder", "critical_disorder_grid",
         "mean_energy_density", "energy_density_error", "boundary_warning"],
        ((p.eigenstate_index, p.critical_disorder, p.critical_disorder_grid,
          p.mean_energy_density, p.energy_density_error, p.boundary_warning)
         for p in result.points),
    )
    _write_manifest(out_dir, "mobility-edge", scan_cfg.resolved(), seed,
                    ["mobility_edge.csv"], result.failures, started)

    eps = np.asarray([p.mean_energy_density for p in result.points])
    cps = np.asarray([p.critical_disorder for p in result.points])
    mid = cps[(eps >= 0.4) & (eps <= 0.6)]
    low = cps[eps < 0.15]
    high = cps[eps > 0.85]
    if mid.size and low.size and high.size:
        print(f"mean critical disorder: middle band {mid.mean():.3f}, "
              f"low-density band {low.mean():.3f}, high-density band {high.mean():.3f}")
    if assert_dome:
        if not (mid.size and low.size and high.size):
            raise AssertionFlagFailure("dome check needs states in all three density bands")
        if not (mid.mean() > low.mean() and mid.mean() > high.mean()):
            raise AssertionFlagFailure(
                "mobility edge is not dome-shaped: middle band does not exceed the edges"
            )
    return EXIT_OK


def cmd_level_stats(config: dict, config_path: str, out_dir: str, workers: int | None,
                    seed_override: int | None, full_scale: bool) -> int:
    started = time.time()
    cfg_eff = _apply_full_scale(config, full_scale)
    seed = _resolve_seed(cfg_eff, seed_override)
    scan_cfg = _scan_config(cfg_eff, config_path, seed)
    result = r_scan(
        scan_cfg,
        workers=workers,
        bootstrap_resamples=int(cfg_eff.get("bootstrap_resamples", 1000)),
        pooled=bool(cfg_eff.get("pooled", False)),
    )

    goe_ref = reference_mean(GOE)
    poisson_ref = reference_mean(POISSON)
    csv_path = os.path.join(out_dir, "level_stats.csv")
    _write_csv(
        csv_path,
        ["disorder", "mean_r", "ci_low", "ci_high", "realizations", "dropped_pairs",
         "goe_reference", "poisson_reference"],
        ((g, r, lo, hi, c, d, goe_ref, poisson_ref)
         for g, r, lo, hi, c, d in zip(result.grid, result.mean_r, result.ci_low,
                                       result.ci_high, result.counts, result.dropped_pairs)),
    )
    resolved = scan_cfg.resolved()
    resolved["pooled"] = result.pooled
    resolved["bootstrap_resamples"] = int(cfg_eff.get("bootstrap_resamples", 1000))
    _write_manifest(out_dir, "level-stats", resolved, seed, ["level_stats.csv"], 0, started)
    print(f"mean gap ratio: {result.mean_r[0]:.4f} at weakest grid point, "
          f"{result.mean_r[-1]:.4f} at strongest (GOE {goe_ref:.4f}, Poisson {poisson_ref:.4f})")
    return EXIT_OK


def _scenario_from(cfg: dict, path: str, seed_override: int | None, full_scale: bool) -> Scenario:
    cfg_eff = _apply_full_scale(cfg, full_scale)
    seed = _resolve_seed(cfg_eff, seed_override)
    try:
        return Scenario(
            name=str(cfg_eff.get("name", "scenario")),
            family=str(_require(cfg_eff, "family", path)),
            initial_state=tuple(int(v) for v in _require(cfg_eff, "initial_state", path)),
            ba_grid=tuple(float(v) for v in _require(cfg_eff, "ba_grid", path)),
            realizations=int(_require(cfg_eff, "realizations", path)),
            chains=int(_require(cfg_eff, "chains", path)),
            seed=seed,
            pause_sweeps=int(cfg_eff.get("pause_sweeps", 200_000)),
            beta=float(cfg_eff.get("beta", 1.0 / 1.57146)),
            cells=int(cfg_eff.get("cells", 1)),
            k=int(cfg_eff.get("k", 4)),
            uniform_j=None if cfg_eff.get("uniform_j") is None else float(cfg_eff["uniform_j"]),
            disorder_strength=float(cfg_eff.get("disorder_strength", 1.0)),
            ramp_rate=int(cfg_eff.get("ramp_rate", 2000)),
            verbatim_field_term=bool(cfg_eff.get("verbatim_field_term", False)),
            bootstrap_resamples=int(cfg_eff.get("bootstrap_resamples", 1000)),
            schedule_path=cfg_eff.get("schedule", cfg_eff.get("schedule_path")),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def cmd_svmc(config: dict, config_path: str, out_dir: str, workers: int | None,
             seed_override: int | None, full_scale: bool) -> int:
    started = time.time()
    raw_scenarios = config["scenarios"] if "scenarios" in config else [config]
    if not raw_scenarios:
        raise ConfigError(f"{config_path}: empty scenario list")
    scenarios = [
        _scenario_from(raw, config_path, seed_override, full_scale) for raw in raw_scenarios
    ]
    names = [sc.name for sc in scenarios]
    if len(set(names)) != len(names):
        raise ConfigError(f"{config_path}: scenario names must be unique")

    outputs = []
    onsets = {}
    for sc in scenarios:
        curve = magnetization_experiment(sc, workers=workers)
        fname = f"svmc_{sc.name}.csv"
        _write_csv(
            os.path.join(out_dir, fname),
            ["target_ratio", "achieved_ratio", "s_pause", "mean_mz", "ci_low", "ci_high",
             "realizations", "chains"],
            ((t, a, s, m, lo, hi, curve.realizations, curve.chains)
             for t, a, s, m, lo, hi in zip(curve.target_ratio, curve.achieved_ratio,
                                           curve.s_pause, curve.mean_mz,
                                           curve.ci_low, curve.ci_high)),
        )
        outputs.append(fname)
        onsets[sc.name] = onset_ratio(curve)
        shown = "none" if onsets[sc.name] is None else f"{onsets[sc.name]:g}"
        print(f"scenario {sc.name}: magnetization onset at B/A = {shown}")

    report_path = os.path.join(out_dir, "onset_report.json")
    _write_atomic(report_path, json.dumps({"onsets": onsets}, indent=2, sort_keys=True) + "\n")
    outputs.append("onset_report.json")
    _write_manifest(out_dir, "svmc", {"scenarios": [sc.resolved() for sc in scenarios]},
                    scenarios[0].seed, outputs, 0, started)
    return EXIT_OK


def cmd_replay(manifest_path: str, out_dir: str, workers: int | None) -> int:
    manifest = _load_json(manifest_path)
    os.makedirs(out_dir, exist_ok=True)
    command = manifest.get("command")
    config = manifest.get("config", {})
    seed = manifest.get("master_seed")
    if command == "entropy-scan":
        return cmd_entropy_scan(config, manifest_path, out_dir, workers, seed, False)
    if command == "mobility-edge":
        return cmd_mobility_edge(config, manifest_path, out_dir, workers, seed, False, False)
    if command == "level-stats":
        return cmd_level_stats(config, manifest_path, out_dir, workers, seed, False)
    if command == "svmc":
        return cmd_svmc(config, manifest_path, out_dir, workers, None, False)
    raise ConfigError(f"{manifest_path}: unknown command {command!r} in manifest")


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chimeraloc",
        description="Localization-transition scans and rotor annealing emulation "
                    "on Chimera-cell graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_config=True):
        if with_config:
            p.add_argument("config", help="path to the JSON config")
        p.add_argument("--out-dir", default=".", help="directory for result files")
        p.add_argument("--workers", type=int, default=None,
                       help="parallel workers (default: all cores)")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--full-scale", action="store_true",
                       help="use the *_full variants of the count settings")

    add_common(sub.add_parser("entropy-scan", help="mean/variance block-entropy scan"))
    p_mob = sub.add_parser("mobility-edge", help="per-eigenstate critical-disorder diagram")
    add_common(p_mob)
    p_mob.add_argument("--assert-dome", action="store_true",
                       help="exit 3 unless mid-spectrum states have the largest critical disorder")
    add_common(sub.add_parser("level-stats", help="mean adjacent-gap-ratio scan"))
    add_common(sub.add_parser("svmc", help="rotor annealing magnetization scenarios"))
    p_rep = sub.add_parser("replay", help="re-run a manifest, reproducing its results")
    p_rep.add_argument("manifest", help="path to a manifest.json")
    p_rep.add_argument("--out-dir", default=".")
    p_rep.add_argument("--workers", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            return cmd_replay(args.manifest, args.out_dir, args.workers)
        os.makedirs(args.out_dir, exist_ok=True)
        config = _load_json(args.config)
        if args.command == "entropy-scan":
            return cmd_entropy_scan(config, args.config, args.out_dir, args.workers,
                                    args.seed, args.full_scale)
        if args.command == "mobility-edge":
            return cmd_mobility_edge(config, args.config, args.out_dir, args.workers,
                                     args.seed, args.full_scale, args.assert_dome)
        if args.command == "level-stats":
            return cmd_level_stats(config, args.config, args.out_dir, args.workers,
                                   args.seed, args.full_scale)
        if args.command == "svmc":
            return cmd_svmc(config, args.config, args.out_dir, args.workers,
                            args.seed, args.full_scale)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AssertionFlagFailure as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except (RuntimeError, OSError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
