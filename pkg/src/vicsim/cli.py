"""Command-line interface: single runs, parameter sweeps, canned presets.

Subcommands
-----------
``vicsim run``     one trajectory, observables to CSV.
``vicsim sweep``   vary one parameter; emit coupling coefficients, the
                   peak of an observable, or full concatenated trajectories.
``vicsim preset``  canned figure scenarios (fig3..fig8) with fixed settings.

Exit codes: 0 success, 1 configuration error, 2 runtime invariant breach.
Angles are given in units of pi everywhere.  CSV cells carry 17
significant digits so values round-trip bit exactly; complex observables
are written as paired Re(...)/Im(...) columns.  The environment variable
VICSIM_WORKERS overrides the default sweep parallelism.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import (
    REDUCE_MODES,
    SWEEP_PARAMETERS,
    ConfigError,
    PresetBundle,
    SimConfig,
    SweepSpec,
    apply_sweep_value,
    build_config,
    load_config_file,
    preset,
)
from .coupling import CouplingSet, coupling_for_model
from .dynamics import ModelParams, parse_state_label, pure_state
from .integrate import InvariantViolation, Trajectory, evolve
from .observables import POPULATION_LABEL_RE, ObservableSeries, observable_series

__all__ = ["main", "run_single", "run_sweep"]

_COEFF_REAL_FIELDS = ("gamma1", "gamma2")
_COEFF_COMPLEX_FIELDS = ("Gamma1", "Gamma2", "Omega1", "Omega2", "GammaVc", "OmegaVc")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise ConfigError(f"cannot write output file {path}: {exc}") from exc


def _series_header(series: Sequence[ObservableSeries]) -> list[str]:
    cols = []
    for s in series:
        if np.iscomplexobj(s.values):
            cols += [f"Re({s.label})", f"Im({s.label})"]
        else:
            cols.append(s.label)
    return cols


def _series_row(series: Sequence[ObservableSeries], k: int) -> list[float]:
    row: list[float] = []
    for s in series:
        v = s.values[k]
        if np.iscomplexobj(s.values):
            row += [v.real, v.imag]
        else:
            row.append(float(v))
    return row


def simulate(config: SimConfig) -> Trajectory:
    """Coupling coefficients -> parameters -> propagated trajectory."""
    coeffs = coupling_for_model(config.model, config.geometry)
    params = ModelParams(coeffs=coeffs, delta=config.delta)
    rho0 = pure_state(*parse_state_label(config.initial_state))
    return evolve(rho0, config.grid, params, geometry=config.geometry)


def run_single(config: SimConfig) -> str:
    """Run one trajectory and write its observable columns; returns the path."""
    traj = simulate(config)
    series = [observable_series(traj, label) for label in config.observables]
    header = ["t"] + _series_header(series)
    rows = (
        [traj.times[k]] + _series_row(series, k) for k in range(len(traj.times))
    )
    out = config.output_path or "vicsim_run.csv"
    _write_csv(out, header, rows)
    return out


def _coefficient_row(config: SimConfig, value: float) -> list[float]:
    c = coupling_for_model(config.model, config.geometry)
    row = [value, c.gamma1, c.gamma2]
    for name in _COEFF_COMPLEX_FIELDS:
        z = complex(getattr(c, name))
        row += [z.real, z.imag]
    return row


def _sweep_trajectory_job(payload) -> tuple[float, np.ndarray, list]:
    """Worker: one sweep point -> (value, times, per-label value arrays)."""
    config, value, labels = payload
    traj = simulate(config)
    series = [observable_series(traj, label) for label in labels]
    return value, traj.times, [(s.label, s.values) for s in series]


def _resolve_workers(flag_value: Optional[int]) -> int:
    if flag_value is not None:
        if flag_value < 1:
            raise ConfigError("--workers must be >= 1")
        return flag_value
    env = os.environ.get("VICSIM_WORKERS")
    if env is not None:
        try:
            workers = int(env)
        except ValueError as exc:
            raise ConfigError(f"VICSIM_WORKERS must be an integer, got {env!r}") from exc
        if workers < 1:
            raise ConfigError("VICSIM_WORKERS must be >= 1")
        return workers
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # platforms without affinity masks
        return os.cpu_count() or 1


def run_sweep(
    config: SimConfig,
    sweep: SweepSpec,
    reduce: str = "full",
    workers: Optional[int] = None,
) -> str:
    """Sweep one parameter and write the reduced CSV; returns the path."""
    if reduce not in REDUCE_MODES:
        raise ConfigError(
            f"unknown reduce mode {reduce!r}; valid: {', '.join(REDUCE_MODES)}"
        )
    values = sweep.values()
    out = config.output_path or "vicsim_sweep.csv"

    if reduce == "coefficients":
        header = [sweep.parameter] + list(_COEFF_REAL_FIELDS)
        for name in _COEFF_COMPLEX_FIELDS:
            header += [f"Re({name})", f"Im({name})"]
        rows = [
            _coefficient_row(apply_sweep_value(config, sweep.parameter, v), v)
            for v in values
        ]
        _write_csv(out, header, rows)
        return out

    labels = config.observables
    if reduce == "peak_value" and not POPULATION_LABEL_RE.match(labels[0]):
        raise ConfigError(
            "peak_value needs a population observable (p_ij) as the first label"
        )

    payloads = [
        (apply_sweep_value(config, sweep.parameter, v), v, labels) for v in values
    ]
    n_workers = min(_resolve_workers(workers), len(payloads))
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_sweep_trajectory_job, payloads))
    else:
        results = [_sweep_trajectory_job(p) for p in payloads]

    if reduce == "peak_value":
        header = [sweep.parameter, f"peak_{labels[0]}"]
        rows = [
            [value, float(np.max(labelled[0][1]))]
            for value, _, labelled in results
        ]
        _write_csv(out, header, rows)
        return out

    # full: concatenated trajectories tagged by the sweep value.
    first_series = [
        ObservableSeries(times=results[0][1], values=vals, label=lab)
        for lab, vals in results[0][2]
    ]
    header = [sweep.parameter, "t"] + _series_header(first_series)

    def all_rows():
        for value, times, labelled in results:
            series = [
                ObservableSeries(times=times, values=vals, label=lab)
                for lab, vals in labelled
            ]
            for k in range(len(times)):
                yield [value, times[k]] + _series_row(series, k)

    _write_csv(out, header, all_rows())
    return out


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit code 1)."""

    def error(self, message: str):  # noqa: A003 - argparse API
        raise ConfigError(message)


def _add_config_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", metavar="FILE", help="flat key=value config file")
    sp.add_argument("--model", choices=["real", "spherical"], help="dipole model")
    sp.add_argument("--theta", type=float, help="polar angle in units of pi")
    sp.add_argument("--phi", type=float, help="azimuth in units of pi")
    sp.add_argument("--r", type=float, help="separation in wavelengths")
    sp.add_argument(
        "--delta", type=float, help="excited-doublet splitting in units of gamma"
    )
    sp.add_argument("--dt", type=float, help="integrator step in 1/gamma")
    sp.add_argument("--tmax", type=float, help="final time in 1/gamma")
    sp.add_argument(
        "--sample-every", type=int, dest="sample_every", help="store every Nth step"
    )
    sp.add_argument(
        "--initial-state", dest="initial_state", help="product state label, e.g. 1A3B"
    )
    sp.add_argument("--observables", help="comma-separated observable labels")
    sp.add_argument("--out", help="output CSV path")


def _build_parser() -> _Parser:
    p = _Parser(
        prog="vicsim",
        description=(
            "Spontaneous-emission dynamics of two radiatively coupled "
            "three-level V-type emitters."
        ),
    )
    sub = p.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="single trajectory to CSV")
    _add_config_flags(run_p)

    sweep_p = sub.add_parser("sweep", help="vary one parameter")
    _add_config_flags(sweep_p)
    sweep_p.add_argument(
        "--param", required=True, choices=SWEEP_PARAMETERS, help="swept parameter"
    )
    sweep_p.add_argument(
        "--from", dest="start", type=float, required=True,
        help="sweep start (angles in units of pi)",
    )
    sweep_p.add_argument("--to", dest="stop", type=float, required=True)
    sweep_p.add_argument("--count", type=int, required=True)
    sweep_p.add_argument("--log", action="store_true", help="logarithmic spacing")
    sweep_p.add_argument("--reduce", choices=REDUCE_MODES, default="full")
    sweep_p.add_argument("--workers", type=int, help="parallel sweep processes")

    preset_p = sub.add_parser("preset", help="canned figure scenario")
    preset_p.add_argument("name", help="preset name (fig3..fig8)")
    preset_p.add_argument("--out", help="output CSV path")
    return p


def _config_from_args(args: argparse.Namespace) -> SimConfig:
    file_values = load_config_file(args.config) if args.config else None
    return build_config(
        file_values,
        model=args.model,
        theta=args.theta,
        phi=args.phi,
        r=args.r,
        delta=args.delta,
        dt=args.dt,
        tmax=args.tmax,
        sample_every=args.sample_every,
        initial_state=args.initial_state,
        observables=args.observables,
        out=args.out,
    )


def _run_preset(bundle: PresetBundle, out: Optional[str]) -> str:
    config = bundle.config
    config = replace(config, output_path=out or f"{bundle.name}.csv")
    if bundle.sweep is not None:
        return run_sweep(config, bundle.sweep, bundle.reduce or "full")
    return run_single(config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        if args.command == "run":
            path = run_single(_config_from_args(args))
        elif args.command == "sweep":
            config = _config_from_args(args)
            sweep = SweepSpec(
                parameter=args.param,
                start=args.start,
                stop=args.stop,
                count=args.count,
                scale="log" if args.log else "linear",
            )
            path = run_sweep(config, sweep, args.reduce, args.workers)
        elif args.command == "preset":
            path = _run_preset(preset(args.name), args.out)
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"vicsim: error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"vicsim: aborted: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
