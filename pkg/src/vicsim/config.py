"""Run configuration, flat key=value config files, and figure presets.

Angle convention for every user-facing surface (config files, CLI flags,
sweep bounds): units of pi.  ``theta=0.5`` means pi/2.  This keeps the
geometric special cases exactly representable; internally Geometry stores
radians.  Separations are in wavelengths, rates and the splitting delta
in units of gamma, times in units of 1/gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .coupling import DipoleModel, Geometry
from .dynamics import parse_state_label
from .integrate import TimeGrid

__all__ = [
    "ConfigError",
    "SimConfig",
    "SweepSpec",
    "PresetBundle",
    "PRESET_NAMES",
    "preset",
    "load_config_file",
    "build_config",
]


class ConfigError(Exception):
    """Bad user input: unknown keys, malformed values, impossible settings."""


_MODEL_NAMES = {
    "real": DipoleModel.REAL_ORTHOGONAL,
    "spherical": DipoleModel.SPHERICAL_COMPLEX,
}

OBSERVABLE_LABELS = tuple(
    [f"p_{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)] + ["rho12A"]
)

SWEEP_PARAMETERS = ("r_over_lambda", "theta", "phi", "delta")

REDUCE_MODES = ("coefficients", "peak_value", "full")


@dataclass(frozen=True)
class SimConfig:
    """A fully resolved single-run configuration."""

    model: DipoleModel
    geometry: Geometry
    delta: float = 0.0
    grid: TimeGrid = field(default_factory=TimeGrid)
    initial_state: str = "1A3B"
    observables: tuple = ("p_13",)
    output_path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.delta < 0.0:
            raise ConfigError("delta must be >= 0")
        try:
            parse_state_label(self.initial_state)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not self.observables:
            raise ConfigError("at least one observable is required")
        for label in self.observables:
            if label not in OBSERVABLE_LABELS:
                raise ConfigError(
                    f"unknown observable {label!r}; valid: {', '.join(OBSERVABLE_LABELS)}"
                )


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter over an inclusive range.

    Angle parameters take start/stop in units of pi, matching the CLI.
    """

    parameter: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self) -> None:
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(
                f"cannot sweep {self.parameter!r}; valid: {', '.join(SWEEP_PARAMETERS)}"
            )
        if not self.start < self.stop:
            raise ConfigError("sweep requires start < stop")
        if self.count < 2:
            raise ConfigError("sweep requires count >= 2")
        if self.scale not in ("linear", "log"):
            raise ConfigError("sweep scale must be 'linear' or 'log'")
        if self.scale == "log" and self.start <= 0.0:
            raise ConfigError("log sweep requires start > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def apply_sweep_value(config: SimConfig, parameter: str, value: float) -> SimConfig:
    """Config with one geometry/detuning field replaced by a sweep value."""
    if parameter == "r_over_lambda":
        geom = replace(config.geometry, r_over_lambda=float(value))
        return replace(config, geometry=geom)
    if parameter == "theta":
        geom = replace(config.geometry, theta=float(value) * math.pi)
        return replace(config, geometry=geom)
    if parameter == "phi":
        geom = replace(config.geometry, phi=float(value) * math.pi)
        return replace(config, geometry=geom)
    if parameter == "delta":
        return replace(config, delta=float(value))
    raise ConfigError(f"cannot sweep {parameter!r}")


@dataclass(frozen=True)
class PresetBundle:
    """A named, ready-to-run configuration (optionally a sweep)."""

    name: str
    config: SimConfig
    sweep: Optional[SweepSpec] = None
    reduce: Optional[str] = None


# Reference geometry used by most of the canned scenarios: atoms in the
# x-y plane (theta = pi/2), azimuth pi/4, where both dipole models show
# the unlike-transition coupling at full strength.
_THETA_XY = 0.5 * math.pi
_PHI_45 = 0.25 * math.pi
_R_NEAR = 1.0 / (2.0 * math.pi)  # zeta = 1


def _presets() -> dict[str, PresetBundle]:
    def cfg(model=DipoleModel.REAL_ORTHOGONAL, r=_R_NEAR, phi=_PHI_45,
            delta=0.0, obs=("p_13",), out=None):
        return SimConfig(
            model=model,
            geometry=Geometry(theta=_THETA_XY, phi=phi, r_over_lambda=r),
            delta=delta,
            observables=obs,
            output_path=out,
        )

    return {
        # Coefficient scans: how the couplings fall off with separation and
        # swing with azimuth.
        "fig3": PresetBundle(
            "fig3",
            cfg(r=0.25),
            SweepSpec("r_over_lambda", 0.05, 2.0, 400),
            "coefficients",
        ),
        "fig4": PresetBundle(
            "fig4",
            cfg(r=0.25),
            SweepSpec("phi", 0.0, 1.0, 361),
            "coefficients",
        ),
        # Trajectories, starting from one excited atom |1_A, 3_B>.
        "fig5": PresetBundle("fig5", cfg(delta=3.0, obs=("rho12A",))),
        "fig6a": PresetBundle("fig6a", cfg(obs=("p_32",))),
        "fig6b": PresetBundle("fig6b", cfg(obs=("p_23",))),
        "fig7": PresetBundle("fig7", cfg(r=0.25, obs=("p_13",))),
        "fig8": PresetBundle(
            "fig8", cfg(model=DipoleModel.SPHERICAL_COMPLEX, obs=("p_32",))
        ),
    }


PRESET_NAMES = tuple(_presets().keys())


def preset(name: str) -> PresetBundle:
    """Fresh bundle for a canned scenario; raises ConfigError if unknown."""
    bundles = _presets()
    if name not in bundles:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(bundles)}"
        )
    return bundles[name]


_CONFIG_KEYS = (
    "model",
    "theta",
    "phi",
    "r",
    "delta",
    "dt",
    "tmax",
    "sample_every",
    "initial_state",
    "observables",
    "out",
)


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat key=value file; '#' starts a comment, blanks ignored."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(
                f"{path}:{lineno}: unknown key {key!r}; valid: {', '.join(_CONFIG_KEYS)}"
            )
        values[key] = value.strip()
    return values


def _parse_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {raw!r}") from exc


def build_config(
    file_values: Optional[dict[str, str]] = None, **overrides
) -> SimConfig:
    """Assemble a SimConfig from config-file strings plus typed overrides.

    Overrides (CLI flags) win over file values; file values win over
    defaults.  Angles arrive in units of pi from both sources.
    """
    fv = dict(file_values or {})

    def pick(key: str, fallback):
        if key in overrides and overrides[key] is not None:
            return overrides[key]
        if key in fv:
            return _parse_float(fv[key], key)
        return fallback

    model_raw = overrides.get("model") or fv.get("model") or "real"
    if model_raw not in _MODEL_NAMES:
        raise ConfigError(
            f"unknown model {model_raw!r}; valid: {', '.join(_MODEL_NAMES)}"
        )

    theta_pi = pick("theta", 0.5)
    phi_pi = pick("phi", 0.25)
    r = pick("r", _R_NEAR)
    delta = pick("delta", 0.0)
    dt = pick("dt", 1e-3)
    tmax = pick("tmax", 5.0)

    sample_raw = overrides.get("sample_every")
    if sample_raw is None and "sample_every" in fv:
        try:
            sample_raw = int(fv["sample_every"])
        except ValueError as exc:
            raise ConfigError("sample_every must be an integer") from exc
    sample_every = 10 if sample_raw is None else int(sample_raw)

    initial = overrides.get("initial_state") or fv.get("initial_state") or "1A3B"

    obs_raw = overrides.get("observables")
    if obs_raw is None and "observables" in fv:
        obs_raw = fv["observables"]
    if obs_raw is None:
        observables = ("p_13",)
    elif isinstance(obs_raw, str):
        observables = tuple(s.strip() for s in obs_raw.split(",") if s.strip())
    else:
        observables = tuple(obs_raw)

    out = overrides.get("out") or fv.get("out")

    try:
        geometry = Geometry(
            theta=float(theta_pi) * math.pi,
            phi=float(phi_pi) * math.pi,
            r_over_lambda=float(r),
        )
        grid = TimeGrid(t_max=float(tmax), dt=float(dt), sample_every=sample_every)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    return SimConfig(
        model=_MODEL_NAMES[model_raw],
        geometry=geometry,
        delta=float(delta),
        grid=grid,
        initial_state=initial,
        observables=observables,
        output_path=out,
    )
