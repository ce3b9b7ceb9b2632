"""Fixed-step fifth-order propagation of the pair master equation.

The stepper is the six-stage Cash-Karp scheme.  The step size is fixed
(no error control); the embedded fourth-order solution is evaluated only
to log a running error diagnostic.  Trace, Hermiticity and positivity are
monitored at every stored sample and a breach aborts the run rather than
being silently repaired.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .coupling import Geometry
from .dynamics import (
    EIG_TOL,
    HERM_TOL,
    TRACE_TOL,
    Frame,
    ModelParams,
    density_metrics,
    make_rhs,
)

__all__ = [
    "TimeGrid",
    "Trajectory",
    "InvariantViolation",
    "rk5_step",
    "evolve",
]

log = logging.getLogger("vicsim")

# Cash-Karp tableau.
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 3.0 / 5.0, 1.0, 7.0 / 8.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0),
    (-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0),
    (
        1631.0 / 55296.0,
        175.0 / 512.0,
        575.0 / 13824.0,
        44275.0 / 110592.0,
        253.0 / 4096.0,
    ),
)
_B5 = (37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0)
_B4 = (
    2825.0 / 27648.0,
    0.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    1.0 / 4.0,
)
_B_ERR = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


class InvariantViolation(RuntimeError):
    """A propagated state stopped looking like a density matrix."""

    def __init__(self, step: int, time: float, metric: str, value: float):
        self.step = step
        self.time = time
        self.metric = metric
        self.value = value
        super().__init__(
            f"state invariant breached at step {step} (t={time:g}): "
            f"{metric} = {value:g}"
        )


@dataclass(frozen=True)
class TimeGrid:
    """Uniform integration grid: step dt up to t_max, storing every
    ``sample_every``-th step (plus the initial and final states)."""

    t_max: float = 5.0
    dt: float = 1e-3
    sample_every: int = 10

    def __post_init__(self) -> None:
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")
        if not self.t_max >= self.dt:
            raise ValueError("t_max must be at least one step")
        if self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_max / self.dt)))


def _rk5_stage_sum(y: np.ndarray, dt: float, k: list, coeffs: tuple) -> np.ndarray:
    acc = y.copy()
    for c, ki in zip(coeffs, k):
        if c != 0.0:
            acc += (dt * c) * ki
    return acc


def _rk5_step_err(
    y: np.ndarray, t: float, dt: float, rhs: Callable[[float, np.ndarray], np.ndarray]
) -> tuple[np.ndarray, float]:
    """One Cash-Karp step; returns the fifth-order result and the
    embedded-difference error estimate (max norm)."""
    k = [rhs(t, y)]
    for i in range(1, 6):
        k.append(rhs(t + _C[i] * dt, _rk5_stage_sum(y, dt, k, _A[i])))
    y5 = _rk5_stage_sum(y, dt, k, _B5)
    err = np.zeros_like(y)
    for c, ki in zip(_B_ERR, k):
        err += c * ki
    return y5, float(dt * np.max(np.abs(err)))


def rk5_step(
    y: np.ndarray, t: float, dt: float, rhs: Callable[[float, np.ndarray], np.ndarray]
) -> np.ndarray:
    """Advance any ndarray-valued ODE state by one fixed Cash-Karp step."""
    y5, _ = _rk5_step_err(y, t, dt, rhs)
    return y5


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of a single propagation.

    times[k] is the physical time of states[k] (shape (n, 9, 9)); params
    and geometry echo the inputs; max_embedded_error is the largest
    fourth/fifth-order embedded difference seen along the way (a
    diagnostic, never used for step control).
    """

    times: np.ndarray
    states: np.ndarray
    params: ModelParams
    geometry: Optional[Geometry] = None
    max_embedded_error: float = 0.0


def _check_state(rho: np.ndarray, step: int, t: float) -> None:
    if not np.all(np.isfinite(rho.view(np.float64))):
        raise InvariantViolation(step, t, "finiteness (NaN/Inf)", float("nan"))
    trace_dev, herm_dev, min_eig = density_metrics(rho)
    if trace_dev > TRACE_TOL:
        raise InvariantViolation(step, t, "trace deviation", trace_dev)
    if herm_dev > HERM_TOL:
        raise InvariantViolation(step, t, "Hermiticity deviation", herm_dev)
    if min_eig < EIG_TOL:
        raise InvariantViolation(step, t, "min eigenvalue", min_eig)


def evolve(
    rho0: np.ndarray,
    grid: TimeGrid,
    params: ModelParams,
    geometry: Optional[Geometry] = None,
) -> Trajectory:
    """Propagate ``rho0`` over ``grid`` under ``params``.

    Deterministic: identical inputs give bit-identical trajectories.
    Raises InvariantViolation if any sampled state stops being a valid
    density matrix (including the initial one).
    """
    rho = np.array(rho0, dtype=complex)
    if rho.shape != (9, 9):
        raise ValueError(f"state must be 9x9, got {rho.shape}")
    _check_state(rho, 0, 0.0)

    rhs = make_rhs(params)
    dt = grid.dt
    n_steps = grid.n_steps

    times = [0.0]
    states = [rho.copy()]
    worst_err = 0.0

    for step in range(1, n_steps + 1):
        t_prev = (step - 1) * dt
        rho, err = _rk5_step_err(rho, t_prev, dt, rhs)
        if err > worst_err:
            worst_err = err
        if step % grid.sample_every == 0 or step == n_steps:
            t_now = step * dt
            _check_state(rho, step, t_now)
            times.append(t_now)
            states.append(rho.copy())

    log.debug(
        "evolve: %d steps of %g (frame=%s), max embedded error %.3e",
        n_steps,
        dt,
        params.frame.value,
        worst_err,
    )
    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        params=params,
        geometry=geometry,
        max_embedded_error=worst_err,
    )
