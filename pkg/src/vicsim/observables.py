"""Read observables off sampled trajectories, plus analytic references.

All extractors are frame aware: a trajectory propagated in the rotating
frame is mapped back to the interaction picture element by element before
anything is reported, so observable values never depend on the frame the
integration happened to run in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .coupling import CouplingSet
from .dynamics import Frame, basis_index
from .integrate import Trajectory

__all__ = [
    "ObservableSeries",
    "matrix_element",
    "population",
    "excited_coherence_A",
    "observable_series",
    "perturbative_p32",
    "single_atom_baseline",
    "POPULATION_LABEL_RE",
]

POPULATION_LABEL_RE = re.compile(r"^p_([123])([123])$")


@dataclass(frozen=True)
class ObservableSeries:
    """One observable sampled along a trajectory."""

    times: np.ndarray
    values: np.ndarray
    label: str


def matrix_element(
    traj: Trajectory, bra: tuple[int, int], ket: tuple[int, int]
) -> ObservableSeries:
    """Series of <bra| rho |ket> in the interaction picture.

    bra/ket are (i_A, j_B) level pairs.  Rotating-frame trajectories get
    the element-wise phase exp(i*delta*t*(n2[ket] - n2[bra])) restored,
    where n2 counts atoms in level |2|.
    """
    m = basis_index(*bra)
    n = basis_index(*ket)
    values = traj.states[:, m, n].copy()
    if traj.params.frame is Frame.ROTATING and traj.params.delta != 0.0:
        n2 = lambda pair: (pair[0] == 2) + (pair[1] == 2)
        dn = n2(ket) - n2(bra)
        if dn != 0:
            values *= np.exp(1j * traj.params.delta * traj.times * dn)
    label = f"rho[{bra[0]}A{bra[1]}B;{ket[0]}A{ket[1]}B]"
    return ObservableSeries(times=traj.times.copy(), values=values, label=label)


def population(traj: Trajectory, i: int, j: int) -> ObservableSeries:
    """Occupation probability of |i_A, j_B> along the trajectory (real)."""
    k = basis_index(i, j)
    values = np.real(traj.states[:, k, k]).copy()
    return ObservableSeries(
        times=traj.times.copy(), values=values, label=f"p_{i}{j}"
    )


def excited_coherence_A(traj: Trajectory) -> ObservableSeries:
    """Atom-A doublet coherence <1_A,3_B| rho |2_A,3_B> (complex).

    Nonzero only through the unlike-transition vacuum coupling; it is the
    direct witness of the induced coherence between levels that share no
    driving and no common decay channel on the same atom.
    """
    series = matrix_element(traj, (1, 3), (2, 3))
    return ObservableSeries(
        times=series.times, values=series.values, label="rho12A"
    )


def observable_series(traj: Trajectory, label: str) -> ObservableSeries:
    """Dispatch a CSV/CLI observable label to its extractor."""
    m = POPULATION_LABEL_RE.match(label)
    if m:
        return population(traj, int(m.group(1)), int(m.group(2)))
    if label == "rho12A":
        return excited_coherence_A(traj)
    raise ValueError(f"unknown observable label {label!r}")


def perturbative_p32(coeffs: CouplingSet, delta: float, t):
    """Lowest-order transfer probability into |3_A, 2_B> from |1_A, 3_B>.

    Returns 4*|GammaVc + i*OmegaVc|^2 * sin^2(delta*t/2)/delta^2, with the
    analytic small-argument limit t^2/4 substituted when |delta*t| < 1e-6.
    Valid only while the source population is still ~1 (short times, weak
    cross coupling).  For the circular-dipole model the prefactor reduces
    to |GammaVc|^2 + |OmegaVc|^2 because both coefficients share a phase.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0):
        raise ValueError("time must be non-negative")
    amp = 4.0 * abs(coeffs.GammaVc + 1j * coeffs.OmegaVc) ** 2
    if delta == 0.0:
        osc = 0.25 * t_arr * t_arr
    else:
        small = np.abs(delta * t_arr) < 1e-6
        osc = np.where(
            small,
            0.25 * t_arr * t_arr,
            np.sin(0.5 * delta * t_arr) ** 2 / (delta * delta),
        )
    out = amp * osc
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def single_atom_baseline(gamma: float, t):
    """Isolated-atom excited population exp(-2*gamma*t) (decoupling check)."""
    t_arr = np.asarray(t, dtype=float)
    out = np.exp(-2.0 * gamma * t_arr)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out
