"""Product-space operators and the pair master equation right-hand side.

Basis: product kets |i_A, j_B> with i, j in {1, 2, 3}, flattened to index
``3*(i-1) + (j-1)``.  Levels |1>, |2> form the excited doublet, |3> is the
ground state.  The lowering operators per atom are alpha = |3><1| and
beta = |3><2| embedded in the 9-dimensional product space.

The equation of motion is written in the interaction picture.  Like
transitions on the two atoms exchange excitation through the collective
damping/shift terms; unlike transitions couple through the vacuum-induced
cross terms, which oscillate at the excited-doublet splitting ``delta``:
terms converting a transition-1 excitation into transition-2 carry
``exp(-i*delta*t)``, the conjugate family carries ``exp(+i*delta*t)``.
A rotating frame generated by ``U = exp(i*delta*t*N2)`` (N2 counts atoms
in level |2>) removes the explicit time dependence at the price of the
commutator ``+i*delta*[N2, rho]``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .coupling import CouplingSet

__all__ = [
    "DIM",
    "Frame",
    "ModelParams",
    "basis_index",
    "parse_state_label",
    "pure_state",
    "lowering_op",
    "number_op_level2",
    "dissipator_term",
    "rhs_interaction",
    "rhs_rotating",
    "make_rhs",
    "rotating_to_interaction",
    "density_metrics",
]

DIM = 9

# Invariant thresholds used by the propagation monitors.
TRACE_TOL = 1e-8
HERM_TOL = 1e-10
EIG_TOL = -1e-6


def basis_index(i: int, j: int) -> int:
    """Flat index of |i_A, j_B>."""
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValueError(f"levels must be in 1..3, got ({i}, {j})")
    return 3 * (i - 1) + (j - 1)


def parse_state_label(label: str) -> tuple[int, int]:
    """Parse a product-state label like ``"1A3B"`` into level numbers."""
    s = label.strip().upper()
    if len(s) == 4 and s[1] == "A" and s[3] == "B" and s[0] in "123" and s[2] in "123":
        return int(s[0]), int(s[2])
    raise ValueError(f"bad state label {label!r}; expected e.g. '1A3B'")


def pure_state(i: int, j: int) -> np.ndarray:
    """Density matrix of the product state |i_A, j_B>."""
    rho = np.zeros((DIM, DIM), dtype=complex)
    k = basis_index(i, j)
    rho[k, k] = 1.0
    return rho


_I3 = np.eye(3)
_LOWER_1 = np.zeros((3, 3))
_LOWER_1[2, 0] = 1.0  # |3><1|
_LOWER_2 = np.zeros((3, 3))
_LOWER_2[2, 1] = 1.0  # |3><2|


def lowering_op(atom: str, transition: int) -> np.ndarray:
    """Lowering operator |3><transition| of one atom in the product space."""
    if transition == 1:
        single = _LOWER_1
    elif transition == 2:
        single = _LOWER_2
    else:
        raise ValueError(f"transition must be 1 or 2, got {transition!r}")
    a = atom.upper()
    if a == "A":
        return np.kron(single, _I3).astype(complex)
    if a == "B":
        return np.kron(_I3, single).astype(complex)
    raise ValueError(f"atom must be 'A' or 'B', got {atom!r}")


ALPHA_A = lowering_op("A", 1)
ALPHA_B = lowering_op("B", 1)
BETA_A = lowering_op("A", 2)
BETA_B = lowering_op("B", 2)

_AD_A = ALPHA_A.conj().T
_AD_B = ALPHA_B.conj().T
_BD_A = BETA_A.conj().T
_BD_B = BETA_B.conj().T

# Exchange operators move one excitation between atoms within a transition;
# cross operators convert a transition-1 excitation on one atom into a
# transition-2 excitation on the other.
_EXCH_1 = _AD_A @ ALPHA_B   # alpha_A^dag alpha_B
_EXCH_2 = _BD_A @ BETA_B    # beta_A^dag  beta_B
_CROSS_AB = _BD_A @ ALPHA_B  # beta_A^dag alpha_B
_CROSS_BA = _BD_B @ ALPHA_A  # beta_B^dag alpha_A


def number_op_level2() -> np.ndarray:
    """Number operator counting atoms in level |2> (diagonal, values 0..2)."""
    return _BD_A @ BETA_A + _BD_B @ BETA_B


_N2 = number_op_level2()
_N2_DIAG = np.real(np.diag(_N2)).copy()


class Frame(Enum):
    """Reference frame the state is propagated in."""

    INTERACTION = "interaction"
    ROTATING = "rotating"


@dataclass(frozen=True)
class ModelParams:
    """Everything the equation of motion needs besides the state itself."""

    coeffs: CouplingSet
    delta: float = 0.0
    frame: Frame = Frame.INTERACTION

    def __post_init__(self) -> None:
        if self.delta < 0.0:
            raise ValueError("delta must be >= 0 (label the upper level as |1>)")


def dissipator_term(X: np.ndarray, Y: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """The recurring damping bracket X Y rho - 2 Y rho X + rho X Y."""
    return X @ Y @ rho - 2.0 * (Y @ rho @ X) + rho @ X @ Y


def _comm(M: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return M @ rho - rho @ M


def _rhs_static(rho: np.ndarray, c: CouplingSet) -> np.ndarray:
    """Phase-free families: single-atom decay, like-transition collective
    damping, and the collective level shifts."""
    out = -c.gamma1 * (
        dissipator_term(_AD_A, ALPHA_A, rho) + dissipator_term(_AD_B, ALPHA_B, rho)
    )
    out -= c.gamma2 * (
        dissipator_term(_BD_A, BETA_A, rho) + dissipator_term(_BD_B, BETA_B, rho)
    )
    out -= c.Gamma1 * (
        dissipator_term(_AD_A, ALPHA_B, rho) + dissipator_term(_AD_B, ALPHA_A, rho)
    )
    out -= c.Gamma2 * (
        dissipator_term(_BD_A, BETA_B, rho) + dissipator_term(_BD_B, BETA_A, rho)
    )
    out += 1j * c.Omega1 * _comm(_EXCH_1, rho)
    out += 1j * np.conj(c.Omega1) * _comm(_EXCH_1.conj().T, rho)
    out += 1j * c.Omega2 * _comm(_EXCH_2, rho)
    out += 1j * np.conj(c.Omega2) * _comm(_EXCH_2.conj().T, rho)
    return out


def _rhs_cross_minus(rho: np.ndarray, c: CouplingSet) -> np.ndarray:
    """Unlike-transition family that carries exp(-i*delta*t): converts
    transition-1 excitations into transition-2 ones."""
    out = -c.GammaVc * (
        dissipator_term(_BD_A, ALPHA_B, rho) + dissipator_term(_BD_B, ALPHA_A, rho)
    )
    out += 1j * c.OmegaVc * (_comm(_CROSS_AB, rho) + _comm(_CROSS_BA, rho))
    return out


def _rhs_cross_plus(rho: np.ndarray, c: CouplingSet) -> np.ndarray:
    """Hermitian-conjugate family carrying exp(+i*delta*t)."""
    out = -np.conj(c.GammaVc) * (
        dissipator_term(_AD_B, BETA_A, rho) + dissipator_term(_AD_A, BETA_B, rho)
    )
    out += 1j * np.conj(c.OmegaVc) * (
        _comm(_CROSS_AB.conj().T, rho) + _comm(_CROSS_BA.conj().T, rho)
    )
    return out


def rhs_interaction(t: float, rho: np.ndarray, params: ModelParams) -> np.ndarray:
    """Interaction-picture time derivative of the density matrix.

    For Hermitian input the output is Hermitian and traceless (all terms
    are paired with their conjugates; every bracket is trace-free).
    """
    c = params.coeffs
    out = _rhs_static(rho, c)
    if params.delta == 0.0:
        return out + _rhs_cross_minus(rho, c) + _rhs_cross_plus(rho, c)
    phase = cmath.exp(-1j * params.delta * t)
    return (
        out
        + phase * _rhs_cross_minus(rho, c)
        + phase.conjugate() * _rhs_cross_plus(rho, c)
    )


def rhs_rotating(rho: np.ndarray, params: ModelParams) -> np.ndarray:
    """Time derivative in the frame co-rotating with the doublet splitting.

    Same families as the interaction picture with the oscillating phases
    stripped, plus the commutator +i*delta*[N2, rho] generated by the
    frame transformation U = exp(i*delta*t*N2).
    """
    c = params.coeffs
    out = _rhs_static(rho, c) + _rhs_cross_minus(rho, c) + _rhs_cross_plus(rho, c)
    if params.delta != 0.0:
        out += (1j * params.delta) * _comm(_N2, rho)
    return out


def _linear_map_matrix(apply_term: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Matrix of a linear map on 9x9 matrices in the flattened basis."""
    L = np.empty((DIM * DIM, DIM * DIM), dtype=complex)
    E = np.zeros((DIM, DIM), dtype=complex)
    for col in range(DIM * DIM):
        E.flat[col] = 1.0
        L[:, col] = apply_term(E).ravel()
        E.flat[col] = 0.0
    return L


def make_rhs(params: ModelParams) -> Callable[[float, np.ndarray], np.ndarray]:
    """Compile the right-hand side for fast repeated evaluation.

    The three term families are linear in rho, so each is converted once
    into an 81x81 matrix by applying it to the elementary matrices; the
    returned closure then costs a few matrix-vector products per call.
    Agrees with rhs_interaction / rhs_rotating by construction (and by
    test).  No propagator is ever exponentiated; stepping stays explicit.
    """
    c = params.coeffs
    delta = params.delta
    L_static = _linear_map_matrix(lambda r: _rhs_static(r, c))
    L_minus = _linear_map_matrix(lambda r: _rhs_cross_minus(r, c))
    L_plus = _linear_map_matrix(lambda r: _rhs_cross_plus(r, c))

    if params.frame is Frame.ROTATING:
        L_total = L_static + L_minus + L_plus
        if delta != 0.0:
            L_total += _linear_map_matrix(lambda r: (1j * delta) * _comm(_N2, r))

        def rhs(t: float, rho: np.ndarray) -> np.ndarray:
            return (L_total @ rho.ravel()).reshape(DIM, DIM)

        return rhs

    if delta == 0.0:
        L_total = L_static + L_minus + L_plus

        def rhs(t: float, rho: np.ndarray) -> np.ndarray:
            return (L_total @ rho.ravel()).reshape(DIM, DIM)

        return rhs

    def rhs(t: float, rho: np.ndarray) -> np.ndarray:
        v = rho.ravel()
        phase = cmath.exp(-1j * delta * t)
        return (
            L_static @ v + phase * (L_minus @ v) + phase.conjugate() * (L_plus @ v)
        ).reshape(DIM, DIM)

    return rhs


def rotating_to_interaction(rho: np.ndarray, t: float, delta: float) -> np.ndarray:
    """Map a rotating-frame state back to the interaction picture.

    Element (m, n) picks up exp(i*delta*t*(n2[n] - n2[m])) where n2 counts
    atoms in level |2>; populations are unchanged.
    """
    if delta == 0.0 or t == 0.0:
        return rho.copy()
    phases = np.exp(1j * delta * t * (_N2_DIAG[None, :] - _N2_DIAG[:, None]))
    return rho * phases


def density_metrics(rho: np.ndarray) -> tuple[float, float, float]:
    """(trace deviation, Hermiticity deviation, min eigenvalue) of a state.

    Used by the propagation monitors: |tr-1| must stay below TRACE_TOL,
    max|rho - rho^dag| below HERM_TOL, min eigenvalue above EIG_TOL.
    """
    trace_dev = abs(rho.trace() - 1.0)
    herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    return float(trace_dev), herm_dev, min_eig
