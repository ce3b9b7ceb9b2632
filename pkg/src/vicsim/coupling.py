"""Retarded dipole-dipole couplings between two three-level V-type emitters.

Each atom carries an excited doublet |1>, |2> decaying to a common ground
state |3>.  When two such atoms sit a fraction of a wavelength apart, the
shared vacuum correlates their transitions.  This module computes the eight
coefficients that drive the pair master equation:

* ``gamma1, gamma2``    single-atom half widths (population of an isolated
  excited state decays as ``exp(-2*gamma_i*t)``),
* ``Gamma1, Gamma2``    cross damping between like transitions on the two
  atoms, ``Omega1, Omega2`` the matching collective level shifts,
* ``GammaVc, OmegaVc``  vacuum-induced cross coupling between the *unlike*
  transitions (transition 1 on one atom with transition 2 on the other).
  These vanish unless the two dipoles see anisotropic retardation, i.e.
  they are a pure interference effect of the shared vacuum.

Conventions: lengths in wavelengths, rates in units of ``gamma``.  Atom A is
at the origin; atom B sits at polar angle ``theta`` (from the z axis),
azimuth ``phi``, distance ``r_over_lambda`` wavelengths, so the
dimensionless separation is ``zeta = 2*pi*r_over_lambda``.

Angles within ~1e-12 half-turns of a multiple of pi/2 are evaluated with
exact trig values so the geometric nulls (e.g. atoms on the z axis) come
out identically zero instead of ~1e-16 float residue.  The command line
accepts angles in units of pi, which lands all special cases on the snap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

__all__ = [
    "Geometry",
    "RadialFunctions",
    "DipoleModel",
    "CouplingSet",
    "MIN_ZETA",
    "radial_functions",
    "chi_tensor",
    "dipole_vectors",
    "coupling_from_chi",
    "coupling_real_dipoles",
    "coupling_spherical",
    "coupling_for_model",
]

# Below this separation the point-dipole field model is not trustworthy and
# the 1/zeta^3 terms cancel catastrophically in floats; reject rather than
# silently degrade.
MIN_ZETA = 1e-4

_HALF_TURN_SNAP = 1e-12

_SIN_TABLE = (0.0, 1.0, 0.0, -1.0)
_COS_TABLE = (1.0, 0.0, -1.0, 0.0)


def _half_turn_index(angle: float) -> int | None:
    """Integer k when ``angle`` is (up to float rounding) k*pi/2, else None."""
    u = 2.0 * angle / math.pi
    k = round(u)
    if abs(u - k) < _HALF_TURN_SNAP:
        return int(k)
    return None


def _sin(angle: float) -> float:
    k = _half_turn_index(angle)
    return _SIN_TABLE[k % 4] if k is not None else math.sin(angle)


def _cos(angle: float) -> float:
    k = _half_turn_index(angle)
    return _COS_TABLE[k % 4] if k is not None else math.cos(angle)


@dataclass(frozen=True)
class Geometry:
    """Relative placement of atom B with respect to atom A.

    theta, phi in radians; r_over_lambda in units of the transition
    wavelength.  Must satisfy r_over_lambda > 0.
    """

    theta: float
    phi: float
    r_over_lambda: float

    def __post_init__(self) -> None:
        for name in ("theta", "phi", "r_over_lambda"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"Geometry.{name} must be finite")
        if not self.r_over_lambda > 0.0:
            raise ValueError("atoms must be separated: r_over_lambda > 0")

    @property
    def zeta(self) -> float:
        """Dimensionless separation 2*pi*r/lambda."""
        return 2.0 * math.pi * self.r_over_lambda

    def unit_vector(self) -> np.ndarray:
        """Cartesian unit vector from atom A to atom B."""
        st, ct = _sin(self.theta), _cos(self.theta)
        sp, cp = _sin(self.phi), _cos(self.phi)
        return np.array([st * cp, st * sp, ct])


@dataclass(frozen=True)
class RadialFunctions:
    """The four radial profiles of the retarded dipole field.

    Pr/Pi are the real/imaginary profiles multiplying the isotropic part,
    Qr/Qi the ones multiplying the projector on the separation axis.
    Small-separation behaviour: Pi -> 2/3, Qi -> -zeta**2/15, while Pr and
    Qr diverge as -1/zeta**3 and -3/zeta**3 (static dipole field).
    """

    Pr: float
    Pi: float
    Qr: float
    Qi: float


def radial_functions(zeta: float) -> RadialFunctions:
    """Evaluate the radial profiles at dimensionless separation ``zeta``.

    Raises ValueError for zeta < MIN_ZETA (including non-positive values);
    the closed forms are evaluated directly, with no series switchover.
    """
    if not (isinstance(zeta, (int, float)) and math.isfinite(zeta)):
        raise ValueError("zeta must be a finite real number")
    if zeta < MIN_ZETA:
        raise ValueError(
            f"zeta={zeta!r} below model validity ({MIN_ZETA}); "
            "atoms are effectively coincident"
        )
    s, c = math.sin(zeta), math.cos(zeta)
    z1 = 1.0 / zeta
    z2 = z1 * z1
    z3 = z2 * z1
    return RadialFunctions(
        Pr=c * z1 - s * z2 - c * z3,
        Pi=s * z1 + c * z2 - s * z3,
        Qr=c * z1 - 3.0 * s * z2 - 3.0 * c * z3,
        Qi=s * z1 + 3.0 * c * z2 - 3.0 * s * z3,
    )


def chi_tensor(geom: Geometry) -> np.ndarray:
    """Field-response tensor of the retarded dipole field, scaled by k0^3.

    Returns the symmetric complex 3x3 matrix
    ``p(zeta) * I - q(zeta) * outer(rhat, rhat)`` with
    ``p = Pr + i*Pi`` and ``q = Qr + i*Qi``.  Equals the double gradient
    (plus k0^2 times identity) of the outgoing spherical wave
    ``exp(i*zeta)/zeta`` with respect to the endpoints of the separation.
    """
    rf = radial_functions(geom.zeta)
    p = complex(rf.Pr, rf.Pi)
    q = complex(rf.Qr, rf.Qi)
    n = geom.unit_vector()
    return p * np.eye(3, dtype=complex) - q * np.outer(n, n)


class DipoleModel(Enum):
    """Dipole-orientation models for the excited doublet."""

    REAL_ORTHOGONAL = "real"
    SPHERICAL_COMPLEX = "spherical"


def dipole_vectors(model: DipoleModel) -> tuple[np.ndarray, np.ndarray]:
    """Unit dipole vectors (d1, d2) of transitions 1 and 2 for ``model``.

    REAL_ORTHOGONAL: d1 = x, d2 = y (linear, mutually orthogonal).
    SPHERICAL_COMPLEX: circular pair d1 = -(x - i y)/sqrt(2),
    d2 = (x + i y)/sqrt(2), the sigma-+/- components of a J=1 doublet.
    """
    if model is DipoleModel.REAL_ORTHOGONAL:
        d1 = np.array([1.0, 0.0, 0.0], dtype=complex)
        d2 = np.array([0.0, 1.0, 0.0], dtype=complex)
    elif model is DipoleModel.SPHERICAL_COMPLEX:
        inv = 1.0 / math.sqrt(2.0)
        d1 = np.array([-inv, 1j * inv, 0.0])
        d2 = np.array([inv, 1j * inv, 0.0])
    else:
        raise ValueError(f"unknown dipole model: {model!r}")
    return d1, d2


@dataclass(frozen=True)
class CouplingSet:
    """The eight coefficients of the pair master equation.

    gamma1/gamma2 are real single-atom half widths; the six collective
    entries are stored as complex uniformly (they are real for the
    REAL_ORTHOGONAL model, and GammaVc/OmegaVc carry a phase e^{2i*phi}
    for SPHERICAL_COMPLEX).
    """

    gamma1: float
    gamma2: float
    Gamma1: complex
    Gamma2: complex
    Omega1: complex
    Omega2: complex
    GammaVc: complex
    OmegaVc: complex

    def without_cross_coupling(self) -> "CouplingSet":
        """Copy with the unlike-transition terms forced to zero (control case)."""
        return replace(self, GammaVc=0j, OmegaVc=0j)


_ORTHO_TOL = 1e-9


def coupling_from_chi(
    d1: np.ndarray, d2: np.ndarray, chi: np.ndarray, gamma: float = 1.0
) -> CouplingSet:
    """Coefficients from dipole vectors and the field tensor directly.

    Sandwiches the elementwise real and imaginary parts of ``chi`` between
    the unit dipoles: damping entries come from Im chi, level shifts from
    Re chi, with prefactor 3*gamma/2.  The cross entries place d2 on the
    left and conj(d1) on the right.  Requires |d1| == |d2| and
    d1 . conj(d2) == 0 (orthogonal transition dipoles).
    """
    d1 = np.asarray(d1, dtype=complex)
    d2 = np.asarray(d2, dtype=complex)
    if d1.shape != (3,) or d2.shape != (3,):
        raise ValueError("dipole vectors must be 3-vectors")
    n1 = np.linalg.norm(d1)
    n2 = np.linalg.norm(d2)
    if n1 == 0.0 or n2 == 0.0:
        raise ValueError("dipole vectors must be nonzero")
    if abs(n1 - n2) > _ORTHO_TOL * max(n1, n2):
        raise ValueError("transition dipoles must have equal magnitude")
    if abs(d1 @ d2.conj()) > _ORTHO_TOL * n1 * n2:
        raise ValueError("transition dipoles must be orthogonal: d1 . conj(d2) == 0")
    e1 = d1 / n1
    e2 = d2 / n2

    scale = 1.5 * gamma
    im = chi.imag
    re = chi.real

    def sand(a: np.ndarray, mat: np.ndarray, b: np.ndarray) -> complex:
        return complex(a @ mat @ b.conj())

    return CouplingSet(
        gamma1=gamma,
        gamma2=gamma,
        Gamma1=scale * sand(e1, im, e1),
        Gamma2=scale * sand(e2, im, e2),
        Omega1=scale * sand(e1, re, e1),
        Omega2=scale * sand(e2, re, e2),
        GammaVc=scale * sand(e2, im, e1),
        OmegaVc=scale * sand(e2, re, e1),
    )


def coupling_real_dipoles(geom: Geometry, gamma: float = 1.0) -> CouplingSet:
    """Closed-form coefficients for linear dipoles d1 = x, d2 = y.

    All eight entries are real.  The unlike-transition pair is
    proportional to sin(theta)^2 sin(phi) cos(phi), so it vanishes on the
    z axis and in the x-z / y-z planes.
    """
    rf = radial_functions(geom.zeta)
    st = _sin(geom.theta)
    sp = _sin(geom.phi)
    cp = _cos(geom.phi)
    s2 = st * st
    g = 1.5 * gamma
    cross = -g * s2 * sp * cp
    return CouplingSet(
        gamma1=gamma,
        gamma2=gamma,
        Gamma1=complex(g * (rf.Pi - s2 * cp * cp * rf.Qi)),
        Gamma2=complex(g * (rf.Pi - s2 * sp * sp * rf.Qi)),
        Omega1=complex(g * (rf.Pr - s2 * cp * cp * rf.Qr)),
        Omega2=complex(g * (rf.Pr - s2 * sp * sp * rf.Qr)),
        GammaVc=complex(cross * rf.Qi),
        OmegaVc=complex(cross * rf.Qr),
    )


def coupling_spherical(geom: Geometry, gamma: float = 1.0) -> CouplingSet:
    """Closed-form coefficients for the circular dipole pair.

    Like-transition entries are azimuth independent; the unlike-transition
    pair carries the phase e^{2i*phi} and the same sin(theta)^2 envelope,
    so only the theta nulls survive for this model.
    """
    rf = radial_functions(geom.zeta)
    st = _sin(geom.theta)
    s2 = st * st
    g = 0.75 * gamma
    like_damp = complex(g * (2.0 * rf.Pi - s2 * rf.Qi))
    like_shift = complex(g * (2.0 * rf.Pr - s2 * rf.Qr))
    if s2 == 0.0:
        cross = 0j
    else:
        cross = g * s2 * complex(_cos(2.0 * geom.phi), _sin(2.0 * geom.phi))
    return CouplingSet(
        gamma1=gamma,
        gamma2=gamma,
        Gamma1=like_damp,
        Gamma2=like_damp,
        Omega1=like_shift,
        Omega2=like_shift,
        GammaVc=cross * rf.Qi,
        OmegaVc=cross * rf.Qr,
    )


def coupling_for_model(
    model: DipoleModel, geom: Geometry, gamma: float = 1.0
) -> CouplingSet:
    """Dispatch to the closed-form coefficient routine for ``model``."""
    if model is DipoleModel.REAL_ORTHOGONAL:
        return coupling_real_dipoles(geom, gamma)
    if model is DipoleModel.SPHERICAL_COMPLEX:
        return coupling_spherical(geom, gamma)
    raise ValueError(f"unknown dipole model: {model!r}")
