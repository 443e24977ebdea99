"""Lossless linear polarizer seen by an obliquely incident plane wave.

Two routes are provided for every quantity.  The vector route projects the
polarizer orientation ``p`` onto the plane transverse to the photon momentum
and works for any polarizer frame.  The closed forms (suffix ``_closed_form``
or the scalar functions below) are written for a polarizer whose axis is the
lab ``z`` axis and serve as the independent check of the vector route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._linalg import PAULI, frozen
from .errors import SingularGeometryError
from .modes import IDENTITY_FRAME, Direction, LocalFrame, local_frame

# Smallest admissible norm of p projected on the transverse plane.
MIN_PROJECTION = 1e-9
# Smallest admissible denominator in the closed-form W matrix.
MIN_W_DENOMINATOR = 1e-18


@dataclass(frozen=True)
class Polarizer:
    """Linear polarizer with orientation ``p = x cos(beta) + y sin(beta)`` in its own frame."""

    beta: float
    axis_frame: LocalFrame = field(default=IDENTITY_FRAME, compare=False)

    @property
    def orientation(self) -> np.ndarray:
        return math.cos(self.beta) * self.axis_frame.x_axis + math.sin(self.beta) * self.axis_frame.y_axis

    @property
    def axis(self) -> np.ndarray:
        return self.axis_frame.z_axis


@dataclass(frozen=True, eq=False)
class JonesMatrix:
    """Real symmetric rank-1 projector acting on (x', y') field components."""

    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", frozen(np.asarray(self.t, dtype=float)))


@dataclass(frozen=True, eq=False)
class WMatrix:
    """Overlaps <sigma(z)|alpha'(z')>; rows are polarizer states x, y, columns are x', y'."""

    w: np.ndarray
    incidence: Direction

    def __post_init__(self):
        object.__setattr__(self, "w", frozen(np.asarray(self.w, dtype=float)))


def _transverse_components(p: np.ndarray, frame: LocalFrame) -> tuple[np.ndarray, float]:
    """Normalized (x', y') components of ``p`` projected on the plane normal to ``frame.z_axis``."""
    px = float(p @ frame.x_axis)
    py = float(p @ frame.y_axis)
    norm = math.hypot(px, py)
    if norm < MIN_PROJECTION:
        raise SingularGeometryError(
            f"polarizer orientation is parallel to the propagation direction (D={norm:.3g})"
        )
    return np.array([px / norm, py / norm]), norm


def transmitted_polarization(pol: Polarizer, d: Direction) -> tuple[np.ndarray, float]:
    """Unit 3-vector of the transmitted field and the normalization ``D``.

    ``d`` is a lab direction; ``D = sqrt(1 - (z'.p)^2)``.
    """
    frame = local_frame(d)
    e, norm = _transverse_components(pol.orientation, frame)
    return e[0] * frame.x_axis + e[1] * frame.y_axis, norm


def projected_state(pol: Polarizer, d: Direction) -> np.ndarray:
    """Amplitudes of the state selected by ``pol`` in the photon's (x', y') basis."""
    return _transverse_components(pol.orientation, local_frame(d))[0]


def jones_matrix(pol: Polarizer, d: Direction) -> JonesMatrix:
    e = projected_state(pol, d)
    return JonesMatrix(np.outer(e, e))


def jones_closed_form(beta: float, theta: float, phi: float = 0.0) -> np.ndarray:
    """Jones matrix of a z-axis polarizer as an explicit function of the three angles."""
    b = beta - phi
    c, s = math.cos(b), math.sin(b)
    ct, st = math.cos(theta), math.sin(theta)
    den = 1.0 - st * st * c * c
    if den < MIN_PROJECTION**2:
        raise SingularGeometryError("grazing incidence: Jones matrix undefined")
    return np.array([[ct * ct * c * c, ct * s * c], [ct * s * c, s * s]]) / den


def state_overlap(alpha: float, beta: float, d: Direction) -> float:
    """<psi(alpha)|psi(beta)> for states selected by z-axis polarizers at angles alpha, beta."""
    a, b = alpha - d.phi, beta - d.phi
    ct2 = math.cos(d.theta) ** 2
    st2 = math.sin(d.theta) ** 2
    den_a = 1.0 - math.cos(a) ** 2 * st2
    den_b = 1.0 - math.cos(b) ** 2 * st2
    if min(den_a, den_b) < MIN_PROJECTION**2:
        raise SingularGeometryError("grazing incidence: overlap undefined")
    num = ct2 * math.cos(a) * math.cos(b) + math.sin(a) * math.sin(b)
    return num / math.sqrt(den_a * den_b)


def orthogonality_angle(beta: float, theta: float) -> float:
    """Rotation ``xi`` of the polarizer (phi = 0) that yields a state orthogonal to psi(beta).

    Reduces to pi/2 at normal incidence; for tilted photons the physical
    polarizer orientations of an orthogonal pair are not perpendicular.
    """
    cb, sb = math.cos(beta), math.sin(beta)
    st2 = math.sin(theta) ** 2
    ct2 = math.cos(theta) ** 2
    x = sb * cb * st2 / math.sqrt(1.0 - cb * cb * st2 * (1.0 + ct2))
    return math.pi - math.acos(max(-1.0, min(1.0, x)))


def w_matrix(d: Direction, axis_frame: LocalFrame = IDENTITY_FRAME) -> WMatrix:
    """Non-unitary change of basis from the photon's (x', y') states to the polarizer's (x, y) states.

    Row ``sigma`` holds the (x', y') amplitudes of the state transmitted by a
    polarizer oriented along ``axis_frame``'s sigma axis, so each row has unit
    norm while the columns in general do not.
    """
    frame = local_frame(d)
    rows = [_transverse_components(p, frame)[0] for p in (axis_frame.x_axis, axis_frame.y_axis)]
    return WMatrix(np.vstack(rows), d)


def w_closed_form(theta: float, phi: float) -> np.ndarray:
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    den_x = 1.0 - cp * cp * st * st
    den_y = 1.0 - sp * sp * st * st
    if min(den_x, den_y) < MIN_W_DENOMINATOR:
        raise SingularGeometryError("grazing incidence: W matrix undefined")
    rx, ry = math.sqrt(den_x), math.sqrt(den_y)
    return np.array([[cp * ct / rx, -sp / rx], [sp * ct / ry, cp / ry]])


def bloch_vector(jones: JonesMatrix) -> np.ndarray:
    """(Tr T sigma_1, Tr T sigma_2, Tr T sigma_3); the middle entry vanishes for symmetric T."""
    t = jones.t
    return np.array([np.real(np.trace(t @ s)) for s in PAULI[1:]])
