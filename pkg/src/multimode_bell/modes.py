"""Propagation directions, transverse frames and detected-mode sets.

All vectors are expressed in a fixed Cartesian lab frame (x, y, z).  A
``Direction`` is given by its spherical angles with respect to that frame;
its attached transverse frame follows the usual tilted-polarizer convention

    x' =  x cos(theta) cos(phi) + y cos(theta) sin(phi) - z sin(theta)
    y' = -x sin(phi)            + y cos(phi)
    z' =  x sin(theta) cos(phi) + y sin(theta) sin(phi) + z cos(theta)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._linalg import frozen
from .errors import DomainError

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# Cone membership slack; grid points on the rim land within a few ulps of cos(aperture).
_CONE_SLACK = 1e-12

# linear (x', y') amplitudes = HELICITY_TO_LINEAR @ helicity (+, -) amplitudes
HELICITY_TO_LINEAR = frozen(np.array([[1.0, 1.0], [1j, -1j]]) / math.sqrt(2.0))
LINEAR_TO_HELICITY = frozen(HELICITY_TO_LINEAR.conj().T)


def _canonical_phi(phi: float) -> float:
    phi = float(phi) % TWO_PI
    if phi >= TWO_PI:  # tiny negative inputs round up to exactly 2*pi
        phi = 0.0
    return phi + 0.0


@dataclass(frozen=True)
class Direction:
    """Propagation direction with polar angle below pi/2 (forward hemisphere)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not math.isfinite(theta) or not (0.0 <= theta < HALF_PI):
            raise DomainError(f"theta={theta!r} outside [0, pi/2)")
        if not math.isfinite(float(self.phi)):
            raise DomainError(f"phi={self.phi!r} is not finite")
        object.__setattr__(self, "theta", theta + 0.0)
        object.__setattr__(self, "phi", _canonical_phi(self.phi))

    @classmethod
    def from_vector(cls, v) -> "Direction":
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise DomainError("zero vector has no direction")
        x, y, z = v / n
        theta = math.atan2(math.hypot(x, y), z)
        phi = math.atan2(y, x) if (x != 0.0 or y != 0.0) else 0.0
        return cls(theta, phi)

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def to_dict(self) -> dict:
        return {"theta": self.theta, "phi": self.phi}

    @classmethod
    def from_dict(cls, d: dict) -> "Direction":
        return cls(d["theta"], d.get("phi", 0.0))


@dataclass(frozen=True, eq=False)
class LocalFrame:
    """Right-handed orthonormal triple; ``z_axis`` is the propagation (or polarizer) axis."""

    x_axis: np.ndarray
    y_axis: np.ndarray
    z_axis: np.ndarray

    def __post_init__(self):
        for name in ("x_axis", "y_axis", "z_axis"):
            object.__setattr__(self, name, frozen(np.asarray(getattr(self, name), dtype=float)))

    @property
    def matrix(self) -> np.ndarray:
        """Rows are the frame axes, so ``matrix @ v`` gives frame coordinates of ``v``."""
        return np.vstack([self.x_axis, self.y_axis, self.z_axis])

    def is_orthonormal(self, atol: float = 1e-12) -> bool:
        m = self.matrix
        return bool(
            np.allclose(m @ m.T, np.eye(3), rtol=0, atol=atol)
            and np.allclose(np.cross(self.x_axis, self.y_axis), self.z_axis, rtol=0, atol=atol)
        )

    def direction_of(self, v) -> Direction:
        """Spherical angles of the lab vector ``v`` measured in this frame."""
        return Direction.from_vector(self.matrix @ np.asarray(v, dtype=float))

    @classmethod
    def from_dict(cls, d: dict) -> "LocalFrame":
        """Build from ``{"theta", "phi"}`` (the frame of that direction) or explicit axes."""
        if "x_axis" in d:
            return cls(d["x_axis"], d["y_axis"], d["z_axis"])
        return local_frame(Direction.from_dict(d))


IDENTITY_FRAME = LocalFrame(np.eye(3)[0], np.eye(3)[1], np.eye(3)[2])


def local_frame(d: Direction) -> LocalFrame:
    ct, st = math.cos(d.theta), math.sin(d.theta)
    cp, sp = math.cos(d.phi), math.sin(d.phi)
    return LocalFrame(
        np.array([ct * cp, ct * sp, -st]),
        np.array([-sp, cp, 0.0]),
        np.array([st * cp, st * sp, ct]),
    )


@dataclass(frozen=True, eq=False)
class HelicityBasis:
    f_plus: np.ndarray
    f_minus: np.ndarray


def helicity_basis(frame: LocalFrame) -> HelicityBasis:
    """Circular polarization vectors ``(x' + i s y')/sqrt(2)`` for s = +1, -1."""
    r = 1.0 / math.sqrt(2.0)
    return HelicityBasis(
        frozen(r * (frame.x_axis + 1j * frame.y_axis)),
        frozen(r * (frame.x_axis - 1j * frame.y_axis)),
    )


@dataclass(frozen=True)
class ModeSet:
    """Ordered set of detected plane-wave modes inside a cone about ``reference``.

    A mode is detected when ``k . k0 >= cos(aperture)``; back-scattered
    directions are never part of the set.
    """

    modes: tuple[Direction, ...]
    aperture: float
    reference: Direction

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        aperture = float(self.aperture)
        if not (0.0 <= aperture < HALF_PI):
            raise DomainError(f"aperture={aperture!r} outside [0, pi/2)")
        object.__setattr__(self, "aperture", aperture)
        if not self.modes:
            raise DomainError("a mode set needs at least one mode")
        if len(set(self.modes)) != len(self.modes):
            raise DomainError("duplicate modes in mode set")
        k0 = self.reference.unit_vector()
        cos_ap = math.cos(aperture)
        for m in self.modes:
            if float(m.unit_vector() @ k0) < cos_ap - _CONE_SLACK:
                raise DomainError(f"mode {m} lies outside the detection cone")

    def __len__(self) -> int:
        return len(self.modes)

    def __iter__(self) -> Iterator[Direction]:
        return iter(self.modes)

    def __getitem__(self, i: int) -> Direction:
        return self.modes[i]

    def index(self, d: Direction) -> int:
        return self.modes.index(d)

    def frames(self) -> list[LocalFrame]:
        return [local_frame(m) for m in self.modes]

    def to_dict(self) -> dict:
        return {
            "reference": self.reference.to_dict(),
            "aperture": self.aperture,
            "modes": [m.to_dict() for m in self.modes],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModeSet":
        return cls(
            tuple(Direction.from_dict(m) for m in d["modes"]),
            d["aperture"],
            Direction.from_dict(d["reference"]),
        )

    @classmethod
    def single(cls, d: Direction) -> "ModeSet":
        return cls((d,), 0.0, d)


def cap_grid(reference: Direction, aperture: float, n_theta: int, n_phi: int) -> ModeSet:
    """Deterministic polar grid of modes inside the cone of half-angle ``aperture``.

    The reference itself comes first, followed by ``n_theta`` rings at polar
    offsets ``aperture * j / n_theta`` (j = 1..n_theta), each holding
    ``n_phi`` equally spaced azimuths measured in the reference's local frame.
    """
    aperture = float(aperture)
    if not (0.0 <= aperture < HALF_PI):
        raise DomainError(f"aperture={aperture!r} outside [0, pi/2)")
    if n_theta < 1 or n_phi < 1:
        raise DomainError("n_theta and n_phi must be >= 1")
    if aperture == 0.0:
        return ModeSet((reference,), 0.0, reference)

    frame = local_frame(reference)
    modes: list[Direction] = [reference]
    for j in range(1, n_theta + 1):
        t = aperture * j / n_theta
        st, ct = math.sin(t), math.cos(t)
        for m in range(n_phi):
            psi = TWO_PI * m / n_phi
            v = st * math.cos(psi) * frame.x_axis + st * math.sin(psi) * frame.y_axis + ct * frame.z_axis
            modes.append(Direction.from_vector(v))
    return ModeSet(tuple(modes), aperture, reference)

