"""Per-mode scattering amplitude models.

A model maps the linear polarization of the incident photon onto the local
(x', y') basis of each output mode through a complex 2x2 block
``S[alpha, xi] = <k, alpha(k) | k_in, xi(k_in)>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ._linalg import frozen
from .errors import ConfigurationError
from .modes import Direction, ModeSet

Kind = Literal["identity", "fixed_jones", "random_unitary", "gaussian_envelope_random"]
KINDS = ("identity", "fixed_jones", "random_unitary", "gaussian_envelope_random")
_SPEC_KEYS = {"kind", "seed", "sigma", "jones"}

# Directions closer than this (in unit-vector distance) count as the same mode.
_SAME_MODE_ATOL = 1e-12


def haar_unitary_2x2(rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed 2x2 unitary via QR of a complex Ginibre matrix with phase fixing."""
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _same_direction(a: Direction, b: Direction) -> bool:
    return bool(np.max(np.abs(a.unit_vector() - b.unit_vector())) <= _SAME_MODE_ATOL)


def _angle_between(a: Direction, b: Direction) -> float:
    c = float(np.clip(a.unit_vector() @ b.unit_vector(), -1.0, 1.0))
    return math.acos(c)


@dataclass(frozen=True)
class ScatterModel:
    """Scattering amplitude model.

    Random kinds draw one Haar unitary per mode, keyed by ``(seed, mode index)``
    in ``modes``, when the model is built; the blocks never change afterwards.
    """

    kind: Kind = "identity"
    seed: int | None = None
    sigma: float | None = None
    jones: np.ndarray | None = field(default=None, compare=False)
    modes: ModeSet | None = field(default=None, compare=False)
    _cache: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown scatter model kind {self.kind!r}")
        if self.kind == "fixed_jones":
            if self.jones is None:
                raise ConfigurationError("fixed_jones model needs a 'jones' matrix")
            j = np.asarray(self.jones, dtype=complex)
            if j.shape != (2, 2):
                raise ConfigurationError("'jones' must be 2x2")
            object.__setattr__(self, "jones", frozen(j))
        if self.kind in ("random_unitary", "gaussian_envelope_random"):
            if self.seed is None:
                raise ConfigurationError(f"{self.kind} model needs a 'seed'")
            if not (0 <= int(self.seed) < 2**64):
                raise ConfigurationError("seed must be a 64-bit unsigned integer")
            if self.modes is None:
                raise ConfigurationError(f"{self.kind} model needs its mode set")
            blocks = tuple(
                frozen(haar_unitary_2x2(np.random.default_rng([int(self.seed), i])))
                for i in range(len(self.modes))
            )
            object.__setattr__(self, "_cache", blocks)
        if self.kind == "gaussian_envelope_random":
            if self.sigma is None or not self.sigma > 0:
                raise ConfigurationError("gaussian_envelope_random needs sigma > 0")

    def unitary(self, index: int) -> np.ndarray:
        """Un-enveloped random block for the mode at ``index``."""
        return self._cache[index]

    def _mode_index(self, d: Direction) -> int:
        try:
            return self.modes.index(d)
        except ValueError:
            raise ConfigurationError(f"mode {d} is not in the model's mode set") from None

    def bind(self, modes: ModeSet) -> "ScatterModel":
        """Same model spec, rebuilt on ``modes``."""
        return ScatterModel(self.kind, self.seed, self.sigma, self.jones, modes)

    @classmethod
    def from_dict(cls, spec: dict, modes: ModeSet | None = None) -> "ScatterModel":
        unknown = set(spec) - _SPEC_KEYS
        if unknown:
            raise ConfigurationError(f"unknown scatter model keys: {sorted(unknown)}")
        if "kind" not in spec:
            raise ConfigurationError("scatter model needs a 'kind'")
        jones = spec.get("jones")
        if jones is not None:
            jones = _complex_matrix(jones)
        return cls(spec["kind"], spec.get("seed"), spec.get("sigma"), jones, modes)


def _complex_matrix(rows) -> np.ndarray:
    """Accept real entries or ``[re, im]`` pairs."""
    out = np.zeros((len(rows), len(rows[0])), dtype=complex)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
    return out


def amplitude_block(model: ScatterModel, input_mode: Direction, output_mode: Direction) -> np.ndarray:
    """Complex 2x2 block ``S[alpha, xi]`` from ``input_mode`` into ``output_mode``."""
    if model.kind == "identity":
        return np.eye(2, dtype=complex) if _same_direction(input_mode, output_mode) else np.zeros((2, 2), complex)
    if model.kind == "fixed_jones":
        return np.array(model.jones)

    if model.modes is None:
        raise ConfigurationError("random model has no mode set")
    u = np.array(model.unitary(model._mode_index(output_mode)))
    if model.kind == "random_unitary":
        return u
    t = _angle_between(input_mode, output_mode)
    return u * math.exp(-t * t / (2.0 * model.sigma**2))
