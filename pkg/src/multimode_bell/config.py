"""Run configurations for the config-file driven CLI commands.

Every record rejects unknown keys; command-line flags are applied on top of
the parsed file with :func:`dataclasses.replace`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigurationError
from .modes import Direction, LocalFrame, ModeSet, cap_grid
from .scatter import ScatterModel


def _strict(cls, d: dict, where: str) -> dict:
    if not isinstance(d, dict):
        raise ConfigurationError(f"{where}: expected an object")
    names = {f.name for f in fields(cls)}
    unknown = set(d) - names
    if unknown:
        raise ConfigurationError(f"{where}: unknown keys {sorted(unknown)}")
    return d


def _complex(v, where: str) -> complex:
    try:
        if isinstance(v, (list, tuple)):
            re, im = v
            return complex(float(re), float(im))
        return complex(float(v))
    except (TypeError, ValueError):
        raise ConfigurationError(f"{where}: expected a number or [re, im]") from None


def _direction(d, where: str) -> Direction:
    if not isinstance(d, dict) or set(d) - {"theta", "phi"} or "theta" not in d:
        raise ConfigurationError(f"{where}: expected {{theta, phi}}")
    return Direction.from_dict(d)


@dataclass(frozen=True)
class GridConfig:
    reference: dict = field(default_factory=lambda: {"theta": 0.0, "phi": 0.0})
    aperture: float = 0.0
    n_theta: int = 1
    n_phi: int = 1

    @classmethod
    def from_dict(cls, d: dict, where: str = "modes") -> "GridConfig":
        return cls(**_strict(cls, d, where))

    def build(self) -> ModeSet:
        return cap_grid(_direction(self.reference, "reference"), self.aperture, int(self.n_theta), int(self.n_phi))


@dataclass(frozen=True)
class OnePhotonConfig:
    input_polarization: tuple = (1.0, 0.0)
    model: dict = field(default_factory=lambda: {"kind": "identity"})
    modes: GridConfig = field(default_factory=GridConfig)
    polarizer_axis: dict = field(default_factory=lambda: {"theta": 0.0, "phi": 0.0})

    @classmethod
    def from_dict(cls, d: dict) -> "OnePhotonConfig":
        d = dict(_strict(cls, d, "one-photon config"))
        if "modes" in d:
            d["modes"] = GridConfig.from_dict(d["modes"])
        if "input_polarization" in d:
            d["input_polarization"] = tuple(d["input_polarization"])
        return cls(**d)

    def input_vector(self) -> list[complex]:
        if len(self.input_polarization) != 2:
            raise ConfigurationError("input_polarization needs two components")
        return [_complex(v, "input_polarization") for v in self.input_polarization]

    def axis_frame(self) -> LocalFrame:
        return LocalFrame.from_dict(self.polarizer_axis)

    def scatter_model(self, modes: ModeSet) -> ScatterModel:
        return ScatterModel.from_dict(self.model, modes)


@dataclass(frozen=True)
class TwoPhotonConfig:
    c_plus: object = 2**-0.5
    c_minus: object = -(2**-0.5)
    model_a: dict = field(default_factory=lambda: {"kind": "identity"})
    model_b: dict = field(default_factory=lambda: {"kind": "identity"})
    modes_a: GridConfig = field(default_factory=GridConfig)
    modes_b: GridConfig = field(default_factory=GridConfig)
    axis_a: dict = field(default_factory=lambda: {"theta": 0.0, "phi": 0.0})
    axis_b: dict = field(default_factory=lambda: {"theta": 0.0, "phi": 0.0})

    @classmethod
    def from_dict(cls, d: dict) -> "TwoPhotonConfig":
        d = dict(_strict(cls, d, "two-photon config"))
        for key in ("modes_a", "modes_b"):
            if key in d:
                d[key] = GridConfig.from_dict(d[key], key)
        return cls(**d)

    def coefficients(self) -> tuple[complex, complex]:
        return _complex(self.c_plus, "c_plus"), _complex(self.c_minus, "c_minus")


_MIXTURE_KEYS = {"weight", "theta_a", "theta_b", "phi_a", "phi_b", "state"}


@dataclass(frozen=True)
class MixtureEntry:
    weight: float
    state: int
    theta_a: float = 0.0
    theta_b: float = 0.0
    phi_a: float = 0.0
    phi_b: float = 0.0


def _state_index(v) -> int:
    if isinstance(v, str) and v.lower().startswith("phi"):
        v = v[3:]
    try:
        i = int(v)
    except (TypeError, ValueError):
        raise ConfigurationError(f"state must be Phi1..Phi4, got {v!r}") from None
    if i not in (1, 2, 3, 4):
        raise ConfigurationError(f"state must be Phi1..Phi4, got {v!r}")
    return i


def parse_mixture(entries, degrees: bool = False) -> list[MixtureEntry]:
    """Parse a mixture fixture: a JSON list of ``{weight, theta_a, theta_b, state}``."""
    if not isinstance(entries, list) or not entries:
        raise ConfigurationError("mixture file must hold a non-empty list")
    out = []
    for n, e in enumerate(entries):
        if not isinstance(e, dict):
            raise ConfigurationError(f"mixture entry {n}: expected an object")
        unknown = set(e) - _MIXTURE_KEYS
        if unknown:
            raise ConfigurationError(f"mixture entry {n}: unknown keys {sorted(unknown)}")
        if "weight" not in e or "state" not in e:
            raise ConfigurationError(f"mixture entry {n}: needs 'weight' and 'state'")
        conv = math.radians if degrees else float
        out.append(
            MixtureEntry(
                float(e["weight"]),
                _state_index(e["state"]),
                *(conv(float(e.get(k, 0.0))) for k in ("theta_a", "theta_b", "phi_a", "phi_b")),
            )
        )
    return out


def load_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
