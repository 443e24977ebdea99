"""Polarization-entangled pairs after two independent scatterers.

4x4 objects use the basis ordering (x_A x_B, x_A y_B, y_A x_B, y_A y_B),
which is the row-major flattening of a 2x2 amplitude block ``Psi[alpha, beta]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import PAULI, check_density, frozen
from .errors import DomainError, NormalizationError
from .modes import IDENTITY_FRAME, LocalFrame, ModeSet
from .onephoton import _w_stack
from .scatter import ScatterModel, amplitude_block

BELL_STATES = {
    1: np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2.0),
    2: np.array([1, 0, 0, -1], dtype=complex) / math.sqrt(2.0),
    3: np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2.0),
    4: np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2.0),
}
for _v in BELL_STATES.values():
    _v.flags.writeable = False


def bell_state(index: int) -> np.ndarray:
    """Normalized Bell-Schmidt vector Phi_1..Phi_4."""
    try:
        return BELL_STATES[int(index)]
    except (KeyError, ValueError):
        raise DomainError(f"Bell-Schmidt index must be 1..4, got {index!r}") from None


def bell_density(index: int) -> np.ndarray:
    v = bell_state(index)
    return np.outer(v, v.conj())


@dataclass(frozen=True)
class BellInitial:
    """Source state C+ |x_A y_B> + C- |y_A x_B>."""

    c_plus: complex
    c_minus: complex

    def __post_init__(self):
        norm = abs(self.c_plus) ** 2 + abs(self.c_minus) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"|C+|^2 + |C-|^2 = {norm!r}, expected 1")

    @property
    def block(self) -> np.ndarray:
        return np.array([[0.0, self.c_plus], [self.c_minus, 0.0]], dtype=complex)

    @classmethod
    def singlet(cls) -> "BellInitial":
        r = 1.0 / math.sqrt(2.0)
        return cls(r, -r)


@dataclass(frozen=True, eq=False)
class PairState:
    modes_a: ModeSet
    modes_b: ModeSet
    amplitudes: np.ndarray  # (N_A, N_B, 2, 2)
    zeta: np.ndarray  # (N_A, N_B)
    weights: np.ndarray  # (N_A, N_B), sums to 1


@dataclass(frozen=True, eq=False)
class PairBlock:
    rho_tilde: np.ndarray


@dataclass(frozen=True, eq=False)
class TwoPhotonEffectiveDensity:
    rho: np.ndarray


def scatter_pair(
    init: BellInitial,
    model_a: ScatterModel,
    model_b: ScatterModel,
    modes_a: ModeSet,
    modes_b: ModeSet,
) -> PairState:
    """Psi(k, q) = S_A(k) M S_B(q)^T with M the source amplitude block."""
    m = init.block
    s_a = [amplitude_block(model_a, modes_a.reference, k) for k in modes_a]
    s_b = [amplitude_block(model_b, modes_b.reference, q) for q in modes_b]
    amps = np.array([[sa @ m @ sb.T for sb in s_b] for sa in s_a])
    zeta = np.sum(np.abs(amps) ** 2, axis=(2, 3))
    total = float(np.sum(zeta))
    if total <= 0.0:
        raise NormalizationError("no pair amplitude reaches the detected modes")
    return PairState(modes_a, modes_b, frozen(amps), frozen(zeta), frozen(zeta / total))


def pair_block(ps: PairState, k_index: int, q_index: int) -> PairBlock:
    """Pure 4x4 density matrix of one detected momentum pair."""
    z = ps.zeta[k_index, q_index]
    if z <= 0.0:
        raise DomainError(f"pair ({k_index}, {q_index}) carries no amplitude")
    v = ps.amplitudes[k_index, q_index].reshape(4)
    return PairBlock(frozen(np.outer(v, v.conj()) / z))


def reduced_density_blocks(ps: PairState) -> list[tuple[float, np.ndarray]]:
    """(w(k,q), rho_tilde(k,q)) for every pair with nonzero weight, in (k, q) order."""
    out = []
    for i in range(len(ps.modes_a)):
        for j in range(len(ps.modes_b)):
            if ps.zeta[i, j] > 0.0:
                out.append((float(ps.weights[i, j]), pair_block(ps, i, j).rho_tilde))
    return out


def polarizer_frame_pair_amplitudes(ps: PairState, axis_a: LocalFrame, axis_b: LocalFrame) -> np.ndarray:
    """C(k, q) = W_A(k) Psi(k, q) W_B(q)^T, normalized by the total detected pair weight."""
    w_a = _w_stack(ps.modes_a, axis_a)
    w_b = _w_stack(ps.modes_b, axis_b)
    c = np.einsum("iab,ijbc,jdc->ijad", w_a, ps.amplitudes, w_b)
    return c / math.sqrt(float(np.sum(ps.zeta)))


def effective_density_2(
    ps: PairState, axis_a: LocalFrame = IDENTITY_FRAME, axis_b: LocalFrame = IDENTITY_FRAME
) -> TwoPhotonEffectiveDensity:
    """Coincidence-measured 4x4 density matrix, entries ``Z <P_{a'a} (x) P_{b'b}>``."""
    c = polarizer_frame_pair_amplitudes(ps, axis_a, axis_b).reshape(-1, 4)
    gram = c.T @ c.conj()
    tr = float(np.real(np.trace(gram)))
    if tr <= 0.0:
        raise NormalizationError("no coincidences in the polarizer states")
    return TwoPhotonEffectiveDensity(frozen(gram / tr))


def two_photon_stokes(ps: PairState, axis_a: LocalFrame = IDENTITY_FRAME, axis_b: LocalFrame = IDENTITY_FRAME) -> np.ndarray:
    """s[i, j] from the Pauli products carried into each photon's basis (W^T sigma W per side)."""
    w_a = _w_stack(ps.modes_a, axis_a)
    w_b = _w_stack(ps.modes_b, axis_b)
    psi = ps.amplitudes / math.sqrt(float(np.sum(ps.zeta)))
    ops_a = [np.einsum("kba,bc,kcd->kad", w_a, s, w_a) for s in PAULI]
    ops_b = [np.einsum("qba,bc,qcd->qad", w_b, s, w_b) for s in PAULI]
    s = np.empty((4, 4))
    for i, oa in enumerate(ops_a):
        for j, ob in enumerate(ops_b):
            s[i, j] = np.real(np.einsum("kqab,kac,qbd,kqcd->", psi.conj(), oa, ob, psi))
    return s


def rho_from_two_photon_stokes(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s[0, 0] <= 0.0:
        raise NormalizationError("s00 must be positive")
    rho = sum(s[i, j] * np.kron(PAULI[i], PAULI[j]) for i in range(4) for j in range(4))
    return rho / (4.0 * s[0, 0])


@dataclass(frozen=True, eq=False)
class MixtureTerm:
    """One momentum pair: its probability, 4x4 polarization state and tilts on each polarizer."""

    weight: float
    rho: np.ndarray
    theta_a: float = 0.0
    theta_b: float = 0.0
    phi_a: float = 0.0
    phi_b: float = 0.0


@dataclass(frozen=True, eq=False)
class Mixture:
    terms: tuple[MixtureTerm, ...]

    def density(self) -> np.ndarray:
        return sum(t.weight * t.rho for t in self.terms)


def momentum_mixture(blocks: Sequence) -> Mixture:
    """Statistical mixture over momentum pairs.

    ``blocks`` holds ``(weight, PairBlock)``, ``(weight, 4x4 array)`` or
    ready-made :class:`MixtureTerm` items; weights must be nonnegative and sum to 1.
    """
    terms = []
    for item in blocks:
        if isinstance(item, MixtureTerm):
            terms.append(item)
            continue
        weight, state = item
        rho = state.rho_tilde if isinstance(state, PairBlock) else np.asarray(state, dtype=complex)
        terms.append(MixtureTerm(float(weight), rho))
    if not terms:
        raise DomainError("empty mixture")
    ws = np.array([t.weight for t in terms])
    if np.any(ws < 0.0) or abs(ws.sum() - 1.0) > 1e-12:
        raise DomainError("mixture weights must be nonnegative and sum to 1")
    for t in terms:
        check_density(t.rho)
    return Mixture(tuple(terms))


def tilt_mixture(state_index: int, tilts_b: Sequence[float], weights: Sequence[float] | None = None) -> Mixture:
    """Bell-Schmidt state with photon B hitting its polarizer at each of ``tilts_b``."""
    n = len(tilts_b)
    ws = [1.0 / n] * n if weights is None else list(weights)
    rho = bell_density(state_index)
    return momentum_mixture([MixtureTerm(w, rho, theta_b=t) for w, t in zip(ws, tilts_b)])
