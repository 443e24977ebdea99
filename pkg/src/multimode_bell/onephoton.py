"""One-photon multi-mode states and the density matrices a momentum-blind detector sees.

Amplitudes are stored per mode in that mode's own linear (x', y') basis.
Because the basis changes from mode to mode, tracing out the momentum does
not give one 2x2 density matrix.  What survives is a direct sum of weighted
per-mode blocks.  A polarization measurement defines an *effective* 2x2
matrix only once the polarizer frame is fixed, via the W matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from ._linalg import PAULI, frozen
from .errors import DomainError, NormalizationError
from .modes import HELICITY_TO_LINEAR, IDENTITY_FRAME, LocalFrame, ModeSet
from .polarizer import Polarizer, jones_matrix, w_matrix
from .scatter import ScatterModel, amplitude_block


@dataclass(frozen=True, eq=False)
class OnePhotonState:
    """Unnormalized amplitudes ``psi[n] = (psi_x'(k_n), psi_y'(k_n))`` over ``mode_set``."""

    mode_set: ModeSet
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (len(self.mode_set), 2):
            raise DomainError(f"expected {(len(self.mode_set), 2)} amplitudes, got {amps.shape}")
        object.__setattr__(self, "amplitudes", frozen(amps))

    @classmethod
    def from_helicity(cls, mode_set: ModeSet, helicity_amplitudes) -> "OnePhotonState":
        h = np.asarray(helicity_amplitudes, dtype=complex)
        return cls(mode_set, h @ HELICITY_TO_LINEAR.T)

    @property
    def zeta(self) -> np.ndarray:
        """Per-mode intensity |psi_x'|^2 + |psi_y'|^2 (basis independent)."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    @property
    def total_norm(self) -> float:
        return float(np.sum(self.zeta))


@dataclass(frozen=True, eq=False)
class BlockDensity:
    """Diagonal blocks ``R(n) = w(n) |phi_n)(phi_n|`` of the generalized reduced density matrix."""

    mode_set: ModeSet
    blocks: np.ndarray
    weights: np.ndarray

    def direct_sum(self) -> np.ndarray:
        """The 2N x 2N block-diagonal generalized reduced density matrix."""
        return block_diag(*self.blocks)


@dataclass(frozen=True, eq=False)
class PolarizationProjector:
    """Momentum-diagonal projector: one Hermitian idempotent 2x2 block per mode."""

    mode_set: ModeSet
    blocks: np.ndarray

    def direct_sum(self) -> np.ndarray:
        return block_diag(*self.blocks)

    @classmethod
    def uniform(cls, mode_set: ModeSet, block) -> "PolarizationProjector":
        b = np.asarray(block, dtype=complex)
        return cls(mode_set, np.repeat(b[None], len(mode_set), axis=0))


@dataclass(frozen=True, eq=False)
class EffectiveDensity:
    rho: np.ndarray


def scatter_single(input_polarization, model: ScatterModel, modes: ModeSet) -> OnePhotonState:
    """Amplitudes ``psi(k) = S(k0 -> k) @ input`` for every detected mode; no renormalization."""
    e_in = np.asarray(input_polarization, dtype=complex)
    if e_in.shape != (2,) or abs(np.vdot(e_in, e_in).real - 1.0) > 1e-12:
        raise DomainError("input polarization must be a normalized complex 2-vector")
    k0 = modes.reference
    amps = np.array([amplitude_block(model, k0, k) @ e_in for k in modes])
    state = OnePhotonState(modes, amps)
    if state.total_norm == 0.0:
        raise NormalizationError("scattering model annihilates the input photon on every detected mode")
    return state


def block_density(state: OnePhotonState) -> BlockDensity:
    total = state.total_norm
    if total <= 0.0:
        raise NormalizationError("zero-norm one-photon state")
    z1 = 1.0 / total
    psi = state.amplitudes
    blocks = z1 * np.einsum("ns,nt->nst", psi, psi.conj())
    return BlockDensity(state.mode_set, frozen(blocks), frozen(z1 * state.zeta))


def full_density(state: OnePhotonState) -> np.ndarray:
    """Complete 2N x 2N representation including momentum coherences R(n, m), n != m."""
    v = state.amplitudes.reshape(-1)
    return np.outer(v, v.conj()) / state.total_norm


def trace_out_momenta(bd: BlockDensity) -> np.ndarray:
    """Ordinary sum of the diagonal blocks (the 'average' 2x2 matrix)."""
    return np.sum(bd.blocks, axis=0)


def _check_same_modes(bd: BlockDensity, proj: PolarizationProjector) -> None:
    if bd.mode_set != proj.mode_set:
        raise DomainError("density and projector are defined on different mode sets")


def projector_expectation(bd: BlockDensity, proj: PolarizationProjector) -> float:
    """<P> = sum_n Tr(R(n) P(n)); only the diagonal blocks contribute."""
    _check_same_modes(bd, proj)
    return float(np.real(np.einsum("nst,nts->", bd.blocks, proj.blocks)))


def naive_average_expectation(bd: BlockDensity, proj: PolarizationProjector) -> float:
    """Tr(rho_bar P_bar) with P_bar the unweighted mode average of the projector blocks.

    Agrees with :func:`projector_expectation` only when every block of
    ``proj`` is the same matrix.
    """
    _check_same_modes(bd, proj)
    p_bar = np.mean(proj.blocks, axis=0)
    return float(np.real(np.trace(trace_out_momenta(bd) @ p_bar)))


def polarizer_projector(
    pol_beta: float, modes: ModeSet, polarizer_axis_frame: LocalFrame = IDENTITY_FRAME
) -> PolarizationProjector:
    """Jones projector of one polarizer, expressed in every mode's own (x', y') basis."""
    pol = Polarizer(pol_beta, polarizer_axis_frame)
    blocks = np.array([jones_matrix(pol, k).t for k in modes], dtype=complex)
    return PolarizationProjector(modes, frozen(blocks))


def _w_stack(modes: ModeSet, frame: LocalFrame) -> np.ndarray:
    return np.array([w_matrix(k, frame).w for k in modes])


def polarizer_frame_amplitudes(state: OnePhotonState, polarizer_axis_frame: LocalFrame) -> np.ndarray:
    """c(k) = W(k) psi(k) / sqrt(sum zeta): amplitudes on the polarizer states x(z), y(z)."""
    w = _w_stack(state.mode_set, polarizer_axis_frame)
    return np.einsum("nab,nb->na", w, state.amplitudes) / np.sqrt(state.total_norm)


def stokes_parameters(state: OnePhotonState, polarizer_axis_frame: LocalFrame = IDENTITY_FRAME) -> np.ndarray:
    """(s0, s1, s2, s3) measured behind a polarizer with axis ``polarizer_axis_frame``.

    Each Pauli matrix is carried into the photon's basis as ``W^T sigma W`` and
    averaged over the normalized multi-mode state.  Convention: s3 is the
    x/y balance, s1 the +-45 degree balance, s2 the circular one.
    """
    if state.total_norm <= 0.0:
        raise NormalizationError("zero-norm one-photon state")
    w = _w_stack(state.mode_set, polarizer_axis_frame)
    psi = state.amplitudes / np.sqrt(state.total_norm)
    s = []
    for sigma in PAULI:
        op = np.einsum("nab,bc,ncd->nad", w.transpose(0, 2, 1), sigma, w)
        s.append(np.real(np.einsum("na,nab,nb->", psi.conj(), op, psi)))
    return np.array(s)


def rho_from_stokes(s) -> np.ndarray:
    s0, s1, s2, s3 = s
    if s0 <= 0.0:
        raise NormalizationError("s0 must be positive")
    return 0.5 * np.array([[s0 + s3, s1 - 1j * s2], [s1 + 1j * s2, s0 - s3]]) / s0


def effective_density(state: OnePhotonState, polarizer_axis_frame: LocalFrame = IDENTITY_FRAME) -> EffectiveDensity:
    """Measured 2x2 density matrix, entries ``Z <P_{tau sigma}>`` of the polarizer-frame projectors."""
    if state.total_norm <= 0.0:
        raise NormalizationError("zero-norm one-photon state")
    c = polarizer_frame_amplitudes(state, polarizer_axis_frame)
    gram = np.einsum("na,nb->ab", c, c.conj())
    tr = float(np.real(np.trace(gram)))
    if tr <= 0.0:
        raise NormalizationError("no light transmitted into the polarizer states")
    return EffectiveDensity(frozen(gram / tr))
