from __future__ import annotations

import numpy as np

SIGMA_0 = np.eye(2, dtype=complex)
# (x, y) basis; sigma_3 carries the x/y balance so that rho = (s0 + s.sigma)/2
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)

for _m in PAULI:
    _m.flags.writeable = False


def frozen(a) -> np.ndarray:
    a = np.array(a)
    a.flags.writeable = False
    return a


def is_hermitian(m: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= atol)


def check_density(rho: np.ndarray, atol: float = 1e-10) -> None:
    """Raise DomainError unless ``rho`` is a Hermitian, unit-trace matrix."""
    from .errors import DomainError

    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"density matrix must be square, got shape {rho.shape}")
    if not is_hermitian(rho, atol):
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise DomainError(f"density matrix trace {np.trace(rho).real:.3g} != 1")


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def partial_transpose_b(rho4: np.ndarray) -> np.ndarray:
    """Partial transpose over the second qubit of a 4x4 matrix."""
    r = np.asarray(rho4).reshape(2, 2, 2, 2)
    return r.transpose(0, 3, 2, 1).reshape(4, 4)
