"""Bell-CHSH evaluation and polarizer-angle optimization for tilted analyzers.

Photon A's analyzer settings are the physical orientations 0 and pi/4, which at
normal incidence give a = z and a' = x.  Photon B's polarizer is set at the
physical angles ``beta`` and ``delta``.  When B impinges at tilt ``theta``, its
effective analyzer vectors are the Bloch vectors of the tilted Jones
projectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._linalg import PAULI, check_density
from .errors import DomainError, SingularGeometryError
from .twophoton import Mixture, MixtureTerm, bell_density

SQRT2 = math.sqrt(2.0)
TSIRELSON = 2.0 * SQRT2
DEFAULT_GRID_STEP = math.pi / 360.0
DEFAULT_REFINE_TOL = 1e-8
# Analyzer denominators below this are treated as grazing incidence.
MIN_ANALYZER_DENOMINATOR = 1e-12
# Extrema whose |value| lies this close to the best one are all reported.
NEAR_MAX_TOL = 1e-6

A_ANGLE = 0.0
A_PRIME_ANGLE = math.pi / 4.0

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise DomainError(f"analyzer direction {v} is not a unit 3-vector")
    return v


@dataclass(frozen=True, eq=False)
class CHSHSettings:
    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            object.__setattr__(self, name, _unit(getattr(self, name)))


def _dot_sigma(v: np.ndarray) -> np.ndarray:
    return v[0] * PAULI[1] + v[1] * PAULI[2] + v[2] * PAULI[3]


def chsh_operator(s: CHSHSettings) -> np.ndarray:
    """B = (a.sigma) x ((b + b').sigma) + (a'.sigma) x ((b - b').sigma)."""
    return np.kron(_dot_sigma(s.a), _dot_sigma(s.b + s.b_prime)) + np.kron(
        _dot_sigma(s.a_prime), _dot_sigma(s.b - s.b_prime)
    )


def analyzer_vector(angle: float, theta: float, phi: float = 0.0) -> np.ndarray:
    """Bloch vector of the Jones projector of a polarizer at ``angle`` seen at tilt (theta, phi)."""
    g = angle - phi
    c, s = math.cos(g), math.sin(g)
    ct, st = math.cos(theta), math.sin(theta)
    den = 1.0 - c * c * st * st
    if den < MIN_ANALYZER_DENOMINATOR:
        raise SingularGeometryError(f"analyzer undefined at angle={angle}, theta={theta}")
    return np.array([2.0 * ct * s * c / den, 0.0, (ct * ct * c * c - s * s) / den])


def analyzer_vectors(beta: float, delta: float, theta: float, phi: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    return analyzer_vector(beta, theta, phi), analyzer_vector(delta, theta, phi)


def _analyzer_grid(angles: np.ndarray, theta: float, phi: float) -> np.ndarray:
    g = angles - phi
    c, s = np.cos(g), np.sin(g)
    ct, st = math.cos(theta), math.sin(theta)
    den = 1.0 - c * c * st * st
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.stack([2.0 * ct * s * c / den, np.zeros_like(g), (ct * ct * c * c - s * s) / den], axis=-1)
    out[den < MIN_ANALYZER_DENOMINATOR] = np.nan
    return out


def settings_for(
    beta: float, delta: float, theta_b: float = 0.0, phi_b: float = 0.0, theta_a: float = 0.0, phi_a: float = 0.0
) -> CHSHSettings:
    a = analyzer_vector(A_ANGLE, theta_a, phi_a)
    a_prime = analyzer_vector(A_PRIME_ANGLE, theta_a, phi_a)
    b, b_prime = analyzer_vectors(beta, delta, theta_b, phi_b)
    return CHSHSettings(a, a_prime, b, b_prime)


def chsh_value(rho, s: CHSHSettings) -> float:
    rho = np.asarray(rho, dtype=complex)
    check_density(rho)
    return float(np.real(np.trace(rho @ chsh_operator(s))))


def correlation_matrix(rho) -> np.ndarray:
    """T[i, j] = Tr(rho sigma_i x sigma_j), i, j = 1..3."""
    rho = np.asarray(rho, dtype=complex)
    return np.array([[np.real(np.trace(rho @ np.kron(si, sj))) for sj in PAULI[1:]] for si in PAULI[1:]])


def closed_form_b(theta: float, which: int) -> float:
    """CHSH value of Phi_which at tilt theta, analyzers held at their theta = 0 optimum."""
    c = math.cos(theta)
    h = 4.0 * math.cos(theta / 2.0) ** 2
    if which in (1, 2):
        r = 3.0 + 2.0 * SQRT2
        return -h * (1.0 - r * c) / (1.0 + r * c * c)
    if which in (3, 4):
        r = 3.0 - 2.0 * SQRT2
        return h * (1.0 - r * c) / (1.0 + r * c * c)
    raise DomainError(f"state index must be 1..4, got {which!r}")


def beta_optimal(theta: float, which: int) -> float:
    """Polarizer angle beta (with delta = pi - beta) giving <B> = +2 sqrt(2) for Phi_which at tilt theta.

    The arctangent argument scales as ``(1 -+ sqrt 2) cos(theta)``; this is
    the form for which the stated angle actually attains the Tsirelson bound
    (see :func:`beta_optimal_unscaled`).
    """
    c = math.cos(theta)
    if which == 1:
        return -math.atan((1.0 - SQRT2) * c)
    if which == 2:
        return math.pi + math.atan((1.0 - SQRT2) * c)
    if which == 3:
        return math.atan((1.0 + SQRT2) * c)
    if which == 4:
        return math.pi - math.atan((1.0 + SQRT2) * c)
    raise DomainError(f"state index must be 1..4, got {which!r}")


def beta_optimal_unscaled(theta: float, which: int) -> float:
    """Variant with ``arctan(1 -+ sqrt(2) cos(theta))``, where the 1 is not scaled by cos(theta); optimal only at theta = 0."""
    c = math.cos(theta)
    table = {
        1: lambda: -math.atan(1.0 - SQRT2 * c),
        2: lambda: math.pi + math.atan(1.0 - SQRT2 * c),
        3: lambda: math.atan(1.0 + SQRT2 * c),
        4: lambda: math.pi - math.atan(1.0 + SQRT2 * c),
    }
    if which not in table:
        raise DomainError(f"state index must be 1..4, got {which!r}")
    return table[which]()


def fixed_angle_value(which: int, theta: float, phi: float = 0.0) -> float:
    """Numeric Tr(rho_i B) at tilt theta with the theta = 0 optimal angles (delta = pi - beta)."""
    beta = beta_optimal(0.0, which)
    return chsh_value(bell_density(which), settings_for(beta, math.pi - beta, theta, phi))


class Extremum(NamedTuple):
    beta: float
    delta: float
    value: float


def as_mixture(rho_or_mixture, theta: float = 0.0, phi: float = 0.0) -> Mixture:
    if isinstance(rho_or_mixture, Mixture):
        return rho_or_mixture
    rho = np.asarray(rho_or_mixture, dtype=complex)
    check_density(rho)
    return Mixture((MixtureTerm(1.0, rho, theta_b=theta, phi_b=phi),))


class _Surface:
    """<B>(beta, delta) = f(beta) + g(delta) for a mixture, by linearity of the trace."""

    def __init__(self, mixture: Mixture):
        self.terms = []
        for t in mixture.terms:
            corr = correlation_matrix(t.rho)
            a = analyzer_vector(A_ANGLE, t.theta_a, t.phi_a)
            ap = analyzer_vector(A_PRIME_ANGLE, t.theta_a, t.phi_a)
            self.terms.append((t.weight, corr.T @ (a + ap), corr.T @ (a - ap), t.theta_b, t.phi_b))

    def f(self, beta: np.ndarray) -> np.ndarray:
        return sum(w * (_analyzer_grid(beta, th, ph) @ u) for w, u, _, th, ph in self.terms)

    def g(self, delta: np.ndarray) -> np.ndarray:
        return sum(w * (_analyzer_grid(delta, th, ph) @ v) for w, _, v, th, ph in self.terms)

    def value(self, beta: float, delta: float) -> float:
        return float(self.f(np.array([beta]))[0] + self.g(np.array([delta]))[0])


def golden_section_max(func, lo: float, hi: float, tol: float) -> float:
    """Argmax of a unimodal ``func`` on [lo, hi] to within ``tol``."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = func(x1), func(x2)
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = func(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = func(x2)
    return 0.5 * (a + b)


def _grid_local_maxima(m: np.ndarray) -> list[tuple[int, int]]:
    """Cells of a periodic 2-D array not exceeded by any of their 8 neighbours."""
    ok = np.isfinite(m)
    filled = np.where(ok, m, -np.inf)
    is_max = ok.copy()
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_max &= filled >= np.roll(np.roll(filled, di, axis=0), dj, axis=1)
    return [tuple(int(x) for x in ij) for ij in np.argwhere(is_max)]


def _wrap(x: float) -> float:
    x = math.fmod(x, math.pi)
    if x < 0.0:
        x += math.pi
    return 0.0 if x >= math.pi else x + 0.0


def _circ_dist(x: float, y: float) -> float:
    d = abs(_wrap(x) - _wrap(y))
    return min(d, math.pi - d)


def optimize_settings(
    rho_or_mixture,
    theta: float = 0.0,
    phi: float = 0.0,
    grid_step: float = DEFAULT_GRID_STEP,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> list[Extremum]:
    """All (beta, delta) maximizing |<B>| with a = z, a' = x, sorted by beta.

    A 4x4 ``rho`` is measured with photon B at tilt (theta, phi); a
    :class:`Mixture` carries its own tilts and ignores them.  The square
    [0, pi)^2 is scanned on a grid of spacing ``grid_step``.  Every grid
    local maximum of |<B>| is refined by alternating golden-section searches
    on beta then delta.  Extrema of both signs within 1e-6 of the best
    |<B>| are returned.
    """
    if not (0.0 < grid_step <= math.pi / 8.0):
        raise DomainError("grid_step must lie in (0, pi/8]")
    if not refine_tol > 0.0:
        raise DomainError("refine_tol must be positive")
    surface = _Surface(as_mixture(rho_or_mixture, theta, phi))

    n = max(8, int(round(math.pi / grid_step)))
    step = math.pi / n
    grid = np.arange(n) * step
    values = surface.f(grid)[:, None] + surface.g(grid)[None, :]
    absval = np.abs(values)
    best_grid = np.nanmax(absval)
    # Keep any grid maximum that could still refine up to the best one.
    slack = 2.0 * step * step * (1.0 + best_grid)
    candidates = [(i, j) for i, j in _grid_local_maxima(absval) if absval[i, j] >= best_grid - slack]

    found: list[Extremum] = []
    for i, j in candidates:
        sign = 1.0 if values[i, j] >= 0.0 else -1.0
        beta, delta = grid[i], grid[j]
        for _ in range(100):
            d0 = delta
            new_beta = golden_section_max(
                lambda x: sign * surface.value(x, d0), beta - step, beta + step, refine_tol
            )
            b0 = new_beta
            new_delta = golden_section_max(
                lambda y: sign * surface.value(b0, y), delta - step, delta + step, refine_tol
            )
            moved = max(abs(new_beta - beta), abs(new_delta - delta))
            beta, delta = new_beta, new_delta
            if moved <= refine_tol:
                break
        found.append(Extremum(_wrap(beta), _wrap(delta), surface.value(beta, delta)))

    if not found:
        return []
    top = max(abs(e.value) for e in found)
    unique: list[Extremum] = []
    for e in sorted(found, key=lambda e: (-abs(e.value), e.beta, e.delta)):
        if abs(e.value) < top - NEAR_MAX_TOL:
            continue
        if any(_circ_dist(e.beta, u.beta) < 1e-6 and _circ_dist(e.delta, u.delta) < 1e-6 for u in unique):
            continue
        unique.append(e)
    return sorted(unique, key=lambda e: (e.beta, e.delta))


def best_extremum(extrema: Sequence[Extremum], sign: int = 0) -> Extremum:
    """Largest |value| (or largest signed value for sign=+1, smallest for -1); ties to smallest beta."""
    pool = [e for e in extrema if sign == 0 or np.sign(e.value) == sign]
    if not pool:
        raise DomainError("no extremum of the requested sign")
    key = (lambda e: abs(e.value)) if sign == 0 else (lambda e: sign * e.value)
    top = max(key(e) for e in pool)
    return min((e for e in pool if key(e) >= top - NEAR_MAX_TOL), key=lambda e: (e.beta, e.delta))


def degradation_curve(
    state_index: int,
    tilts: Sequence[float],
    weights: Sequence[float] | None = None,
    grid_step: float = DEFAULT_GRID_STEP,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> tuple[float, tuple[float, float]]:
    """Best |<B>| over (beta, delta) for Phi_state_index mixed over B-photon tilts."""
    from .twophoton import tilt_mixture

    mixture = tilt_mixture(state_index, tilts, weights)
    best = best_extremum(optimize_settings(mixture, grid_step=grid_step, refine_tol=refine_tol))
    return abs(best.value), (best.beta, best.delta)


def mixture_value(mixture: Mixture, beta: float, delta: float) -> float:
    """Weighted sum of per-term Tr(rho B) with each term's own tilted analyzers."""
    return sum(
        t.weight * chsh_value(t.rho, settings_for(beta, delta, t.theta_b, t.phi_b, t.theta_a, t.phi_a))
        for t in mixture.terms
    )
