import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multimode_bell import chsh
from multimode_bell._linalg import partial_transpose_b, purity
from multimode_bell.errors import DomainError
from multimode_bell.modes import Direction, ModeSet, cap_grid
from multimode_bell.scatter import ScatterModel
from multimode_bell.twophoton import (
    BellInitial,
    MixtureTerm,
    PairState,
    bell_density,
    bell_state,
    effective_density_2,
    momentum_mixture,
    pair_block,
    reduced_density_blocks,
    rho_from_two_photon_stokes,
    scatter_pair,
    tilt_mixture,
    two_photon_stokes,
)

SINGLE = ModeSet.single(Direction(0.0))
IDENT = ScatterModel("identity")
MODES3 = cap_grid(Direction(0.0), 0.25, 1, 2)


def singlet_pair(modes_b=SINGLE, model_b=IDENT):
    return scatter_pair(BellInitial.singlet(), IDENT, model_b, SINGLE, modes_b)


def random_pair(seed_a, seed_b, modes_a=MODES3, modes_b=MODES3):
    ma = ScatterModel("random_unitary", seed=seed_a, modes=modes_a)
    mb = ScatterModel("gaussian_envelope_random", seed=seed_b, sigma=0.3, modes=modes_b)
    return scatter_pair(BellInitial(0.6, 0.8j), ma, mb, modes_a, modes_b)


def test_bell_states_orthonormal():
    g = np.array([[np.vdot(bell_state(i), bell_state(j)) for j in range(1, 5)] for i in range(1, 5)])
    np.testing.assert_allclose(g, np.eye(4), atol=1e-15)
    with pytest.raises(DomainError):
        bell_state(5)


def test_singlet_block_and_weight():
    ps = singlet_pair()
    assert ps.weights[0, 0] == 1.0
    np.testing.assert_allclose(pair_block(ps, 0, 0).rho_tilde, bell_density(4), atol=1e-15)


@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(0, 1))
def test_identity_preserves_schmidt_coefficients(ph1, ph2, p):
    cp, cm = math.sqrt(p) * np.exp(1j * ph1), math.sqrt(1 - p) * np.exp(1j * ph2)
    ps = scatter_pair(BellInitial(cp, cm), IDENT, IDENT, SINGLE, SINGLE)
    assert ps.zeta[0, 0] == pytest.approx(1.0, abs=1e-12)
    sv = np.sort(np.linalg.svd(ps.amplitudes[0, 0], compute_uv=False))
    np.testing.assert_allclose(sv, np.sort([abs(cp), abs(cm)]), atol=1e-12)


def test_bell_initial_normalization_checked():
    with pytest.raises(DomainError):
        BellInitial(1.0, 1.0)


def test_product_block_is_ppt():
    u, v = np.array([0.6, 0.8j]), np.array([1, 1j]) / math.sqrt(2)
    amps = np.outer(u, v)[None, None]
    ps = PairState(SINGLE, SINGLE, amps, np.ones((1, 1)), np.ones((1, 1)))
    rho = pair_block(ps, 0, 0).rho_tilde
    assert np.linalg.eigvalsh(partial_transpose_b(rho)).min() >= -1e-12
    assert np.linalg.eigvalsh(partial_transpose_b(bell_density(4))).min() == pytest.approx(-0.5)


def test_seeded_pairs_reproducible():
    a, b = random_pair(1, 2), random_pair(1, 2)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert np.array_equal(a.weights, b.weights)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_pair_weights_and_blocks(sa, sb):
    ps = random_pair(sa, sb)
    assert abs(ps.weights.sum() - 1) < 1e-12
    np.testing.assert_allclose(ps.zeta, np.sum(np.abs(ps.amplitudes) ** 2, axis=(2, 3)), atol=1e-12)
    blocks = reduced_density_blocks(ps)
    for _, r in blocks:
        assert abs(np.trace(r) - 1) < 1e-12
    mixed = sum(w * r for w, r in blocks)
    assert abs(np.trace(mixed) - 1) < 1e-12
    assert purity(mixed) < 1 - 1e-9


def test_effective_density_normal_incidence_singlet():
    np.testing.assert_allclose(effective_density_2(singlet_pair()).rho, bell_density(4), atol=1e-12)


def test_tilted_b_in_plane_of_incidence_leaves_state_unchanged():
    tilted = ModeSet.single(Direction(0.5, 0.0))
    rho = effective_density_2(singlet_pair(tilted)).rho
    np.testing.assert_allclose(rho, bell_density(4), atol=1e-12)


def test_tilted_b_out_of_plane_rotates_but_stays_pure():
    tilted = ModeSet.single(Direction(0.5, 0.7))
    rho = effective_density_2(singlet_pair(tilted)).rho
    assert purity(rho) == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(rho - bell_density(4))) > 1e-3


def test_multimode_two_photon_purity_drops():
    ps = random_pair(3, 4, modes_a=SINGLE, modes_b=MODES3)
    assert len(MODES3) == 3
    assert purity(effective_density_2(ps).rho) < 1 - 1e-9


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.floats(0, 0.4), st.floats(0, 6.2))
def test_stokes_path_matches_projector_path(sa, sb, th, ph):
    from multimode_bell.modes import LocalFrame

    ps = random_pair(sa, sb)
    ax_a = LocalFrame.from_dict({"theta": th, "phi": ph})
    ax_b = LocalFrame.from_dict({"theta": th / 2, "phi": 2 * ph})
    rho = effective_density_2(ps, ax_a, ax_b).rho
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-10
    np.testing.assert_allclose(rho_from_two_photon_stokes(two_photon_stokes(ps, ax_a, ax_b)), rho, atol=1e-10)


def test_mixture_single_term_and_linearity():
    m = momentum_mixture([(1.0, bell_density(4))])
    np.testing.assert_array_equal(m.density(), bell_density(4))
    s = chsh.settings_for(0.3, 1.9)
    two = momentum_mixture([(0.5, bell_density(1)), (0.5, bell_density(4))])
    avg = 0.5 * chsh.chsh_value(bell_density(1), s) + 0.5 * chsh.chsh_value(bell_density(4), s)
    assert chsh.chsh_value(two.density(), s) == pytest.approx(avg, abs=1e-12)
    assert chsh.mixture_value(two, 0.3, 1.9) == pytest.approx(avg, abs=1e-12)


def test_mixture_weight_validation():
    with pytest.raises(DomainError):
        momentum_mixture([(0.5, bell_density(1))])
    with pytest.raises(DomainError):
        momentum_mixture([(1.5, bell_density(1)), (-0.5, bell_density(2))])
    with pytest.raises(DomainError):
        momentum_mixture([])


def test_tilt_mixture_terms():
    m = tilt_mixture(4, [0.0, 0.3, 0.6])
    assert [t.theta_b for t in m.terms] == [0.0, 0.3, 0.6]
    assert sum(t.weight for t in m.terms) == pytest.approx(1.0)
    assert isinstance(m.terms[0], MixtureTerm)
