import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multimode_bell.errors import DomainError
from multimode_bell.modes import (
    HELICITY_TO_LINEAR,
    Direction,
    LocalFrame,
    ModeSet,
    cap_grid,
    helicity_basis,
    local_frame,
)

thetas = st.floats(0.0, 1.5, allow_nan=False)
phis = st.floats(-10.0, 10.0, allow_nan=False)


def test_normal_incidence_frame_is_identity():
    f = local_frame(Direction(0.0, 0.0))
    np.testing.assert_array_equal(f.matrix, np.eye(3))


def test_frame_at_45_degrees():
    f = local_frame(Direction(math.pi / 4, 0.0))
    r = math.sqrt(2) / 2
    np.testing.assert_allclose(f.x_axis, [r, 0, -r], atol=1e-15)
    np.testing.assert_allclose(f.y_axis, [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(f.z_axis, [r, 0, r], atol=1e-15)


@given(thetas, phis)
def test_frame_orthonormal_right_handed(theta, phi):
    d = Direction(theta, phi)
    f = local_frame(d)
    assert f.is_orthonormal(1e-12)
    np.testing.assert_allclose(f.z_axis, d.unit_vector(), atol=1e-12)
    assert abs(np.linalg.norm(d.unit_vector()) - 1) < 1e-12


@given(thetas, phis)
def test_helicity_orthonormal(theta, phi):
    h = helicity_basis(local_frame(Direction(theta, phi)))
    assert abs(np.vdot(h.f_plus, h.f_plus) - 1) < 1e-12
    assert abs(np.vdot(h.f_minus, h.f_minus) - 1) < 1e-12
    assert abs(np.vdot(h.f_plus, h.f_minus)) < 1e-12
    np.testing.assert_allclose(h.f_minus, h.f_plus.conj(), atol=1e-15)


def test_helicity_at_normal_incidence():
    h = helicity_basis(local_frame(Direction(0.0)))
    np.testing.assert_allclose(h.f_plus, np.array([1, 1j, 0]) / math.sqrt(2), atol=1e-15)


def test_helicity_to_linear_unitary():
    np.testing.assert_allclose(HELICITY_TO_LINEAR @ HELICITY_TO_LINEAR.conj().T, np.eye(2), atol=1e-15)


@pytest.mark.parametrize("theta", [-0.1, math.pi / 2, 2.0, float("nan")])
def test_direction_rejects_out_of_domain(theta):
    with pytest.raises(DomainError):
        Direction(theta)


def test_phi_canonicalized():
    assert Direction(0.3, -math.pi / 2).phi == pytest.approx(1.5 * math.pi)
    assert 0.0 <= Direction(0.3, 7 * math.pi).phi < 2 * math.pi


@given(thetas, phis)
def test_direction_vector_round_trip(theta, phi):
    d = Direction(theta, phi)
    back = Direction.from_vector(d.unit_vector())
    np.testing.assert_allclose(back.unit_vector(), d.unit_vector(), atol=1e-12)


def test_cap_grid_zero_aperture():
    ref = Direction(0.2, 1.0)
    ms = cap_grid(ref, 0.0, 5, 7)
    assert list(ms) == [ref]


def test_cap_grid_counts_and_cone():
    ref = Direction(0.0)
    ms = cap_grid(ref, 0.3, 3, 4)
    assert len(ms) == 13
    for m in ms:
        ang = math.acos(min(1.0, m.unit_vector() @ ref.unit_vector()))
        assert ang <= 0.3 + 1e-12


@given(st.floats(0.0, 0.6), st.floats(0.0, 2 * math.pi), st.floats(0.01, 0.5), st.integers(1, 3), st.integers(1, 6))
def test_cap_grid_deterministic_and_inside(theta0, phi0, aperture, nt, nph):
    ref = Direction(theta0, phi0)
    a = cap_grid(ref, aperture, nt, nph)
    b = cap_grid(ref, aperture, nt, nph)
    assert a.modes == b.modes
    assert len(a) == 1 + nt * nph
    assert a[0] == ref


def test_mode_set_rejects_duplicates_and_outside():
    d = Direction(0.1)
    with pytest.raises(DomainError):
        ModeSet((d, d), 0.2, Direction(0.0))
    with pytest.raises(DomainError):
        ModeSet((Direction(0.5),), 0.2, Direction(0.0))
    with pytest.raises(DomainError):
        ModeSet((), 0.2, Direction(0.0))


def test_mode_set_round_trip():
    ms = cap_grid(Direction(0.1, 0.2), 0.2, 1, 3)
    assert ModeSet.from_dict(ms.to_dict()) == ms


def test_frame_from_dict():
    f = LocalFrame.from_dict({"theta": 0.4, "phi": 0.1})
    np.testing.assert_allclose(f.matrix, local_frame(Direction(0.4, 0.1)).matrix)
    g = LocalFrame.from_dict({"x_axis": [1, 0, 0], "y_axis": [0, 1, 0], "z_axis": [0, 0, 1]})
    assert g.is_orthonormal()


def test_direction_of_inverts_frame():
    d = Direction(0.5, 0.7)
    f = local_frame(d)
    assert f.direction_of(d.unit_vector()).theta == pytest.approx(0.0, abs=1e-12)
