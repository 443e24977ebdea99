import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multimode_bell._linalg import purity
from multimode_bell.errors import DomainError, NormalizationError
from multimode_bell.modes import Direction, LocalFrame, ModeSet, cap_grid, local_frame
from multimode_bell.onephoton import (
    OnePhotonState,
    PolarizationProjector,
    block_density,
    effective_density,
    full_density,
    naive_average_expectation,
    polarizer_projector,
    projector_expectation,
    rho_from_stokes,
    scatter_single,
    stokes_parameters,
    trace_out_momenta,
)
from multimode_bell.scatter import ScatterModel

DATA = Path(__file__).resolve().parents[1] / "data"
CAP13 = cap_grid(Direction(0.0), 0.3, 3, 4)


def counterexample():
    d = json.loads((DATA / "counterexample.json").read_text())
    modes = tuple(Direction.from_dict(m) for m in d["modes"])
    ms = ModeSet(modes, d["aperture"], modes[0])
    state = OnePhotonState(ms, np.array(d["amplitudes"], dtype=complex))
    return state, PolarizationProjector(ms, np.array(d["projector_blocks"], dtype=complex))


def random_state(seed, modes=CAP13):
    return scatter_single([1.0, 0.0], ScatterModel("random_unitary", seed=seed, modes=modes), modes)


def test_identity_single_mode():
    ms = ModeSet.single(Direction(0.0))
    s = scatter_single([1, 0], ScatterModel("identity"), ms)
    np.testing.assert_array_equal(s.amplitudes, [[1, 0]])
    bd = block_density(s)
    np.testing.assert_array_equal(bd.blocks[0], [[1, 0], [0, 0]])
    assert bd.weights[0] == 1.0
    np.testing.assert_array_equal(trace_out_momenta(bd), [[1, 0], [0, 0]])
    assert projector_expectation(bd, PolarizationProjector.uniform(ms, [[1, 0], [0, 0]])) == 1.0


def test_seeded_state_reproducible():
    assert np.array_equal(random_state(3).amplitudes, random_state(3).amplitudes)


def test_weights_from_intensities():
    ms = ModeSet((Direction(0.0), Direction(0.1)), 0.1, Direction(0.0))
    s = OnePhotonState(ms, [[math.sqrt(3), 0], [0, 1]])
    bd = block_density(s)
    np.testing.assert_allclose(bd.weights, [0.75, 0.25])
    np.testing.assert_allclose([np.trace(b).real for b in bd.blocks], bd.weights)
    np.testing.assert_allclose(trace_out_momenta(bd), np.diag([0.75, 0.25]))


def test_two_orthogonal_blocks_average_to_half_identity():
    state, _ = counterexample()
    np.testing.assert_allclose(trace_out_momenta(block_density(state)), np.eye(2) / 2)


def test_helicity_input():
    ms = ModeSet.single(Direction(0.0))
    s = OnePhotonState.from_helicity(ms, [[1, 0]])
    np.testing.assert_allclose(s.amplitudes[0], np.array([1, 1j]) / math.sqrt(2))


def test_annihilating_model_raises():
    ms = cap_grid(Direction(0.0), 0.2, 1, 2)
    model = ScatterModel("fixed_jones", jones=[[0, 0], [0, 1]])
    with pytest.raises(NormalizationError):
        scatter_single([1, 0], model, ms)
    with pytest.raises(DomainError):
        scatter_single([1, 1], model, ms)


@given(st.integers(0, 10**6))
def test_block_density_properties(seed):
    bd = block_density(random_state(seed))
    assert abs(bd.weights.sum() - 1) < 1e-12
    for b in bd.blocks:
        np.testing.assert_allclose(b, b.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(b).min() >= -1e-12


@given(st.integers(0, 10**6), st.floats(0, math.pi))
def test_direct_sum_faithfulness(seed, beta):
    state = random_state(seed)
    bd = block_density(state)
    proj = polarizer_projector(beta, CAP13)
    p_full = proj.direct_sum()
    via_blocks = projector_expectation(bd, proj)
    assert via_blocks == pytest.approx(np.trace(bd.direct_sum() @ p_full).real, abs=1e-12)
    # momentum coherences do not contribute to a momentum-diagonal observable
    assert via_blocks == pytest.approx(np.trace(full_density(state) @ p_full).real, abs=1e-12)


def test_projector_completeness_and_zero():
    bd = block_density(random_state(1))
    assert projector_expectation(bd, PolarizationProjector.uniform(CAP13, np.eye(2))) == pytest.approx(1.0, abs=1e-12)
    assert projector_expectation(bd, PolarizationProjector.uniform(CAP13, np.zeros((2, 2)))) == 0.0


def test_naive_average_equals_when_blocks_coincide():
    bd = block_density(random_state(2))
    proj = PolarizationProjector.uniform(CAP13, [[0.5, 0.5], [0.5, 0.5]])
    assert naive_average_expectation(bd, proj) == pytest.approx(projector_expectation(bd, proj), abs=1e-12)


def test_naive_average_counterexample():
    state, proj = counterexample()
    bd = block_density(state)
    assert projector_expectation(bd, proj) == pytest.approx(1.0)
    assert naive_average_expectation(bd, proj) == pytest.approx(0.5)


def test_mismatched_mode_sets_rejected():
    state, proj = counterexample()
    with pytest.raises(DomainError):
        projector_expectation(block_density(random_state(1)), proj)


def test_polarizer_projector_blocks():
    flat = ModeSet.single(Direction(0.0))
    assert len(polarizer_projector(0.3, flat).blocks) == 1
    proj = polarizer_projector(0.3, CAP13)
    assert not np.allclose(proj.blocks[1], proj.blocks[2])
    for b in proj.blocks:
        np.testing.assert_allclose(b @ b, b, atol=1e-12)


def test_stokes_examples():
    ms = ModeSet.single(Direction(0.0))
    np.testing.assert_allclose(stokes_parameters(OnePhotonState(ms, [[1, 0]])), [1, 0, 0, 1], atol=1e-15)
    s = stokes_parameters(OnePhotonState(ms, [np.array([1, 1j]) / math.sqrt(2)]))
    assert abs(abs(s[2]) - 1) < 1e-12 and abs(s[1]) < 1e-12 and abs(s[3]) < 1e-12


@given(st.integers(0, 10**6))
def test_stokes_cone_and_reconstruction(seed):
    state = random_state(seed)
    frame = local_frame(Direction(0.2, 0.4))
    s = stokes_parameters(state, frame)
    assert s[0] >= np.linalg.norm(s[1:]) - 1e-12
    np.testing.assert_allclose(rho_from_stokes(s), effective_density(state, frame).rho, atol=1e-12)


def test_effective_density_single_mode_pure():
    ms = ModeSet.single(Direction(0.0))
    np.testing.assert_array_equal(effective_density(OnePhotonState(ms, [[1, 0]])).rho, [[1, 0], [0, 0]])
    psi = np.array([0.6, 0.8j])
    np.testing.assert_allclose(effective_density(OnePhotonState(ms, [psi])).rho, np.outer(psi, psi.conj()), atol=1e-12)


def test_effective_density_orthogonal_pair_is_mixed():
    state, _ = counterexample()
    rho = effective_density(state).rho
    np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-15)
    assert purity(rho) == pytest.approx(0.5)
    assert purity(rho) < 1 - 1e-9


@given(st.integers(0, 10**6), st.floats(0, 0.5), st.floats(0, 6.28))
def test_effective_density_valid(seed, axis_theta, axis_phi):
    rho = effective_density(random_state(seed), LocalFrame.from_dict({"theta": axis_theta, "phi": axis_phi})).rho
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-10


def test_effective_density_multimode_purity_drops():
    assert purity(effective_density(random_state(11)).rho) < 1 - 1e-9
