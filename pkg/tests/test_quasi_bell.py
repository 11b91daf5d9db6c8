import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasibell import fock_numerics as fn
from quasibell import quasi_bell as qb
from quasibell.errors import DegenerateStateError, InvalidArgumentError

HALF = math.sqrt(math.log(2.0) / 2.0)   # |alpha| with s = 1/2
moduli = st.floats(0.05, 2.0)
phases = st.floats(-math.pi, math.pi)


def test_overlap_and_angle_at_half():
    spec = qb.make_channel(HALF, HALF)
    assert math.isclose(spec.s, 0.5, rel_tol=1e-15)
    assert math.isclose(spec.theta_mix, math.pi / 12, rel_tol=1e-14)
    assert math.isclose(spec.cos2theta, math.sqrt(3) / 2, rel_tol=1e-14)


def test_label_for_angle_round_trip():
    for t in (0.01, 0.3, math.pi / 8, 0.7):
        assert math.isclose(qb.make_channel(qb.label_for_angle(t), 1.0).theta_mix, t, rel_tol=1e-12)
    assert qb.label_for_angle(math.pi / 4) == 0.0
    with pytest.raises(InvalidArgumentError):
        qb.label_for_angle(0.0)
    with pytest.raises(InvalidArgumentError):
        qb.label_for_angle(1.0)


def test_gram_values_at_half():
    g = qb.gram_matrix(qb.make_channel(HALF, HALF))
    assert math.isclose(g[0, 2], 0.8, rel_tol=1e-14)
    assert g[1, 3] == 0.0
    assert np.allclose(np.diag(g), 1.0)
    assert g[0, 1] == g[0, 3] == g[1, 2] == g[2, 3] == 0.0


def test_gram_degenerate_odd_entry():
    g = qb.gram_matrix(qb.make_channel(0.0, 0.0))
    assert g[0, 2] == 1.0
    assert math.isnan(g[1, 3])


def test_gram_against_explicit_kets():
    spec = qb.make_channel(0.7, 0.4 + 0.3j)
    states = [qb.quasi_bell_state(i, spec).ket for i in qb.INDICES]
    explicit = np.array([[abs(fn.inner(u, v)) for v in states] for u in states])
    assert np.max(np.abs(explicit - qb.gram_matrix(spec))) <= 1e-12


@pytest.mark.parametrize("i", qb.INDICES)
def test_states_are_normalized(i):
    spec = qb.make_channel(0.5, 1.2)
    assert math.isclose(qb.quasi_bell_state(i, spec).ket.norm(), 1.0, abs_tol=1e-13)


def test_odd_state_degenerate():
    spec = qb.make_channel(0.0, 0.0)
    for i in (2, 4):
        with pytest.raises(DegenerateStateError):
            qb.norm_const(i, spec)
        with pytest.raises(DegenerateStateError):
            qb.reduced_eigs(i, spec)
    assert qb.norm_const(1, spec) == 0.5


def test_bad_index():
    with pytest.raises(InvalidArgumentError):
        qb.reduced_eigs(5, qb.make_channel(1.0, 1.0))


@settings(max_examples=60, deadline=None)
@given(moduli, moduli, st.sampled_from(qb.INDICES))
def test_reduced_eigs_sum_to_one(a, b, i):
    lam = qb.reduced_eigs(i, qb.make_channel(a, b))
    assert abs(sum(lam) - 1.0) <= 1e-14
    assert min(lam) >= 0.0


@settings(max_examples=25, deadline=None)
@given(moduli, moduli, phases, phases, st.sampled_from(qb.INDICES))
def test_phase_invariance(a, b, pa, pb, i):
    spec = qb.make_channel(a, b)
    rot = spec.rotated(pa, pb)
    assert np.allclose(qb.reduced_eigs(i, spec), qb.reduced_eigs(i, rot), atol=1e-14)
    assert np.allclose(qb.gram_matrix(spec), qb.gram_matrix(rot), atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(moduli, moduli, st.sampled_from(qb.INDICES))
def test_entropy_symmetric_under_label_swap(a, b, i):
    assert math.isclose(qb.entanglement_entropy(i, qb.make_channel(a, b)),
                        qb.entanglement_entropy(i, qb.make_channel(b, a)), abs_tol=1e-12)


def test_entropy_on_diagonal():
    grid = np.linspace(0.05, 3.0, 60)
    for i in (1, 3):
        ent = [qb.entanglement_entropy(i, qb.make_channel(x, x)) for x in grid]
        assert np.all(np.diff(ent) > 0)
        assert abs(ent[-1] - 1.0) < 1e-6
    # odd states are maximally entangled all along the diagonal
    for i in (2, 4):
        for x in grid:
            assert math.isclose(qb.entanglement_entropy(i, qb.make_channel(x, x)), 1.0, abs_tol=1e-14)


def test_entropy_product_limit():
    assert qb.entanglement_entropy(1, qb.make_channel(1.0, 0.0)) == 0.0
    assert qb.entanglement_entropy(3, qb.make_channel(0.0, 2.0)) == 0.0


def test_squared_form_agrees_on_even_slice_only():
    spec = qb.make_channel(0.8, 0.8)
    for i in (1, 3):
        assert np.allclose(qb.squared_form_eigs(i, spec), qb.reduced_eigs(i, spec), atol=1e-15)
    assert not np.allclose(qb.squared_form_eigs(2, spec), qb.reduced_eigs(2, spec), atol=1e-6)
    off = qb.make_channel(0.3, 1.0)
    assert abs(sum(qb.squared_form_eigs(1, off)) - 1.0) > 1e-3


@settings(max_examples=40, deadline=None)
@given(moduli, moduli)
def test_schmidt_concurrence_of_channel_state(a, b):
    spec = qb.make_channel(a, b)
    rep = qb.entanglement_report(3, spec)
    assert math.isclose(rep.concurrence, qb.concurrence_channel(spec), rel_tol=1e-12, abs_tol=1e-15)


def test_concurrence_from_angles():
    spec = qb.channel_from_angles(0.3, 0.5)
    expected = math.cos(0.6) * math.cos(1.0) / (1 + math.sin(0.6) * math.sin(1.0))
    assert math.isclose(qb.concurrence_channel(spec), expected, rel_tol=1e-13)


@settings(max_examples=40, deadline=None)
@given(moduli, moduli)
def test_index_symmetry_exact(a, b):
    spec = qb.make_channel(a, b)
    assert qb.reduced_eigs(1, spec) == qb.reduced_eigs(3, spec)
    assert qb.reduced_eigs(2, spec) == qb.reduced_eigs(4, spec)


def test_even_entropy_increases_toward_one():
    ent = [qb.entanglement_entropy(1, qb.make_channel(x, x)) for x in (0.2, 0.5, 1.0, 2.0, 3.0)]
    assert all(b > a for a, b in zip(ent, ent[1:]))
    assert ent[-1] <= 1.0
