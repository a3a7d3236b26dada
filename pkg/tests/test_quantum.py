import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twotime import quantum as qm
from twotime.errors import NotAState, NotUnitary, ObjectMismatch, TooManyWires, WeightMismatch
from twotime.generators import random_channel, random_state, random_wire_obj
from twotime.quantum import CqState, Superop
from twotime.wires import BIT, QUBIT, UNIT

from conftest import seeds

H = qm.unitary_channel(qm.GATE_MATRICES["H"])
X = qm.unitary_channel(qm.GATE_MATRICES["X"])
ZERO = qm.basis_state((QUBIT,))
ONE = qm.basis_state((QUBIT,), psi=[0, 1])
PLUS = qm.basis_state((QUBIT,), psi=np.array([1, 1]) / np.sqrt(2))


def transpose_map() -> Superop:
    # rho -> rho^T on one qubit: a positive but not completely positive map
    m = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            m[j * 2 + i, i * 2 + j] = 1
    return Superop((QUBIT,), (QUBIT,), m)


def test_identity_layouts():
    assert qm.identity_q((BIT, QUBIT)).mat.shape == (8, 8)
    assert np.array_equal(qm.identity_q(UNIT).mat, [[1]])


def test_inj_states():
    u = CqState.unit()
    assert set(qm.apply(qm.inj1(), u).nonzero_blocks()) == {"0"}
    assert set(qm.apply(qm.inj2(), u).nonzero_blocks()) == {"1"}
    copaired = qm.copair_bit(qm.inj1(), qm.inj2())
    assert copaired.close(qm.identity_q((BIT,)))


def test_meas_and_init():
    assert qm.apply(qm.meas_channel(), ONE).nonzero_blocks() == {"1": pytest.approx(np.ones((1, 1)))}
    assert qm.compose_q(qm.init_channel(), qm.meas_channel()).close(qm.identity_q((BIT,)), 0)
    assert qm.unitary_channel(np.eye(2)).close(qm.identity_q((QUBIT,)), 0)


def test_meas_of_plus_is_fair():
    d = qm.decompose_bit_state(qm.apply(qm.meas_channel(), PLUS))
    assert d.p1 == pytest.approx(0.5, abs=1e-15)
    assert d.p2 == pytest.approx(0.5, abs=1e-15)


def test_compiled_meas_h_init_oracle():
    # init then H then meas sends either classical input to a fair coin
    f = qm.compose_q(qm.compose_q(qm.init_channel(), H), qm.meas_channel())
    np.testing.assert_allclose(f.mat, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)


def test_convex_mixture_of_h_and_x_oracle():
    mix = qm.convex_sum([0.5, 0.5], [H, X])
    out = qm.apply(mix, ZERO).blocks[""]
    expected = 0.5 * np.full((2, 2), 0.5) + 0.5 * np.diag([0, 1])
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_convex_sum_trivial_cases():
    assert qm.convex_sum([1.0], [H]).close(H, 0)
    assert qm.convex_sum([0.3, 0.7], [H, H]).close(H, 1e-15)
    with pytest.raises(WeightMismatch):
        qm.convex_sum([0.5], [H, X])
    with pytest.raises(WeightMismatch):
        qm.convex_sum([0.6, 0.6], [H, X])


def test_tensor_of_inj_is_the_classical_pair():
    s = qm.apply(qm.tensor_q(qm.inj1(), qm.inj2()), CqState.unit())
    assert set(s.nonzero_blocks()) == {"01"}


def test_tensor_interleaves_classical_indices():
    # Qubit (x) Bit: the bit index must come first in the vector layout
    f = qm.tensor_q(qm.identity_q((QUBIT,)), qm.inj2())
    s = qm.apply(f, PLUS)
    assert set(s.nonzero_blocks()) == {"1"}
    np.testing.assert_allclose(s.blocks["1"], np.full((2, 2), 0.5), atol=1e-15)


def test_symmetry_swaps_wires():
    s = qm.apply(qm.tensor_q(qm.inj2(), qm.inj1()), CqState.unit())
    assert set(s.nonzero_blocks()) == {"10"}
    swapped = qm.apply(qm.symmetry_q((BIT,), (BIT,)), s)
    assert set(swapped.nonzero_blocks()) == {"01"}


def test_copair_same_map_ignores_bit(rng):
    f = random_channel((QUBIT,), (BIT,), rng)
    assert qm.copair_bit(f, f).close(qm.tensor_q(qm.discard_channel(BIT), f), 1e-14)


def test_copair_type_check():
    with pytest.raises(ObjectMismatch):
        qm.copair_bit(H, qm.meas_channel())


def test_distribute_round_trip_and_support():
    a = (QUBIT, BIT)
    d, dinv = qm.distribute(a), qm.distribute_inv(a)
    assert qm.compose_q(d, dinv).close(qm.identity_q(a + (BIT,)), 0)
    s = qm.apply(qm.tensor_q(qm.identity_q((QUBIT,)), qm.inj1()), PLUS)
    moved = qm.apply(qm.distribute((QUBIT,)), s)
    assert set(moved.nonzero_blocks()) == {"0"}


def test_transpose_is_not_cp():
    rep = qm.is_cp(transpose_map())
    assert not rep.passed
    assert rep.deviation == pytest.approx(1.0)
    assert qm.is_tp(transpose_map()).passed


def test_identity_is_cptp():
    assert qm.is_cp(qm.identity_q((QUBIT, BIT))) == qm.CheckReport(True, 0.0, qm.is_cp(H).detail)
    assert qm.is_tp(H).passed


def test_not_unitary():
    with pytest.raises(NotUnitary):
        qm.unitary_channel([[1, 1], [0, 1]])


def test_too_many_wires():
    with pytest.raises(TooManyWires):
        qm.identity_q((BIT,) * 11)


def test_decompose_pure_branch():
    s = qm.apply(qm.tensor_q(qm.inj1(), qm.identity_q((QUBIT,))), ZERO)
    d = qm.decompose_bit_state(s)
    assert d.p1 == 1.0 and d.p2 == 0.0 and d.f2 is None
    assert d.f1.distance(ZERO) == 0


def test_decompose_rejects_non_states():
    with pytest.raises(ObjectMismatch):
        qm.decompose_bit_state(ZERO)
    bad = CqState((BIT,), [0.7, 0.7])
    with pytest.raises(NotAState):
        qm.decompose_bit_state(bad)


def test_json_round_trips(rng):
    f = random_channel((BIT, QUBIT), (QUBIT,), rng)
    assert qm.superop_from_json(qm.superop_to_json(f)).close(f, 0)
    s = random_state((QUBIT, BIT), rng)
    assert qm.state_from_json(qm.state_to_json(s)).distance(s) == 0


@given(seeds)
def test_random_channels_are_cptp(seed):
    rng = np.random.default_rng(seed)
    a, b = random_wire_obj(rng, 2), random_wire_obj(rng, 2)
    f = random_channel(a, b, rng)
    assert qm.is_cptp(f)


@given(seeds)
def test_cptp_closed_under_operations(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_wire_obj(rng, 2) for _ in range(3))
    f, g, h = random_channel(a, b, rng), random_channel(b, c, rng), random_channel(a, b, rng)
    assert qm.is_cptp(qm.compose_q(f, g))
    assert qm.is_cptp(qm.tensor_q(f, g))
    assert qm.is_cptp(qm.convex_sum([0.25, 0.75], [f, h]))


@given(seeds)
def test_interchange_law(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = (random_wire_obj(rng, 1, 1) for _ in range(4))
    h, f = random_channel(a, b, rng), random_channel(b, c, rng)
    k, g = random_channel(a, d, rng), random_channel(d, c, rng)
    left = qm.compose_q(qm.tensor_q(h, k), qm.tensor_q(f, g))
    right = qm.tensor_q(qm.compose_q(h, f), qm.compose_q(k, g))
    assert left.distance(right) <= 1e-12


@given(seeds, st.floats(0, 1))
def test_bilinearity(seed, p):
    rng = np.random.default_rng(seed)
    a, b = random_wire_obj(rng, 2), random_wire_obj(rng, 2)
    f1, f2, g = random_channel(a, b, rng), random_channel(a, b, rng), random_channel(b, a, rng)
    pre = qm.compose_q(g, qm.convex_sum([p, 1 - p], [f1, f2]))
    expected = qm.convex_sum([p, 1 - p], [qm.compose_q(g, f1), qm.compose_q(g, f2)])
    assert pre.distance(expected) <= 1e-12


@given(seeds)
def test_decomposition_round_trip_and_uniqueness(seed):
    rng = np.random.default_rng(seed)
    rest = random_wire_obj(rng, 2)
    s = random_state((BIT,) + rest, rng)
    d = qm.decompose_bit_state(s)
    back = qm.recompose_bit_state(d, rest)
    assert back.distance(s) <= 1e-12
    if min(d.p1, d.p2) > 0.01:
        d2 = qm.decompose_bit_state(back)
        assert abs(d2.p1 - d.p1) <= 1e-10
        assert d2.f1.distance(d.f1) <= 1e-10 and d2.f2.distance(d.f2) <= 1e-10


@given(seeds)
def test_distribute_preserves_trace(seed):
    rng = np.random.default_rng(seed)
    a = random_wire_obj(rng, 2)
    s = random_state(a + (BIT,), rng)
    assert qm.apply(qm.distribute(a), s).trace() == pytest.approx(1.0, abs=1e-12)
