import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twotime import biset as bs
from twotime.biset import Biset, BisetMap, FinFunction
from twotime.errors import CarrierTooLarge, DomainMismatch


def B(c0, leg):
    """Biset from carrier0 and a leg given as a dict on carrier1."""
    return Biset(frozenset(c0), frozenset(leg), FinFunction(leg))


SMALL = list(bs.biset_iso_classes(2))
small_bisets = st.sampled_from(SMALL)


def test_validate_map_identity():
    a = B({"a", "b"}, {"x": "a"})
    assert bs.validate_map(bs.identity(a))


def test_validate_map_singleton_target_forces_commutation():
    src = B({"a", "b"}, {"x": "a"})
    dst = B({"c"}, {"y": "c"})
    m = BisetMap(src, dst, FinFunction.constant(src.carrier0, "c"), FinFunction.constant(src.carrier1, "y"))
    assert bs.validate_map(m)


def test_validate_map_detects_non_commuting_square():
    src = B({"a", "b"}, {"x": "a"})
    dst = B({"a", "b"}, {"x": "b"})
    m = BisetMap(src, dst, FinFunction.identity(src.carrier0), FinFunction.identity(src.carrier1))
    assert not bs.validate_map(m)


def test_validate_map_requires_total_functions():
    a = B({"a", "b"}, {"x": "a"})
    partial = BisetMap(a, a, FinFunction({"a": "a"}), FinFunction.identity(a.carrier1))
    with pytest.raises(DomainMismatch):
        bs.validate_map(partial)


def test_leg_must_land_in_carrier0():
    with pytest.raises(DomainMismatch):
        Biset(frozenset({0}), frozenset({"x"}), FinFunction({"x": 7}))


def test_product_with_terminal_has_same_shape():
    a = B({0, 1}, {"x": 0, "y": 0, "z": 1})
    p = bs.product(a, bs.TERMINAL)
    assert p.size() == a.size()
    assert bs.validate_map(bs.projection1(a, bs.TERMINAL))


def test_coproduct_with_initial_has_same_shape():
    a = B({0, 1}, {"x": 0})
    assert bs.coproduct(a, bs.INITIAL).size() == a.size()


def test_product_carrier1_size():
    a = B({0}, {"x": 0, "y": 0})
    b = B({0}, {"u": 0, "v": 0, "w": 0})
    assert len(bs.product(a, b).carrier1) == 6


def test_exponential_contains_identity():
    a = B({0, 1}, {"x": 0, "y": 1})
    e = bs.exponential(a, a)
    ident = (FinFunction.identity(a.carrier0), FinFunction.identity(a.carrier1))
    assert ident in e.carrier1
    assert e.leg(ident) == FinFunction.identity(a.carrier0)


def test_exponential_small_oracle():
    a = B({0, 1}, {"a": 0})
    b = B({"x"}, {"y": "x"})
    e = bs.exponential(a, b)
    assert e.size() == (1, 1)


def test_exponential_counts_frozen():
    # A = ({0,1}, {a}, a -> 0), B = ({0,1}, {u, v}, u -> 0, v -> 1):
    # 4 functions A0 -> B0; a valid map needs h1(a) over h0(0): 2 * 1 choices each
    a = B({0, 1}, {"a": 0})
    b = B({0, 1}, {"u": 0, "v": 1})
    assert bs.exponential(a, b).size() == (4, 4)


def test_exponential_guard():
    big = Biset.discrete(range(5))
    with pytest.raises(CarrierTooLarge):
        bs.exponential(big, big)


def test_enumeration_counts_frozen():
    assert sum(1 for _ in bs.all_bisets(3)) == 60
    assert sum(1 for _ in bs.biset_iso_classes(3)) == 18


def test_iso_classes_cover_all_bisets():
    def shape(a):
        fibres = sorted(sum(1 for x in a.carrier1 if a.leg(x) == y) for y in a.carrier0)
        return len(a.carrier0), tuple(fibres)

    assert {shape(a) for a in bs.all_bisets(3)} == {shape(a) for a in bs.biset_iso_classes(3)}


def test_T_is_idempotent_on_discrete():
    d = Biset.discrete({0, 1, 2})
    assert bs.monad_T(d) == d


def test_eta_sends_point_to_its_leg():
    a = B({0, 1}, {"a": 0})
    assert bs.unit_eta(a).h1("a") == 0


@pytest.mark.parametrize("a", list(bs.all_bisets(3)), ids=repr)
def test_monad_unit_laws(a):
    ta = bs.monad_T(a)
    left = bs.compose(bs.T_map(bs.unit_eta(a)), bs.mult_mu(a))
    right = bs.compose(bs.unit_eta(ta), bs.mult_mu(a))
    assert bs.map_distance(left, bs.identity(ta)) == 0
    assert bs.map_distance(right, bs.identity(ta)) == 0


@given(small_bisets, small_bisets)
def test_strength_and_costrength_are_valid_maps(a, b):
    assert bs.validate_map(bs.strength_t(a, b))
    assert bs.validate_map(bs.costrength_s(a, b))


@given(small_bisets, small_bisets, small_bisets)
def test_composites_of_valid_maps_are_valid(a, b, c):
    for m1 in itertools.islice(bs.hom_set(a, b), 8):
        for m2 in itertools.islice(bs.hom_set(b, c), 8):
            assert bs.validate_map(bs.compose(m1, m2))


@given(small_bisets, small_bisets, small_bisets)
def test_currying_round_trip(p, a, b):
    maps = list(bs.hom_set(bs.product(p, a), b))
    assert len(maps) == sum(1 for _ in bs.hom_set(p, bs.exponential(a, b)))
    for m in maps:
        c = bs.curry(m, p, a)
        assert bs.validate_map(c)
        assert bs.map_distance(bs.uncurry(c, a, b), m) == 0


def test_swap_is_an_involution():
    a = B({0, 1}, {"x": 0})
    b = B({"p"}, {"u": "p", "v": "p"})
    twice = bs.compose(bs.swap(a, b), bs.swap(b, a))
    assert bs.map_distance(twice, bs.identity(bs.product(a, b))) == 0


def test_associator_is_valid():
    a, b, c = SMALL[3], SMALL[5], SMALL[-1]
    assert bs.validate_map(bs.associator(a, b, c))
