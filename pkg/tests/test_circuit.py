import json

import numpy as np
import pytest
from hypothesis import given

from twotime import circuit as cm
from twotime.circuit import CircuitBuilder, GateDecl, Signature
from twotime.errors import IllTypedWiring, ObjectMismatch, ParseError, UnknownGate
from twotime.generators import random_circuit
from twotime.wires import BIT, QUBIT

from conftest import seeds

SIG = cm.default_signature()

PLUS_PREP = (
    '{"dom":[],"cod":["QUBIT"],"nodes":[{"gate":"zero","in":[],"out":[0]},'
    '{"gate":"init","in":[0],"out":[1]},{"gate":"H","in":[1],"out":[2]}],"out":[2]}'
)
BELL_MEAS = (
    '{"dom":["QUBIT","QUBIT"],"cod":["BIT","QUBIT"],"nodes":[{"gate":"H","in":[0],"out":[2]},'
    '{"gate":"CNOT","in":[2,1],"out":[3,4]},{"gate":"meas","in":[4],"out":[5]}],"out":[5,3]}'
)


def bell_measure():
    b = CircuitBuilder([("a", QUBIT), ("b", QUBIT)])
    b.gate(SIG["H"], ["a"])
    b.gate(SIG["CNOT"], ["a", "b"])
    b.gate(SIG["meas"], ["b"], ["m"])
    return b.finish(["m", "a"])


def test_default_signature_gates():
    assert set(SIG.gates) == {"zero", "one", "init", "meas", "discard_bit", "discard_qubit",
                              "CNOT", "H", "X", "Z", "S", "Tg"}
    assert SIG["CNOT"].dom == (QUBIT, QUBIT)
    assert SIG["meas"].cod == (BIT,)


def test_signature_requires_zero_and_one():
    with pytest.raises(ParseError):
        Signature({"H": GateDecl("H", (QUBIT,), (QUBIT,))})


def test_unknown_gate():
    with pytest.raises(UnknownGate):
        SIG["Toffoli"]


def test_serialization_frozen():
    c = cm.compose(cm.compose(cm.lift_gate(SIG, "zero"), cm.lift_gate(SIG, "init")), cm.lift_gate(SIG, "H"))
    assert cm.serialize(c) == PLUS_PREP
    assert cm.serialize(bell_measure()) == BELL_MEAS


def test_symmetry_is_pure_rewiring():
    c = cm.symmetry((QUBIT,), (BIT,))
    assert c.nodes == ()
    assert cm.to_json(c) == {"dom": ["QUBIT", "BIT"], "cod": ["BIT", "QUBIT"], "nodes": [], "out": [1, 0]}


def test_round_trip_through_json():
    c = bell_measure()
    assert cm.deserialize(SIG, cm.serialize(c)) == c


@pytest.mark.parametrize("text, err", [
    ("not json", ParseError),
    ('{"dom":[],"cod":[],"nodes":[{"gate":"Foo","in":[],"out":[]}],"out":[]}', UnknownGate),
    ('{"dom":["QUBIT"],"cod":["QUBIT","QUBIT"],"nodes":[],"out":[0,0]}', IllTypedWiring),
    ('{"dom":["BIT"],"cod":["BIT"],"nodes":[{"gate":"H","in":[0],"out":[1]}],"out":[1]}', IllTypedWiring),
    ('{"dom":["QUBIT"],"cod":["QUBIT"],"nodes":[],"out":[7]}', IllTypedWiring),
])
def test_deserialize_rejects_bad_files(text, err):
    with pytest.raises(err):
        cm.deserialize(SIG, text)


def test_compose_type_mismatch():
    with pytest.raises(ObjectMismatch):
        cm.compose(cm.lift_gate(SIG, "meas"), cm.lift_gate(SIG, "H"))


def test_builder_linearity():
    b = CircuitBuilder([("q", QUBIT)])
    b.gate(SIG["meas"], ["q"], ["m"])
    with pytest.raises(IllTypedWiring):
        b.gate(SIG["H"], ["q"])
    with pytest.raises(IllTypedWiring):
        b.finish([])


def test_interchange_holds_only_up_to_canonical_form():
    h, x = cm.lift_gate(SIG, "H"), cm.lift_gate(SIG, "X")
    one = cm.identity((QUBIT,))
    left = cm.compose(cm.tensor(h, one), cm.tensor(one, x))
    right = cm.compose(cm.tensor(one, x), cm.tensor(h, one))
    assert left != right
    assert cm.equivalent(left, right)
    assert cm.equivalent(left, cm.tensor(h, x))


def test_canonical_form_distinguishes_gate_order():
    h, s = cm.lift_gate(SIG, "H"), cm.lift_gate(SIG, "S")
    assert not cm.equivalent(cm.compose(h, s), cm.compose(s, h))


def test_canonical_form_of_floating_scalars():
    z = cm.compose(cm.lift_gate(SIG, "zero"), cm.lift_gate(SIG, "discard_bit"))
    o = cm.compose(cm.lift_gate(SIG, "one"), cm.lift_gate(SIG, "discard_bit"))
    assert cm.equivalent(cm.tensor(z, o), cm.tensor(o, z))
    assert not cm.equivalent(cm.tensor(z, z), cm.tensor(o, z))


def test_circuit_width():
    assert cm.circuit_width(bell_measure()) == 2
    c = cm.tensor(cm.lift_gate(SIG, "zero"), cm.lift_gate(SIG, "zero"))
    assert cm.circuit_width(c) == 2


@given(seeds)
def test_random_circuits_survive_json(seed):
    c = random_circuit(SIG, np.random.default_rng(seed))
    back = cm.from_json(SIG, json.loads(cm.serialize(c)))
    assert back == c


@given(seeds)
def test_canonical_form_is_idempotent_and_invariant(seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(SIG, rng)
    k = cm.canonical_form(c)
    assert cm.canonical_form(k) == k
    # composing with an identity leaves the canonical form unchanged
    assert cm.canonical_form(cm.compose(c, cm.identity(c.cod))) == k


@given(seeds)
def test_canonical_form_is_a_congruence(seed):
    rng = np.random.default_rng(seed)
    f = random_circuit(SIG, rng, 3, 5)
    g = random_circuit(SIG, rng, 3, 5, dom=f.cod)
    h = random_circuit(SIG, rng, 2, 4)
    kf, kg = cm.canonical_form(f), cm.canonical_form(g)
    assert cm.equivalent(cm.compose(f, g), cm.compose(kf, kg))
    assert cm.equivalent(cm.tensor(f, h), cm.tensor(kf, h))


@given(seeds)
def test_hexagon_and_involution(seed):
    rng = np.random.default_rng(seed)
    a, b, c = ([BIT, QUBIT][i] for i in rng.integers(0, 2, 3))
    a, b, c = (a,), (b,), (c,)
    hexagon = cm.compose(cm.tensor(cm.symmetry(a, b), cm.identity(c)), cm.tensor(cm.identity(b), cm.symmetry(a, c)))
    assert cm.equivalent(cm.symmetry(a, b + c), hexagon)
    assert cm.equivalent(cm.compose(cm.symmetry(a, b), cm.symmetry(b, a)), cm.identity(a + b))
