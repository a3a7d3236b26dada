import json

import numpy as np
import pytest
from hypothesis import given

from twotime import circuit as cm
from twotime import quantum as qm
from twotime.errors import DynLiftInsideBox, LinearityError, NotABit, ObjectMismatch, ParseError, ScopeError
from twotime.examples import BOX_DEMO, COINFLIP, EXAMPLES, TELEPORT
from twotime.generators import random_program, random_state
from twotime.interp import default_interp, signature_from_json
from twotime.kleisli import consistency_deviation
from twotime.program import (aggregate_channel, check_program, parse_program, program_from_json, program_to_json,
                             result_to_json, run, sample)
from twotime.wires import BIT, QUBIT

from conftest import seeds


def prog(body, inputs=()):
    return program_from_json({"inputs": [list(i) for i in inputs], "body": body})


def test_examples_round_trip():
    for name, (data, _) in EXAMPLES.items():
        p = program_from_json(data)
        assert program_from_json(json.loads(json.dumps(program_to_json(p)))) == p


def test_coinflip(sig, gi):
    res = run(gi, sig, program_from_json(COINFLIP))
    assert [b.params for b in res.branches] == [(False,), (True,)]
    assert [b.prob for b in res.branches] == pytest.approx([0.5, 0.5], abs=1e-15)


def test_new_from_parameter_then_lift(sig, gi):
    p = prog([
        {"op": "NEW", "name": "q", "type": "QUBIT"},
        {"op": "GATE", "gate": "X", "args": ["q"]},
        {"op": "MEASURE", "wire": "q", "result": "m"},
        {"op": "DYNLIFT", "wire": "m", "param": "b"},
        {"op": "NEW", "name": "c", "param": "b"},
        {"op": "GATE", "gate": "init", "args": ["c"]},
        {"op": "MEASURE", "wire": "c", "result": "m2"},
        {"op": "DYNLIFT", "wire": "m2", "param": "b2"},
        {"op": "RETURN", "wires": []},
    ])
    res = run(gi, sig, p)
    assert [(b.prob, b.params) for b in res.branches] == [(1.0, (True, True))]


def test_teleport_branches_and_states(sig, gi):
    p = program_from_json(TELEPORT)
    psi = np.array([0.6, 0.8j])
    initial = qm.basis_state((QUBIT,), psi=psi)
    res = run(gi, sig, p, initial)
    assert [b.params for b in res.branches] == [(False, False), (False, True), (True, False), (True, True)]
    for b in res.branches:
        assert b.prob == pytest.approx(0.25, abs=1e-12)
        assert b.live == ("b",)
        assert b.state.distance(initial) <= 1e-12
        assert consistency_deviation(gi, b, initial) <= 1e-12
    # corrections appear in the generated circuit only where they were needed
    names = [[n.gate.name for n in b.trace.nodes] for b in res.branches]
    assert ["X" in n for n in names] == [False, False, True, True]
    assert ["Z" in n for n in names] == [False, True, False, True]


def test_teleport_aggregate_channel_is_identity(sig, gi):
    e = aggregate_channel(gi, sig, program_from_json(TELEPORT))
    assert e.distance(qm.identity_q((QUBIT,))) <= 1e-9


def test_box_demo_builds_parameter_dependent_circuits():
    sig, gi = signature_from_json(EXAMPLES["box-demo"][1])
    res = run(gi, sig, program_from_json(BOX_DEMO))
    assert [b.params for b in res.branches] == [(False,), (True,)]
    for b in res.branches:
        np.testing.assert_allclose(b.state.vec, [0.5, 0.5], atol=1e-12)
    heads = [{n.gate.name for n in b.trace.nodes} for b in res.branches]
    assert "SX" not in heads[0] and "SX" in heads[1]
    boxed = [b.boxed("f").element.circuit for b in res.branches]
    assert not cm.equivalent(boxed[0], boxed[1])


def test_box_with_measurement_is_allowed(sig, gi):
    p = prog([
        {"op": "BOX", "name": "m", "inputs": [["u", "QUBIT"]],
         "body": [{"op": "MEASURE", "wire": "u", "result": "r"}, {"op": "RETURN", "wires": ["r"]}]},
        {"op": "APPLY_BOXED", "box": "m", "args": ["q"], "results": ["r"]},
        {"op": "APPLY_BOXED", "box": "m", "args": ["q2"], "results": ["r2"]},
        {"op": "RETURN", "wires": ["r", "r2"]},
    ], [("q", "QUBIT"), ("q2", "QUBIT")])
    assert check_program(sig, p) == (BIT, BIT)
    res = run(gi, sig, p, qm.basis_state((QUBIT, QUBIT), psi=[0, 0, 0, 1]))
    assert set(res.branches[0].state.nonzero_blocks()) == {"11"}


def test_dynlift_inside_box_is_rejected(sig, gi):
    p = prog([
        {"op": "BOX", "name": "f", "inputs": [["u", "QUBIT"]],
         "body": [{"op": "MEASURE", "wire": "u", "result": "r"},
                  {"op": "DYNLIFT", "wire": "r", "param": "x"},
                  {"op": "RETURN", "wires": []}]},
        {"op": "RETURN", "wires": []},
    ])
    with pytest.raises(DynLiftInsideBox):
        run(gi, sig, p)


@pytest.mark.parametrize("body, inputs, err", [
    ([{"op": "GATE", "gate": "H", "args": ["ghost"]}, {"op": "RETURN", "wires": []}], (), ScopeError),
    ([{"op": "MEASURE", "wire": "q", "result": "m"}, {"op": "GATE", "gate": "H", "args": ["q"]},
      {"op": "RETURN", "wires": ["m"]}], [("q", "QUBIT")], LinearityError),
    ([{"op": "RETURN", "wires": []}], [("q", "QUBIT")], LinearityError),
    ([{"op": "GATE", "gate": "CNOT", "args": ["q", "q"]}, {"op": "RETURN", "wires": ["q"]}],
     [("q", "QUBIT")], LinearityError),
    ([{"op": "DYNLIFT", "wire": "q", "param": "x"}, {"op": "RETURN", "wires": []}], [("q", "QUBIT")], NotABit),
    ([{"op": "GATE", "gate": "H", "args": ["b"]}, {"op": "RETURN", "wires": ["b"]}], [("b", "BIT")], ObjectMismatch),
    ([{"op": "IF", "param": "nope", "then": [], "else": []}, {"op": "RETURN", "wires": []}], (), ScopeError),
    ([{"op": "APPLY_BOXED", "box": "nope", "args": []}, {"op": "RETURN", "wires": []}], (), ScopeError),
    ([{"op": "NEW", "name": "q", "type": "QUBIT"}], (), ParseError),
    ([{"op": "NEW", "name": "q", "type": "QUBIT"}, {"op": "NEW", "name": "q", "type": "QUBIT"},
      {"op": "RETURN", "wires": ["q"]}], (), LinearityError),
])
def test_static_errors(sig, body, inputs, err):
    with pytest.raises(err):
        check_program(sig, prog(body, inputs))


def test_if_arms_must_agree(sig):
    p = prog([
        {"op": "NEW", "name": "q", "type": "QUBIT"},
        {"op": "MEASURE", "wire": "q", "result": "m"},
        {"op": "DYNLIFT", "wire": "m", "param": "x"},
        {"op": "NEW", "name": "r", "type": "QUBIT"},
        {"op": "IF", "param": "x", "then": [{"op": "MEASURE", "wire": "r", "result": "s"}], "else": []},
        {"op": "RETURN", "wires": ["r"]},
    ])
    with pytest.raises(LinearityError):
        check_program(sig, p)


@pytest.mark.parametrize("text", ["{", "[]", '{"body": [{"op": "JUMP"}]}', '{"body": [{"op": "GATE"}]}'])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_program(text)


def test_result_json_is_deterministic(sig, gi):
    p = program_from_json(TELEPORT)
    a = json.dumps(result_to_json(run(gi, sig, p)))
    b = json.dumps(result_to_json(run(gi, sig, p)))
    assert a == b
    data = json.loads(a)
    assert [br["params"] for br in data["branches"]][0] == [False, False]
    assert cm.from_json(sig, data["branches"][0]["circuit"]).cod == (BIT, BIT, QUBIT)


def test_sampling_is_seeded(sig, gi):
    res = run(gi, sig, program_from_json(COINFLIP))
    assert sample(res, 200, 7) == sample(res, 200, 7)
    assert sum(sample(res, 200, 7).values()) == 200


@given(seeds)
def test_random_programs_conserve_probability_and_agree(seed):
    sig, gi = cm.default_signature(), default_interp()
    rng = np.random.default_rng(seed)
    p = program_from_json(random_program(rng, int(rng.integers(1, 3)), int(rng.integers(2, 9))))
    initial = random_state(p.input_obj, rng)
    res = run(gi, sig, p, initial)
    assert abs(res.computation.total_prob() - 1) <= 1e-10
    for b in res.branches:
        b.state.validate(1e-9)
        assert consistency_deviation(gi, b, initial) <= 1e-9
