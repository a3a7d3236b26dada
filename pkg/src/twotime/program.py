"""A small circuit-generating language whose generation can depend on measurements.

Programs are lists of statements over named wires and named boolean
parameters.  Execution is exact: every dynamic lift splits the current
branches according to the Born rule, and every later statement runs once
per branch, so the result is the full distribution over parameter
histories, generated circuits, and final states.

JSON form of a program::

    {"inputs": [["q", "QUBIT"]],
     "body": [
        {"op": "NEW", "name": "a", "type": "QUBIT"},
        {"op": "NEW", "name": "b", "param": "x"},
        {"op": "GATE", "gate": "H", "args": ["a"], "results": ["a"]},
        {"op": "MEASURE", "wire": "a", "result": "m"},
        {"op": "DYNLIFT", "wire": "m", "param": "x"},
        {"op": "IF", "param": "x", "then": [...], "else": [...]},
        {"op": "BOX", "name": "f", "inputs": [["u", "QUBIT"]], "body": [..., {"op": "RETURN", "wires": ["u"]}]},
        {"op": "APPLY_BOXED", "box": "f", "args": ["a"], "results": ["a"]},
        {"op": "RETURN", "wires": ["a"]}]}

``results`` defaults to ``args`` when the arity allows it.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import circuit as cm
from . import quantum as qm
from .circuit import CircuitBuilder, Signature
from .errors import (DynLiftInsideBox, LinearityError, NotABit, ObjectMismatch, ParseError,
                     ScopeError)
from .interp import GateInterp, element_of
from .kleisli import Branch, BoxedCircuit, Computation, apply_element, box, init_map, lift_branch
from .quantum import CqState, Superop
from .wires import BIT, QUBIT, WireType, wire_names, wire_obj


@dataclass(frozen=True)
class New:
    name: str
    type: Optional[WireType] = None
    param: Optional[str] = None


@dataclass(frozen=True)
class Gate:
    gate: str
    args: Tuple[str, ...]
    results: Optional[Tuple[str, ...]] = None


@dataclass(frozen=True)
class Measure:
    wire: str
    result: str


@dataclass(frozen=True)
class DynLift:
    wire: str
    param: str


@dataclass(frozen=True)
class If:
    param: str
    then: Tuple["Stmt", ...]
    orelse: Tuple["Stmt", ...] = ()


@dataclass(frozen=True)
class Box:
    name: str
    inputs: Tuple[Tuple[str, WireType], ...]
    body: Tuple["Stmt", ...]


@dataclass(frozen=True)
class ApplyBoxed:
    box: str
    args: Tuple[str, ...]
    results: Optional[Tuple[str, ...]] = None


@dataclass(frozen=True)
class Return:
    wires: Tuple[str, ...]


Stmt = Union[New, Gate, Measure, DynLift, If, Box, ApplyBoxed, Return]


@dataclass(frozen=True)
class Program:
    inputs: Tuple[Tuple[str, WireType], ...]
    body: Tuple[Stmt, ...]

    @property
    def input_obj(self):
        return tuple(t for _, t in self.inputs)


# -- JSON -------------------------------------------------------------------


def _names(xs) -> Tuple[str, ...]:
    if not isinstance(xs, list) or not all(isinstance(x, str) for x in xs):
        raise ParseError(f"expected a list of names, got {xs!r}")
    return tuple(xs)


def _typed(xs) -> Tuple[Tuple[str, WireType], ...]:
    try:
        return tuple((str(n), wire_obj([t])[0]) for n, t in xs)
    except (TypeError, ValueError):
        raise ParseError(f"expected [[name, type], ...], got {xs!r}") from None


def stmt_from_json(d) -> Stmt:
    if not isinstance(d, dict) or "op" not in d:
        raise ParseError(f"statement must be an object with an 'op': {d!r}")
    op = d["op"]
    try:
        if op == "NEW":
            t = d.get("type")
            return New(d["name"], None if t is None else wire_obj([t])[0], d.get("param"))
        if op == "GATE":
            res = d.get("results")
            return Gate(d["gate"], _names(d["args"]), None if res is None else _names(res))
        if op == "MEASURE":
            return Measure(d["wire"], d["result"])
        if op == "DYNLIFT":
            return DynLift(d["wire"], d["param"])
        if op == "IF":
            return If(d["param"], _body(d.get("then", [])), _body(d.get("else", [])))
        if op == "BOX":
            return Box(d["name"], _typed(d["inputs"]), _body(d["body"]))
        if op == "APPLY_BOXED":
            res = d.get("results")
            return ApplyBoxed(d["box"], _names(d["args"]), None if res is None else _names(res))
        if op == "RETURN":
            return Return(_names(d["wires"]))
    except KeyError as exc:
        raise ParseError(f"{op}: missing field {exc}") from None
    raise ParseError(f"unknown statement {op!r}")


def _body(xs) -> Tuple[Stmt, ...]:
    if not isinstance(xs, list):
        raise ParseError("a body must be a list of statements")
    return tuple(stmt_from_json(x) for x in xs)


def program_from_json(data) -> Program:
    if not isinstance(data, dict):
        raise ParseError("program must be a JSON object")
    return Program(_typed(data.get("inputs", [])), _body(data.get("body", [])))


def parse_program(text: str) -> Program:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from None
    return program_from_json(data)


def stmt_to_json(s: Stmt) -> dict:
    if isinstance(s, New):
        d = {"op": "NEW", "name": s.name}
        if s.type is not None:
            d["type"] = s.type.value
        if s.param is not None:
            d["param"] = s.param
        return d
    if isinstance(s, Gate):
        d = {"op": "GATE", "gate": s.gate, "args": list(s.args)}
        if s.results is not None:
            d["results"] = list(s.results)
        return d
    if isinstance(s, Measure):
        return {"op": "MEASURE", "wire": s.wire, "result": s.result}
    if isinstance(s, DynLift):
        return {"op": "DYNLIFT", "wire": s.wire, "param": s.param}
    if isinstance(s, If):
        return {"op": "IF", "param": s.param, "then": [stmt_to_json(x) for x in s.then],
                "else": [stmt_to_json(x) for x in s.orelse]}
    if isinstance(s, Box):
        return {"op": "BOX", "name": s.name, "inputs": [[n, t.value] for n, t in s.inputs],
                "body": [stmt_to_json(x) for x in s.body]}
    if isinstance(s, ApplyBoxed):
        d = {"op": "APPLY_BOXED", "box": s.box, "args": list(s.args)}
        if s.results is not None:
            d["results"] = list(s.results)
        return d
    return {"op": "RETURN", "wires": list(s.wires)}


def program_to_json(p: Program) -> dict:
    return {"inputs": [[n, t.value] for n, t in p.inputs], "body": [stmt_to_json(s) for s in p.body]}


# -- static checking --------------------------------------------------------


@dataclass
class _Scope:
    wires: Dict[str, WireType]
    consumed: set
    params: set
    boxes: Dict[str, Tuple[tuple, tuple]]

    def copy(self) -> "_Scope":
        return _Scope(dict(self.wires), set(self.consumed), set(self.params), dict(self.boxes))


def _use(scope: _Scope, names: Sequence[str]) -> List[WireType]:
    if len(set(names)) != len(names):
        raise LinearityError(f"wire used twice in one statement: {list(names)}")
    types = []
    for n in names:
        if n not in scope.wires:
            if n in scope.consumed:
                raise LinearityError(f"wire {n!r} was already consumed")
            raise ScopeError(f"unknown wire {n!r}")
        types.append(scope.wires.pop(n))
        scope.consumed.add(n)
    return types


def _bind(scope: _Scope, names: Sequence[str], types: Sequence[WireType]) -> None:
    if len(set(names)) != len(names):
        raise LinearityError(f"duplicate result names {list(names)}")
    for n, t in zip(names, types):
        if n in scope.wires:
            raise LinearityError(f"wire {n!r} is still live")
        scope.wires[n] = t
        scope.consumed.discard(n)


def _results(results, args, n_out: int, what: str) -> Tuple[str, ...]:
    if results is None:
        if len(args) != n_out:
            raise LinearityError(f"{what} produces {n_out} wires; name them with 'results'")
        return tuple(args)
    if len(results) != n_out:
        raise LinearityError(f"{what} produces {n_out} wires, got {len(results)} names")
    return tuple(results)


def _check_param(scope: _Scope, name: str) -> None:
    if name not in scope.params:
        raise ScopeError(f"unknown parameter {name!r}")


Typed = Tuple[Tuple[str, WireType], ...]


def _check_body(sig: Signature, body: Sequence[Stmt], scope: _Scope, in_box: bool) -> Optional[Typed]:
    """Walk a body; return the typed RETURN wires if the body ends with RETURN."""
    for i, s in enumerate(body):
        if isinstance(s, New):
            if (s.type is None) == (s.param is None):
                raise ParseError("NEW needs exactly one of 'type' or 'param'")
            if s.param is not None:
                _check_param(scope, s.param)
            _bind(scope, [s.name], [BIT if s.type is None else s.type])
        elif isinstance(s, Gate):
            decl = sig[s.gate]
            types = _use(scope, s.args)
            if tuple(types) != decl.dom:
                raise ObjectMismatch(f"{s.gate} expects {wire_names(decl.dom)}, got {wire_names(types)}")
            _bind(scope, _results(s.results, s.args, len(decl.cod), s.gate), decl.cod)
        elif isinstance(s, Measure):
            if _use(scope, [s.wire]) != [QUBIT]:
                raise ObjectMismatch(f"MEASURE needs a qubit, {s.wire!r} is a bit")
            _bind(scope, [s.result], [BIT])
        elif isinstance(s, DynLift):
            if in_box:
                raise DynLiftInsideBox(f"DYNLIFT of {s.wire!r} inside a boxed circuit")
            if _use(scope, [s.wire]) != [BIT]:
                raise NotABit(f"DYNLIFT needs a bit, {s.wire!r} is a qubit")
            scope.params.add(s.param)
        elif isinstance(s, If):
            _check_param(scope, s.param)
            arms = []
            for arm in (s.then, s.orelse):
                sub = scope.copy()
                if _check_body(sig, arm, sub, in_box) is not None:
                    raise ParseError("RETURN is only allowed at the end of a program or box body")
                arms.append(sub)
            if arms[0].wires != arms[1].wires:
                raise LinearityError(f"IF on {s.param!r}: arms leave different live wires")
            scope.wires = arms[0].wires
            scope.consumed = arms[0].consumed | arms[1].consumed
            scope.params = arms[0].params & arms[1].params
            scope.boxes = {k: v for k, v in arms[0].boxes.items() if arms[1].boxes.get(k) == v}
        elif isinstance(s, Box):
            # Box bodies see the enclosing parameters and boxes, but no wires.
            inner = _Scope({}, set(), set(scope.params), dict(scope.boxes))
            _bind(inner, [n for n, _ in s.inputs], [t for _, t in s.inputs])
            ret = _check_body(sig, s.body, inner, True)
            if ret is None:
                raise ParseError(f"BOX {s.name!r} body must end with RETURN")
            scope.boxes[s.name] = (tuple(t for _, t in s.inputs), tuple(t for _, t in ret))
        elif isinstance(s, ApplyBoxed):
            if s.box not in scope.boxes:
                raise ScopeError(f"unknown boxed circuit {s.box!r}")
            dom, cod = scope.boxes[s.box]
            types = _use(scope, s.args)
            if tuple(types) != dom:
                raise ObjectMismatch(f"{s.box} expects {wire_names(dom)}, got {wire_names(types)}")
            _bind(scope, _results(s.results, s.args, len(cod), s.box), cod)
        elif isinstance(s, Return):
            if i != len(body) - 1:
                raise ParseError("statements after RETURN")
            if sorted(s.wires) != sorted(scope.wires) or len(set(s.wires)) != len(s.wires):
                unknown = [w for w in s.wires if w not in scope.wires]
                if unknown and all(w not in scope.consumed for w in unknown):
                    raise ScopeError(f"RETURN names unknown wires {unknown}")
                raise LinearityError(f"RETURN {list(s.wires)} must list every live wire {sorted(scope.wires)} once")
            return tuple((w, scope.wires[w]) for w in s.wires)
        else:
            raise ParseError(f"not a statement: {s!r}")
    return None


def check_program(sig: Signature, p: Program) -> Tuple[WireType, ...]:
    """Static scope, linearity and typing check; returns the output type.

    Both arms of every IF are checked, so errors in branches that a given
    run never takes are still reported.
    """
    scope = _Scope({}, set(), set(), {})
    _bind(scope, [n for n, _ in p.inputs], [t for _, t in p.inputs])
    ret = _check_body(sig, p.body, scope, False)
    if ret is None:
        raise ParseError("program must end with RETURN")
    return tuple(t for _, t in ret)


# -- execution --------------------------------------------------------------


@dataclass(frozen=True)
class RunResult:
    outputs: Tuple[str, ...]
    computation: Computation

    @property
    def branches(self) -> Tuple[Branch, ...]:
        return self.computation.branches


def _new_element(gi: GateInterp, sig: Signature, bit: bool, t: WireType):
    e = init_map(bit, gi, sig)
    if t is QUBIT:
        e = element_of(gi, cm.compose(e.circuit, cm.lift_gate(sig, "init")))
    return e


def _build_box(gi: GateInterp, sig: Signature, b: Box, params: Dict[str, bool],
               boxes: Dict[str, BoxedCircuit]) -> BoxedCircuit:
    """Generate a box body as a circuit; no state is touched."""
    builder = CircuitBuilder(b.inputs)
    ret = _build_body(gi, sig, b.body, builder, params, dict(boxes))
    return box(element_of(gi, builder.finish(ret)))


def _build_body(gi, sig, body, builder: CircuitBuilder, params, boxes) -> Optional[Tuple[str, ...]]:
    for s in body:
        if isinstance(s, New):
            bit = params[s.param] if s.param is not None else False
            builder.gate(sig["one" if bit else "zero"], [], [s.name])
            if s.type is QUBIT:
                builder.gate(sig["init"], [s.name])
        elif isinstance(s, Gate):
            decl = sig[s.gate]
            builder.gate(decl, s.args, _results(s.results, s.args, len(decl.cod), s.gate))
        elif isinstance(s, Measure):
            builder.gate(sig["meas"], [s.wire], [s.result])
        elif isinstance(s, DynLift):
            raise DynLiftInsideBox(f"DYNLIFT of {s.wire!r} inside a boxed circuit")
        elif isinstance(s, If):
            _build_body(gi, sig, s.then if params[s.param] else s.orelse, builder, params, boxes)
        elif isinstance(s, Box):
            boxes[s.name] = _build_box(gi, sig, s, params, boxes)
        elif isinstance(s, ApplyBoxed):
            sub = boxes[s.box].element.circuit
            builder.subcircuit(sub, s.args, _results(s.results, s.args, len(sub.cod), s.box))
        elif isinstance(s, Return):
            return s.wires
    return None


def _exec_body(gi: GateInterp, sig: Signature, body: Sequence[Stmt], comp: Computation,
               tol: float) -> Tuple[Computation, Optional[Tuple[str, ...]]]:
    for s in body:
        if isinstance(s, If):
            taken, other = [], []
            for b in comp.branches:
                (taken if b.param(s.param) else other).append(b)
            res_t, _ = _exec_body(gi, sig, s.then, Computation(tuple(taken)), tol)
            res_f, _ = _exec_body(gi, sig, s.orelse, Computation(tuple(other)), tol)
            comp = Computation(res_t.branches + res_f.branches).sorted()
            continue
        if isinstance(s, Return):
            def finish(b: Branch, wires=s.wires) -> List[Branch]:
                k = b.n_lifted
                order = [b.live.index(w) for w in wires]
                return [replace(b, trace=cm.permute_outputs(b.trace, list(range(k)) + [k + i for i in order]),
                                state=qm.permute_state(b.state, order), live=tuple(wires))]
            return _map(comp, finish), s.wires
        comp = _map(comp, lambda b: _step(gi, sig, s, b, tol)).sorted()
    return comp, None


def _map(comp: Computation, fn) -> Computation:
    return Computation(tuple(c for b in comp.branches for c in fn(b)))


def _step(gi: GateInterp, sig: Signature, s: Stmt, b: Branch, tol: float) -> List[Branch]:
    if isinstance(s, New):
        bit = b.param(s.param) if s.param is not None else False
        return [apply_element(b, _new_element(gi, sig, bit, s.type or BIT), [], [s.name])]
    if isinstance(s, Gate):
        decl = sig[s.gate]
        e = element_of(gi, cm.lift_gate(sig, s.gate))
        return [apply_element(b, e, s.args, _results(s.results, s.args, len(decl.cod), s.gate))]
    if isinstance(s, Measure):
        return [apply_element(b, element_of(gi, cm.lift_gate(sig, "meas")), [s.wire], [s.result])]
    if isinstance(s, DynLift):
        return lift_branch(b, s.wire, s.param, tol)
    if isinstance(s, Box):
        params = dict(zip(b.param_names, b.params))
        boxed = _build_box(gi, sig, s, params, dict(b.boxes))
        boxes = tuple((n, v) for n, v in b.boxes if n != s.name) + ((s.name, boxed),)
        return [replace(b, boxes=boxes)]
    if isinstance(s, ApplyBoxed):
        e = b.boxed(s.box).element
        return [apply_element(b, e, s.args, _results(s.results, s.args, len(e.cod), s.box))]
    raise ParseError(f"not a statement: {s!r}")


def run(gi: GateInterp, sig: Signature, p: Program, state: Optional[CqState] = None,
        tol: float = qm.TOL) -> RunResult:
    """Exact convex-tree execution of ``p`` on the input ``state``.

    The default input state puts every input wire in |0> (or bit 0).
    """
    check_program(sig, p)
    comp = Computation.pure(p.inputs, state)
    comp, outputs = _exec_body(gi, sig, p.body, comp, tol)
    return RunResult(tuple(outputs), comp.sorted())


def sample(result: RunResult, shots: int, seed: int) -> Dict[Tuple[bool, ...], int]:
    """Draw parameter histories from the exact distribution (demonstration only)."""
    rng = np.random.default_rng(seed)
    probs = np.array([b.prob for b in result.branches])
    draws = rng.choice(len(probs), size=shots, p=probs / probs.sum())
    counts: Dict[Tuple[bool, ...], int] = {}
    for i in draws:
        key = result.branches[int(i)].params
        counts[key] = counts.get(key, 0) + 1
    return dict(sorted(counts.items()))


_QUBIT_PROBES = [
    np.array([1, 0]),
    np.array([0, 1]),
    np.array([1, 1]) / np.sqrt(2),
    np.array([1, 1j]) / np.sqrt(2),
]


def aggregate_channel(gi: GateInterp, sig: Signature, p: Program, tol: float = qm.TOL) -> Superop:
    """The superoperator ``inputs -> outputs`` obtained by forgetting parameters.

    Runs the program on an informationally complete family of product
    input states and solves the resulting linear system.
    """
    probes_per_wire = []
    for t in p.input_obj:
        if t is BIT:
            probes_per_wire.append([qm.basis_state((BIT,), "0"), qm.basis_state((BIT,), "1")])
        else:
            probes_per_wire.append([qm.basis_state((QUBIT,), psi=v) for v in _QUBIT_PROBES])
    ins, outs, out_obj = [], [], None
    for combo in itertools.product(*probes_per_wire):
        state = qm.CqState((), np.ones(1))
        for s in combo:
            state = _tensor_states(state, s)
        res = run(gi, sig, p, state, tol)
        agg = res.computation.aggregate_state()
        out_obj = agg.obj
        ins.append(state.vec)
        outs.append(agg.vec)
    s_mat, o_mat = np.array(ins).T, np.array(outs).T
    return Superop(p.input_obj, out_obj, o_mat @ np.linalg.inv(s_mat))


def _tensor_states(s1: CqState, s2: CqState) -> CqState:
    prep1 = Superop((), s1.obj, s1.vec.reshape(-1, 1))
    prep2 = Superop((), s2.obj, s2.vec.reshape(-1, 1))
    return CqState(s1.obj + s2.obj, qm.tensor_q(prep1, prep2).mat[:, 0])


def result_to_json(result: RunResult, tol: float = qm.TOL) -> dict:
    return {
        "outputs": list(result.outputs),
        "branches": [
            {
                "prob": float(b.prob),
                "params": list(b.params),
                "param_names": list(b.param_names),
                "circuit": cm.to_json(b.trace),
                "state": qm.state_to_json(b.state, tol),
            }
            for b in result.branches
        ],
    }
