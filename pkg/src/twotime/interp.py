"""The interpretation functor J : M -> Q and global elements of the hom-bisets C(A, B).

A global element of ``C(A, B) = (Q(A, B), M(A, B), J)`` is a circuit
together with the superoperator it denotes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from . import circuit as cm
from . import quantum as qm
from .circuit import Circuit, GateDecl, Signature
from .errors import NotCPTP, ObjectMismatch, ParseError, UnknownGate
from .quantum import Superop
from .wires import BIT, QUBIT, WireType, wire_names, wire_obj


@dataclass(frozen=True)
class GateInterp:
    table: Mapping[str, Superop]

    def __post_init__(self):
        object.__setattr__(self, "table", dict(self.table))

    def __getitem__(self, name: str) -> Superop:
        try:
            return self.table[name]
        except KeyError:
            raise UnknownGate(name) from None

    def check(self, sig: Signature, tol: float = qm.TOL) -> None:
        """Every gate needs an entry of matching type; zero/one must be the injections."""
        for name, decl in sig.gates.items():
            op = self[name]
            if op.dom != decl.dom or op.cod != decl.cod:
                raise ObjectMismatch(f"interpretation of {name} has the wrong type")
        if not self["zero"].close(qm.inj1(), tol) or not self["one"].close(qm.inj2(), tol):
            raise ObjectMismatch("zero and one must interpret as inj1 and inj2")

    def with_entry(self, name: str, op: Superop) -> "GateInterp":
        table = dict(self.table)
        table[name] = op
        return GateInterp(table)


def default_interp() -> GateInterp:
    table = {name: qm.unitary_channel(u) for name, u in qm.GATE_MATRICES.items()}
    table.update(
        zero=qm.inj1(),
        one=qm.inj2(),
        init=qm.init_channel(),
        meas=qm.meas_channel(),
        discard_bit=qm.discard_channel(BIT),
        discard_qubit=qm.discard_channel(QUBIT),
    )
    return GateInterp(table)


def interpret_circuit(gi: GateInterp, c: Circuit) -> Superop:
    """J(c), computed node by node on the list of live wires.

    Each node acts on its input positions (outputs appended after the
    untouched wires); a final wire permutation puts the live wires in
    codomain order.  Objects pass through unchanged.
    """
    live = list(range(len(c.dom)))
    types: Dict[int, WireType] = dict(enumerate(c.dom))
    acc = qm.identity_q(c.dom)
    for node in c.nodes:
        op = gi[node.gate.name]
        pos = [live.index(w) for w in node.inputs]
        acc = qm.compose_q(acc, qm.embed_at(op, [types[w] for w in live], pos))
        live = [w for w in live if w not in node.inputs] + list(node.outputs)
        types.update(zip(node.outputs, node.gate.cod))
    order = [live.index(w) for w in c.outputs]
    if order != list(range(len(order))):
        acc = qm.compose_q(acc, qm.permutation_channel([types[w] for w in live], order))
    return acc


@dataclass(frozen=True)
class GlobalElement:
    circuit: Circuit
    op: Superop

    @property
    def dom(self):
        return self.circuit.dom

    @property
    def cod(self):
        return self.circuit.cod

    def __post_init__(self):
        if self.circuit.dom != self.op.dom or self.circuit.cod != self.op.cod:
            raise ObjectMismatch("circuit and operator have different types")


def element_of(gi: GateInterp, c: Circuit) -> GlobalElement:
    return GlobalElement(c, interpret_circuit(gi, c))


def element_deviation(gi: GateInterp, e: GlobalElement) -> float:
    """How far ``e.op`` is from ``J(e.circuit)``; 0 for a true global element."""
    return e.op.distance(interpret_circuit(gi, e.circuit))


def id_element(a: Sequence[WireType]) -> GlobalElement:
    return GlobalElement(cm.identity(a), qm.identity_q(a))


def compose_elements(e1: GlobalElement, e2: GlobalElement) -> GlobalElement:
    return GlobalElement(cm.compose(e1.circuit, e2.circuit), qm.compose_q(e1.op, e2.op))


def tensor_elements(e1: GlobalElement, e2: GlobalElement) -> GlobalElement:
    return GlobalElement(cm.tensor(e1.circuit, e2.circuit), qm.tensor_q(e1.op, e2.op))


def elements_equal(e1: GlobalElement, e2: GlobalElement, tol: float = qm.TOL) -> bool:
    return cm.equivalent(e1.circuit, e2.circuit) and e1.op.close(e2.op, tol)


# -- signature files ----------------------------------------------------------


def _parse_matrix(entries, shape: Tuple[int, int]) -> np.ndarray:
    try:
        vals = np.array([complex(re, im) for re, im in entries])
        return vals.reshape(shape)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix entries: {exc}") from None


def signature_from_json(data, tol: float = qm.TOL) -> Tuple[Signature, GateInterp]:
    """Parse a signature file extending the default signature.

    The file is a JSON list of ``{name, dom, cod}`` objects, each optionally
    carrying ``interp: {kind: "unitary" | "superop", entries: [[re, im], ...]}``.
    Gates without an interpretation must already be known to the default
    interpretation.  Custom interpretations are checked to be CPTP.
    """
    if not isinstance(data, list):
        raise ParseError("signature file must be a JSON list")
    sig = cm.default_signature()
    gi = default_interp()
    for entry in data:
        try:
            decl = GateDecl(entry["name"], wire_obj(entry["dom"]), wire_obj(entry["cod"]))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad gate declaration: {exc}") from None
        if decl.name in sig:
            if sig[decl.name] != decl:
                raise ParseError(f"gate {decl.name} redeclared with a different type")
        else:
            sig = sig.extend(decl)
        payload = entry.get("interp")
        if payload is None:
            if decl.name not in gi.table:
                raise UnknownGate(f"no interpretation for {decl.name}")
            continue
        kind = payload.get("kind")
        if kind == "unitary":
            d = 2 ** len(decl.dom)
            if decl.dom != decl.cod or any(w is not QUBIT for w in decl.dom):
                raise ParseError(f"unitary gate {decl.name} must be qubits -> same qubits")
            op = qm.unitary_channel(_parse_matrix(payload.get("entries"), (d, d)), tol)
        elif kind == "superop":
            from .wires import vecdim

            mat = _parse_matrix(payload.get("entries"), (vecdim(decl.cod), vecdim(decl.dom)))
            op = Superop(decl.dom, decl.cod, mat)
            if not qm.is_cptp(op, tol):
                raise NotCPTP(f"interpretation of {decl.name} is not CPTP")
        else:
            raise ParseError(f"unknown interpretation kind {kind!r}")
        gi = gi.with_entry(decl.name, op)
    gi.check(sig, tol)
    return sig, gi


def load_signature(path: str | Path, tol: float = qm.TOL) -> Tuple[Signature, GateInterp]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from None
    return signature_from_json(data, tol)


def signature_to_json(sig: Signature) -> list:
    return [
        {"name": d.name, "dom": wire_names(d.dom), "cod": wire_names(d.cod)}
        for d in sorted(sig.gates.values(), key=lambda d: d.name)
    ]
