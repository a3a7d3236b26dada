"""Circuits: morphisms of the free symmetric monoidal category over a gate signature.

A circuit is stored as a port graph.  Domain wires carry the ids
``0 .. len(dom)-1``; every node consumes previously produced wire ids and
produces fresh ones; ``outputs`` lists the wire ids that form the codomain.
Each produced wire is consumed exactly once, either by a node or by the
codomain, so the wiring is a linear, acyclic matching.

Two circuits denote the same morphism iff their canonical forms are
structurally identical (see :func:`canonical_form`).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import IllTypedWiring, ObjectMismatch, ParseError, UnknownGate
from .wires import BIT, QUBIT, UNIT, WireObj, WireType, wire_names, wire_obj


@dataclass(frozen=True)
class GateDecl:
    name: str
    dom: WireObj
    cod: WireObj

    def __post_init__(self):
        object.__setattr__(self, "dom", wire_obj(self.dom))
        object.__setattr__(self, "cod", wire_obj(self.cod))


@dataclass(frozen=True)
class Signature:
    """A finite set of gate declarations, which must include ``zero`` and ``one``."""

    gates: Mapping[str, GateDecl] = field(default_factory=dict)

    def __post_init__(self):
        gates = dict(self.gates) if isinstance(self.gates, Mapping) else {g.name: g for g in self.gates}
        for name, decl in gates.items():
            if decl.name != name:
                raise ParseError(f"gate registered as {name!r} is named {decl.name!r}")
        for name in ("zero", "one"):
            decl = gates.get(name)
            if decl is None or decl.dom != UNIT or decl.cod != (BIT,):
                raise ParseError(f"signature must declare {name} : I -> [BIT]")
        object.__setattr__(self, "gates", gates)

    def __getitem__(self, name: str) -> GateDecl:
        try:
            return self.gates[name]
        except KeyError:
            raise UnknownGate(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self.gates

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.gates.items())))

    def extend(self, *decls: GateDecl) -> "Signature":
        gates = dict(self.gates)
        for d in decls:
            if d.name in gates:
                raise ParseError(f"duplicate gate {d.name!r}")
            gates[d.name] = d
        return Signature(gates)


def default_signature() -> Signature:
    q, b = (QUBIT,), (BIT,)
    decls = [
        GateDecl("zero", UNIT, b),
        GateDecl("one", UNIT, b),
        GateDecl("init", b, q),
        GateDecl("meas", q, b),
        GateDecl("discard_bit", b, UNIT),
        GateDecl("discard_qubit", q, UNIT),
        GateDecl("CNOT", (QUBIT, QUBIT), (QUBIT, QUBIT)),
    ]
    decls += [GateDecl(name, q, q) for name in ("H", "X", "Z", "S", "Tg")]
    return Signature({d.name: d for d in decls})


@dataclass(frozen=True)
class Node:
    gate: GateDecl
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]


@dataclass(frozen=True)
class Circuit:
    dom: WireObj
    cod: WireObj
    nodes: Tuple[Node, ...] = ()
    outputs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "dom", wire_obj(self.dom))
        object.__setattr__(self, "cod", wire_obj(self.cod))
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        _check_wiring(self)

    def __len__(self) -> int:
        return len(self.nodes)

    def gate_names(self) -> List[str]:
        return [n.gate.name for n in self.nodes]

    def __repr__(self) -> str:
        body = "; ".join(f"{n.gate.name}{list(n.inputs)}->{list(n.outputs)}" for n in self.nodes)
        return f"Circuit({wire_names(self.dom)} -> {wire_names(self.cod)}: {body} | out={list(self.outputs)})"


def _check_wiring(c: Circuit) -> None:
    """Enforce linearity, acyclicity and type agreement."""
    live: Dict[int, WireType] = {i: t for i, t in enumerate(c.dom)}
    seen = set(live)
    for node in c.nodes:
        if len(node.inputs) != len(node.gate.dom) or len(node.outputs) != len(node.gate.cod):
            raise IllTypedWiring(f"{node.gate.name}: port count does not match declaration")
        if len(set(node.inputs)) != len(node.inputs):
            raise IllTypedWiring(f"{node.gate.name}: wire used twice")
        for w, t in zip(node.inputs, node.gate.dom):
            if w not in live:
                raise IllTypedWiring(f"{node.gate.name}: wire {w} is not live")
            if live[w] is not t:
                raise IllTypedWiring(f"{node.gate.name}: wire {w} has type {live[w]!r}, expected {t!r}")
            del live[w]
        for w, t in zip(node.outputs, node.gate.cod):
            if w in seen:
                raise IllTypedWiring(f"{node.gate.name}: wire {w} produced twice")
            seen.add(w)
            live[w] = t
    if len(c.outputs) != len(c.cod) or len(set(c.outputs)) != len(c.outputs):
        raise IllTypedWiring("outputs must list each codomain wire once")
    if set(c.outputs) != set(live):
        raise IllTypedWiring("every live wire must reach the codomain exactly once")
    for w, t in zip(c.outputs, c.cod):
        if live[w] is not t:
            raise IllTypedWiring(f"output wire {w} has type {live[w]!r}, expected {t!r}")


def _relabel(dom: WireObj, cod: WireObj, nodes: Iterable[Node], outputs: Sequence[int]) -> Circuit:
    """Renumber wires densely: domain first, then node outputs in node order."""
    ren = {i: i for i in range(len(dom))}
    out_nodes = []
    for node in nodes:
        ins = tuple(ren[w] for w in node.inputs)
        outs = []
        for w in node.outputs:
            ren[w] = len(ren)
            outs.append(ren[w])
        out_nodes.append(Node(node.gate, ins, tuple(outs)))
    return Circuit(dom, cod, tuple(out_nodes), tuple(ren[w] for w in outputs))


def _shift(nodes: Iterable[Node], mapping: Dict[int, int], offset: int) -> List[Node]:
    def m(w):
        return mapping[w] if w in mapping else w + offset

    return [Node(n.gate, tuple(m(w) for w in n.inputs), tuple(m(w) for w in n.outputs)) for n in nodes]


def _max_id(c: Circuit) -> int:
    ids = list(range(len(c.dom))) + [w for n in c.nodes for w in n.outputs]
    return max(ids, default=-1)


# -- categorical structure --------------------------------------------------


def identity(a: Sequence[WireType]) -> Circuit:
    a = wire_obj(a)
    return Circuit(a, a, (), tuple(range(len(a))))


def compose(f: Circuit, g: Circuit) -> Circuit:
    """Sequential composite: first ``f``, then ``g``."""
    if f.cod != g.dom:
        raise ObjectMismatch(f"cannot compose {wire_names(f.cod)} with {wire_names(g.dom)}")
    offset = _max_id(f) + 1
    glue = {i: f.outputs[i] for i in range(len(g.dom))}
    g_nodes = _shift(g.nodes, glue, offset)
    g_out = [glue[w] if w in glue else w + offset for w in g.outputs]
    return _relabel(f.dom, g.cod, list(f.nodes) + g_nodes, g_out)


def tensor(f: Circuit, g: Circuit) -> Circuit:
    """Parallel composite with ``f`` above ``g``; objects concatenate."""
    nf, ng = len(f.dom), len(g.dom)
    f_map = {i: i for i in range(nf)}
    f_nodes = _shift(f.nodes, f_map, 10 ** 6)
    g_map = {i: nf + i for i in range(ng)}
    g_nodes = _shift(g.nodes, g_map, 2 * 10 ** 6)
    f_out = [w if w < nf else w + 10 ** 6 for w in f.outputs]
    g_out = [g_map[w] if w in g_map else w + 2 * 10 ** 6 for w in g.outputs]
    return _relabel(f.dom + g.dom, f.cod + g.cod, f_nodes + g_nodes, f_out + g_out)


def permutation(a: Sequence[WireType], order: Sequence[int]) -> Circuit:
    """Pure wiring: codomain wire ``k`` is domain wire ``order[k]``."""
    a = wire_obj(a)
    if sorted(order) != list(range(len(a))):
        raise ObjectMismatch(f"{list(order)} is not a permutation of {len(a)} wires")
    return Circuit(a, tuple(a[i] for i in order), (), tuple(order))


def symmetry(a: Sequence[WireType], b: Sequence[WireType]) -> Circuit:
    a, b = wire_obj(a), wire_obj(b)
    na, nb = len(a), len(b)
    return permutation(a + b, list(range(na, na + nb)) + list(range(na)))


def lift_gate(sig: Signature, name: str) -> Circuit:
    decl = sig[name]
    n = len(decl.dom)
    return Circuit(decl.dom, decl.cod, (Node(decl, tuple(range(n)), tuple(range(n, n + len(decl.cod)))),),
                   tuple(range(n, n + len(decl.cod))))


def append_gate(c: Circuit, decl: GateDecl, positions: Sequence[int]) -> Circuit:
    """Apply ``decl`` to the codomain wires at ``positions``.

    The untouched wires keep their order and the gate's outputs are placed
    after them.
    """
    positions = list(positions)
    if len(set(positions)) != len(positions) or any(not 0 <= p < len(c.cod) for p in positions):
        raise ObjectMismatch(f"bad wire positions {positions} for {len(c.cod)} wires")
    if tuple(c.cod[p] for p in positions) != decl.dom:
        raise ObjectMismatch(f"{decl.name} expects {wire_names(decl.dom)}")
    fresh = _max_id(c) + 1
    outs = tuple(range(fresh, fresh + len(decl.cod)))
    node = Node(decl, tuple(c.outputs[p] for p in positions), outs)
    rest = [i for i in range(len(c.cod)) if i not in positions]
    cod = tuple(c.cod[i] for i in rest) + decl.cod
    return _relabel(c.dom, cod, c.nodes + (node,), [c.outputs[i] for i in rest] + list(outs))


def append_circuit(c: Circuit, sub: Circuit, positions: Sequence[int]) -> Circuit:
    """Plug ``sub`` into the codomain wires at ``positions`` (outputs go last)."""
    positions = list(positions)
    if tuple(c.cod[p] for p in positions) != sub.dom or len(set(positions)) != len(positions):
        raise ObjectMismatch(f"wires at {positions} do not match {wire_names(sub.dom)}")
    rest = [i for i in range(len(c.cod)) if i not in positions]
    rest_obj = tuple(c.cod[i] for i in rest)
    front = permute_outputs(c, positions + rest)
    acted = compose(front, tensor(sub, identity(rest_obj)))
    n = len(sub.cod)
    return permute_outputs(acted, list(range(n, n + len(rest))) + list(range(n)))


def permute_outputs(c: Circuit, order: Sequence[int]) -> Circuit:
    return compose(c, permutation(c.cod, order))


def circuit_width(c: Circuit) -> int:
    """Largest number of simultaneously live wires when nodes run in list order."""
    live = width = len(c.dom)
    for node in c.nodes:
        live += len(node.outputs) - len(node.inputs)
        width = max(width, live)
    return width


# -- canonical form ---------------------------------------------------------


def _port_maps(c: Circuit):
    producer = {i: (None, i) for i in range(len(c.dom))}
    consumer = {}
    for k, node in enumerate(c.nodes):
        for p, w in enumerate(node.inputs):
            consumer[w] = (k, p)
        for p, w in enumerate(node.outputs):
            producer[w] = (k, p)
    for p, w in enumerate(c.outputs):
        consumer[w] = (None, p)
    return producer, consumer


def _bfs(c: Circuit, start_wires: Sequence[int], start_nodes: Sequence[int], producer, consumer,
         visited: set) -> List[int]:
    order: List[int] = []
    queue = deque([("w", w) for w in start_wires] + [("n", k) for k in start_nodes])
    while queue:
        kind, x = queue.popleft()
        if kind == "w":
            for end in (producer[x], consumer[x]):
                k = end[0]
                if k is not None and k not in visited:
                    queue.append(("n", k))
            continue
        if x in visited:
            continue
        visited.add(x)
        order.append(x)
        node = c.nodes[x]
        queue.extend(("w", w) for w in node.inputs + node.outputs)
    return order


def _component_signature(c: Circuit, order: List[int], producer, consumer) -> tuple:
    rank = {k: i for i, k in enumerate(order)}
    sig = []
    for k in order:
        node = c.nodes[k]
        ins = tuple((rank.get(producer[w][0], -1), producer[w][1]) for w in node.inputs)
        outs = tuple((rank.get(consumer[w][0], -1), consumer[w][1]) for w in node.outputs)
        sig.append((node.gate.name, ins, outs))
    return tuple(sig)


def _node_ranks(c: Circuit) -> Dict[int, int]:
    """A labelling of nodes that depends only on the port graph, not on ids."""
    producer, consumer = _port_maps(c)
    visited: set = set()
    order = _bfs(c, list(range(len(c.dom))) + list(c.outputs), [], producer, consumer, visited)
    # Components not reachable from the boundary (closed scalars).
    floating = []
    remaining = [k for k in range(len(c.nodes)) if k not in visited]
    while remaining:
        comp = set(_bfs(c, [], [remaining[0]], producer, consumer, set()))
        best = None
        for start in sorted(comp):
            o = _bfs(c, [], [start], producer, consumer, set())
            key = _component_signature(c, o, producer, consumer)
            if best is None or key < best[0]:
                best = (key, o)
        floating.append(best)
        visited |= comp
        remaining = [k for k in remaining if k not in comp]
    for _, o in sorted(floating, key=lambda t: t[0]):
        order.extend(o)
    return {k: i for i, k in enumerate(order)}


def canonical_form(c: Circuit) -> Circuit:
    """Re-list nodes in a representation-independent order.

    Nodes are grouped by layer (longest path from the domain); inside a
    layer they are ordered by the smallest canonical id among the wires
    they consume, with a boundary-anchored traversal rank deciding between
    nodes that consume nothing.  Wires are then renumbered densely.
    """
    producer, _ = _port_maps(c)
    layer: Dict[int, int] = {}
    for k, node in enumerate(c.nodes):
        layer[k] = 1 + max((layer[producer[w][0]] for w in node.inputs if producer[w][0] is not None),
                           default=0)
    rank = _node_ranks(c)
    ren = {i: i for i in range(len(c.dom))}
    by_layer: Dict[int, List[int]] = {}
    for k, l in layer.items():
        by_layer.setdefault(l, []).append(k)
    ordered: List[int] = []
    for l in sorted(by_layer):
        ks = sorted(by_layer[l],
                    key=lambda k: (min((ren[w] for w in c.nodes[k].inputs), default=-1), rank[k]))
        for k in ks:
            ordered.append(k)
            for w in c.nodes[k].outputs:
                ren[w] = len(ren)
    return _relabel(c.dom, c.cod, [c.nodes[k] for k in ordered], c.outputs)


def equivalent(f: Circuit, g: Circuit) -> bool:
    return canonical_form(f) == canonical_form(g)


# -- serialization ----------------------------------------------------------


def to_json(c: Circuit) -> dict:
    return {
        "dom": wire_names(c.dom),
        "cod": wire_names(c.cod),
        "nodes": [{"gate": n.gate.name, "in": list(n.inputs), "out": list(n.outputs)} for n in c.nodes],
        "out": list(c.outputs),
    }


def serialize(c: Circuit) -> str:
    return json.dumps(to_json(c), separators=(",", ":"))


def from_json(sig: Signature, data) -> Circuit:
    try:
        dom = wire_obj(data["dom"])
        cod = wire_obj(data["cod"])
        raw_nodes = data["nodes"]
        out = data["out"]
        nodes = []
        for rn in raw_nodes:
            decl = sig[rn["gate"]]
            ins, outs = rn["in"], rn["out"]
            if not all(isinstance(w, int) for w in list(ins) + list(outs)):
                raise ParseError("wire ids must be integers")
            nodes.append(Node(decl, tuple(ins), tuple(outs)))
        if not all(isinstance(w, int) for w in out):
            raise ParseError("wire ids must be integers")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed circuit: {exc}") from None
    return Circuit(dom, cod, tuple(nodes), tuple(out))


def deserialize(sig: Signature, text: str) -> Circuit:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from None
    if not isinstance(data, dict):
        raise ParseError("circuit must be a JSON object")
    return from_json(sig, data)


class CircuitBuilder:
    """Imperative helper that grows a circuit over named wires.

    Wire names are consumed linearly: applying a gate removes its input
    names and binds its output names.
    """

    def __init__(self, inputs: Sequence[Tuple[str, WireType]] = ()):
        self._circuit = identity([t for _, t in inputs])
        self._names: List[str] = [n for n, _ in inputs]
        if len(set(self._names)) != len(self._names):
            raise IllTypedWiring("duplicate input names")

    @property
    def live(self) -> List[str]:
        return list(self._names)

    def _plug(self, args: Sequence[str], results: Sequence[str], n_out: int, what: str, attach) -> None:
        results = list(results)
        if len(results) != n_out:
            raise IllTypedWiring(f"{what} produces {n_out} wires")
        missing = [a for a in args if a not in self._names]
        if missing:
            raise IllTypedWiring(f"unknown or consumed wires {missing}")
        pos = [self._names.index(a) for a in args]
        rest = [n for i, n in enumerate(self._names) if i not in pos]
        clash = set(rest) & set(results)
        if clash or len(set(results)) != len(results):
            raise IllTypedWiring(f"wire names {sorted(clash) or results} already bound")
        self._circuit = attach(self._circuit, pos)
        self._names = rest + results

    def gate(self, decl: GateDecl, args: Sequence[str], results: Optional[Sequence[str]] = None) -> None:
        results = args if results is None else results
        self._plug(args, results, len(decl.cod), decl.name, lambda c, pos: append_gate(c, decl, pos))

    def subcircuit(self, sub: Circuit, args: Sequence[str], results: Optional[Sequence[str]] = None) -> None:
        results = args if results is None else results
        self._plug(args, results, len(sub.cod), "subcircuit", lambda c, pos: append_circuit(c, sub, pos))

    def finish(self, outputs: Sequence[str]) -> Circuit:
        if sorted(outputs) != sorted(self._names) or len(set(outputs)) != len(outputs):
            raise IllTypedWiring(f"outputs {list(outputs)} must list live wires {self._names} once each")
        return permute_outputs(self._circuit, [self._names.index(o) for o in outputs])
