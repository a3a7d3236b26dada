"""Seeded random objects for property checks: circuits, channels, states."""
from __future__ import annotations

import itertools
from typing import Optional, Sequence

import numpy as np

from . import circuit as cm
from . import quantum as qm
from .circuit import Circuit, Signature
from .quantum import CqState, Superop
from .wires import BIT, QUBIT, UNIT, WireObj, WireType, wire_obj


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix with phase fix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_wire_obj(rng: np.random.Generator, max_wires: int, min_wires: int = 0) -> WireObj:
    n = int(rng.integers(min_wires, max_wires + 1))
    return tuple(BIT if rng.random() < 0.5 else QUBIT for _ in range(n))


def _kraus_channel(n_in: int, n_out: int, rng: np.random.Generator, ancilla: int) -> Superop:
    """Random CPTP map on qubits: Haar unitary on system + ancilla, ancilla traced out.

    Input qubits are padded with |0> ancillas up to the total width, and the
    last ``total - n_out`` qubits are discarded after the unitary.
    """
    total = max(n_in, n_out) + ancilla
    u = haar_unitary(2 ** total, rng)
    # Isometry from the n_in input qubits (remaining qubits prepared in |0>).
    v = u[:, [i << (total - n_in) for i in range(2 ** n_in)]]
    d_out, d_env = 2 ** n_out, 2 ** (total - n_out)
    v = v.reshape(d_out, d_env, 2 ** n_in)
    mat = sum(np.kron(v[:, e, :], v[:, e, :].conj()) for e in range(d_env))
    return Superop((QUBIT,) * n_in, (QUBIT,) * n_out, mat)


def random_channel(dom: Sequence[WireType], cod: Sequence[WireType], rng: np.random.Generator,
                   ancilla: int = 1) -> Superop:
    """A random CPTP map between arbitrary cq-objects.

    BIT inputs are first loaded into qubits with ``init``; BIT outputs are
    produced by measuring qubits.
    """
    dom, cod = wire_obj(dom), wire_obj(cod)
    load = qm.identity_q(UNIT)
    for w in dom:
        load = qm.tensor_q(load, qm.init_channel() if w is BIT else qm.identity_q((QUBIT,)))
    core = _kraus_channel(len(dom), len(cod), rng, ancilla)
    read = qm.identity_q(UNIT)
    for w in cod:
        read = qm.tensor_q(read, qm.meas_channel() if w is BIT else qm.identity_q((QUBIT,)))
    return qm.compose_q(qm.compose_q(load, core), read)


def random_state(obj: Sequence[WireType], rng: np.random.Generator, ancilla: int = 1) -> CqState:
    return qm.apply(random_channel(UNIT, obj, rng, ancilla), CqState.unit())


def random_weights(k: int, rng: np.random.Generator) -> np.ndarray:
    w = rng.random(k)
    return w / w.sum()


def random_circuit(sig: Signature, rng: np.random.Generator, max_wires: int = 4, depth: int = 8,
                   dom: Optional[Sequence[WireType]] = None) -> Circuit:
    """A random well-typed circuit with at most ``max_wires`` live wires at any time.

    Gates are drawn uniformly from those that fit the live wires; the final
    wires are emitted in a random order.
    """
    dom = random_wire_obj(rng, max_wires) if dom is None else wire_obj(dom)
    c = cm.identity(dom)
    gates = sorted(sig.gates.values(), key=lambda d: d.name)
    for _ in range(int(rng.integers(0, depth + 1))):
        n = len(c.cod)
        options = []
        for g in gates:
            if n - len(g.dom) + len(g.cod) > max_wires:
                continue
            slots = [[i for i in range(n) if c.cod[i] is t] for t in g.dom]
            if all(len(s) >= g.dom.count(t) for s, t in zip(slots, g.dom)):
                options.append(g)
        if not options:
            break
        g = options[int(rng.integers(len(options)))]
        pos: list = []
        for t in g.dom:
            free = [i for i in range(n) if c.cod[i] is t and i not in pos]
            pos.append(free[int(rng.integers(len(free)))])
        c = cm.append_gate(c, g, pos)
    return cm.permute_outputs(c, list(rng.permutation(len(c.cod))))


def random_program(rng, n_inputs: int, length: int) -> dict:
    """A random well-formed program over qubits with measurements, lifts and conditionals."""
    live = [f"q{i}" for i in range(n_inputs)]
    params: list = []
    body, fresh = [], itertools.count()
    for _ in range(length):
        kind = rng.choice(["gate", "cnot", "lift", "if", "new"])
        if kind == "new" and len(live) < 3:
            name = f"n{next(fresh)}"
            stmt = {"op": "NEW", "name": name, "type": "QUBIT"}
            if params and rng.random() < 0.5:
                stmt = {"op": "NEW", "name": name + "b", "param": params[int(rng.integers(len(params)))]}
                body += [stmt, {"op": "GATE", "gate": "init", "args": [name + "b"], "results": [name]}]
            else:
                body.append(stmt)
            live.append(name)
        elif kind == "cnot" and len(live) >= 2:
            i, j = (int(v) for v in rng.choice(len(live), 2, replace=False))
            body.append({"op": "GATE", "gate": "CNOT", "args": [live[i], live[j]]})
        elif kind == "lift" and len(live) >= 2:
            w = live.pop(int(rng.integers(len(live))))
            p = f"p{len(params)}"
            body += [{"op": "MEASURE", "wire": w, "result": w + "m"}, {"op": "DYNLIFT", "wire": w + "m", "param": p}]
            params.append(p)
        elif kind == "if" and params and live:
            w = live[int(rng.integers(len(live)))]
            g1, g2 = rng.choice(["H", "X", "Z", "S", "Tg"], 2)
            body.append({"op": "IF", "param": params[int(rng.integers(len(params)))],
                         "then": [{"op": "GATE", "gate": str(g1), "args": [w]}],
                         "else": [{"op": "GATE", "gate": str(g2), "args": [w]}]})
        elif live:
            w = live[int(rng.integers(len(live)))]
            body.append({"op": "GATE", "gate": str(rng.choice(["H", "X", "Z", "S", "Tg"])), "args": [w]})
    body.append({"op": "RETURN", "wires": live})
    return {"inputs": [[f"q{i}", "QUBIT"] for i in range(n_inputs)], "body": body}
