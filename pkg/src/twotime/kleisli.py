"""Kleisli maps, the embeddings psi/phi/E, boxing, and dynamic lifting.

Between representable objects a Kleisli map ``A -> T B`` carries exactly
the data of a superoperator ``A -> B``, so :class:`KleisliMap` simply wraps
a :class:`~twotime.quantum.Superop`; no presheaf data is ever built.

Dynamic lifting acts on a :class:`Computation`, a finite convex
combination of branches.  Each branch records the booleans lifted so far,
the circuit generated so far, and the physical state of its live wires.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import circuit as cm
from . import quantum as qm
from .circuit import Circuit, Signature
from .errors import NotABit, ObjectMismatch, UnknownWire
from .interp import GateInterp, GlobalElement, element_of, id_element
from .quantum import CqState, Superop
from .wires import BIT, UNIT, WireObj, WireType, wire_obj


@dataclass(frozen=True)
class KleisliMap:
    dom: WireObj
    cod: WireObj
    op: Superop

    def __post_init__(self):
        if self.op.dom != wire_obj(self.dom) or self.op.cod != wire_obj(self.cod):
            raise ObjectMismatch("Kleisli map type does not match its operator")

    def distance(self, other: "KleisliMap") -> float:
        return self.op.distance(other.op)


def embed_psi(gi: GateInterp, c: Circuit) -> GlobalElement:
    """psi : M -> V(C~), a circuit viewed as a global element."""
    return element_of(gi, c)


def embed_phi(f: Superop) -> KleisliMap:
    """phi : Q -> Kl(C~)."""
    return KleisliMap(f.dom, f.cod, f)


def eta_E(e: GlobalElement) -> KleisliMap:
    """E(e) = eta . e; post-composing with the unit forgets the circuit."""
    return embed_phi(e.op)


def kleisli_identity(a: Sequence[WireType]) -> KleisliMap:
    return eta_E(id_element(a))


def kleisli_compose(k1: KleisliMap, k2: KleisliMap) -> KleisliMap:
    """``mu . T k2 . k1``."""
    return embed_phi(qm.compose_q(k1.op, k2.op))


def kleisli_tensor(k1: KleisliMap, k2: KleisliMap) -> KleisliMap:
    return embed_phi(qm.tensor_q(k1.op, k2.op))


def kleisli_convex(ws: Sequence[float], ks: Sequence[KleisliMap]) -> KleisliMap:
    return embed_phi(qm.convex_sum(ws, [k.op for k in ks]))


# -- boxing -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoxedCircuit:
    """A circuit reified as a parameter value; compared by canonical form."""

    element: GlobalElement

    @property
    def key(self) -> str:
        return cm.serialize(self.element.circuit)

    def __eq__(self, other) -> bool:
        return isinstance(other, BoxedCircuit) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def box(e: GlobalElement) -> BoxedCircuit:
    return BoxedCircuit(GlobalElement(cm.canonical_form(e.circuit), e.op))


def unbox(b: BoxedCircuit) -> GlobalElement:
    return b.element


def init_map(b: bool, gi: Optional[GateInterp] = None, sig: Optional[Signature] = None) -> GlobalElement:
    """init = [zero, one] : Bool -> Bit, evaluated at a boolean."""
    from .interp import default_interp

    gi = default_interp() if gi is None else gi
    sig = cm.default_signature() if sig is None else sig
    return element_of(gi, cm.lift_gate(sig, "one" if b else "zero"))


# -- branches and computations --------------------------------------------------


@dataclass(frozen=True)
class Branch:
    """One outcome path of an execution.

    ``trace`` runs from the program inputs to ``lifted bits ++ live wires``:
    bits consumed by dynamic lifting are parked at the front of its
    codomain, in lifting order, so the generation-time circuit keeps the
    information that was lifted.  ``state`` covers the live wires only.
    """

    prob: float
    params: Tuple[bool, ...]
    trace: Circuit
    state: CqState
    live: Tuple[str, ...]
    param_names: Tuple[str, ...] = ()
    boxes: Tuple[Tuple[str, BoxedCircuit], ...] = ()

    def __post_init__(self):
        if self.state.obj != self.trace.cod[len(self.params):]:
            raise ObjectMismatch("branch state does not match its live wires")
        if len(self.live) != len(self.state.obj):
            raise ObjectMismatch("wire names do not match the live wires")

    @property
    def n_lifted(self) -> int:
        return len(self.params)

    @property
    def env(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.live)}

    def param(self, name: str) -> bool:
        return self.params[self.param_names.index(name)]

    def boxed(self, name: str) -> BoxedCircuit:
        return dict(self.boxes)[name]

    def wire_type(self, name: str) -> WireType:
        return self.state.obj[self.live.index(name)]


@dataclass(frozen=True)
class Computation:
    branches: Tuple[Branch, ...]

    @classmethod
    def pure(cls, inputs: Sequence[Tuple[str, WireType]] = (), state: Optional[CqState] = None) -> "Computation":
        """eta: a single certain branch with an empty parameter history."""
        obj = wire_obj([t for _, t in inputs])
        state = qm.basis_state(obj) if state is None else state
        if state.obj != obj:
            raise ObjectMismatch("input state does not match the declared inputs")
        return cls((Branch(1.0, (), cm.identity(obj), state, tuple(n for n, _ in inputs)),))

    def total_prob(self) -> float:
        return sum(b.prob for b in self.branches)

    def sorted(self) -> "Computation":
        return Computation(tuple(sorted(self.branches, key=lambda b: b.params)))

    def distribution(self) -> Dict[Tuple[bool, ...], float]:
        out: Dict[Tuple[bool, ...], float] = {}
        for b in self.branches:
            out[b.params] = out.get(b.params, 0.0) + b.prob
        return out

    def aggregate_state(self) -> CqState:
        """Sum of ``prob * state``, forgetting parameters; branches must agree on type."""
        objs = {b.state.obj for b in self.branches}
        if len(objs) != 1:
            raise ObjectMismatch("branches end on different wire types")
        obj = objs.pop()
        return CqState(obj, sum(b.prob * b.state.vec for b in self.branches))


def map_branches(comp: Computation, fn: Callable[[Branch], Sequence[Branch]]) -> Computation:
    return Computation(tuple(child for b in comp.branches for child in fn(b)))


def lift_branch(b: Branch, wire: str, param: Optional[str] = None, tol: float = qm.TOL) -> List[Branch]:
    if wire not in b.live:
        raise UnknownWire(wire)
    pos = b.live.index(wire)
    if b.state.obj[pos] is not BIT:
        raise NotABit(f"{wire} is a {b.state.obj[pos]!r} wire")
    rest = [i for i in range(len(b.live)) if i != pos]
    d = qm.decompose_bit_state(qm.permute_state(b.state, [pos] + rest), tol)
    k = b.n_lifted
    trace = cm.permute_outputs(b.trace, list(range(k)) + [k + pos] + [k + i for i in rest])
    live = tuple(b.live[i] for i in rest)
    name = f"_{k}" if param is None else param
    children = []
    for value, p, f in ((False, d.p1, d.f1), (True, d.p2, d.f2)):
        if f is None:
            continue
        children.append(replace(b, prob=b.prob * p, params=b.params + (value,), trace=trace, state=f,
                                live=live, param_names=b.param_names + (name,)))
    return children


def dyn_lift(comp: Computation, wire: str, param: Optional[str] = None, tol: float = qm.TOL) -> Computation:
    """Dyn : Bit -> T Bool applied to ``wire`` in every branch.

    Each branch splits along the two classical values of the bit; children
    append the lifted boolean to their parameters, scale their probability,
    and lose the bit from their live wires.  Children with probability at
    most ``tol`` are dropped.
    """
    return map_branches(comp, lambda b: lift_branch(b, wire, param, tol)).sorted()


def apply_element(b: Branch, e: GlobalElement, args: Sequence[str], results: Sequence[str]) -> Branch:
    """Run a global element on named wires: extend the trace, evolve the state."""
    missing = [a for a in args if a not in b.live]
    if missing:
        raise UnknownWire(", ".join(missing))
    pos = [b.live.index(a) for a in args]
    k = b.n_lifted
    trace = cm.append_circuit(b.trace, e.circuit, [k + p for p in pos])
    state = qm.apply_at(e.op, b.state, pos)
    live = tuple(n for i, n in enumerate(b.live) if i not in pos) + tuple(results)
    return replace(b, trace=trace, state=state, live=live)


def consistency_deviation(gi: GateInterp, b: Branch, initial: CqState, tol: float = qm.TOL) -> float:
    """Compare the execution-time state with the generation-time circuit.

    ``J(trace)`` is applied to the initial state, then the lifted bits at
    the front are conditioned on the recorded parameters one by one.  The
    result must reproduce both the branch state and its probability.
    """
    from .interp import interpret_circuit

    out = qm.apply(interpret_circuit(gi, b.trace), initial)
    prob = 1.0
    for value in b.params:
        d = qm.decompose_bit_state(out, tol)
        p, f = (d.p2, d.f2) if value else (d.p1, d.f1)
        if f is None:
            return float("inf")
        prob *= p
        out = f
    return max(out.distance(b.state), abs(prob - b.prob))
