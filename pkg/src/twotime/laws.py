"""Executable law checks with measured deviations.

Every check returns a :class:`LawReport`.  Randomised checks draw all
instances from ``numpy.random.default_rng(seed)``, so a report is
reproducible from its seed.  Each check also accepts the name of a
deliberate *mutation* (see :data:`MUTATIONS`) that breaks the structure
under test; the harness is expected to fail under every mutation.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import biset as bs
from . import circuit as cm
from . import quantum as qm
from .errors import CarrierTooLarge, NotAState, UnknownLaw
from .generators import random_channel, random_circuit, random_program, random_state, random_wire_obj
from .interp import GateInterp, default_interp, element_of, interpret_circuit
from .kleisli import (Computation, box, consistency_deviation, dyn_lift, embed_phi, embed_psi,
                      eta_E, init_map, kleisli_compose, kleisli_convex, kleisli_identity, unbox, apply_element)
from .quantum import Superop
from .wires import BIT, QUBIT, UNIT


@dataclass(frozen=True)
class LawReport:
    name: str
    instances: int
    max_deviation: float
    tolerance: float
    passed: bool
    seed: int
    counterexample: Optional[str] = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["max_deviation"] = _json_float(self.max_deviation)
        return d

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.name}: {self.instances} instances, "
                f"max deviation {self.max_deviation:.3g} (tolerance {self.tolerance:g})")


def _json_float(x: float):
    return x if np.isfinite(x) else str(x)


class _Tally:
    """Accumulates the maximum deviation and the worst failing instance."""

    def __init__(self, name: str, tolerance: float, seed: int):
        self.name, self.tolerance, self.seed = name, tolerance, seed
        self.count, self.worst, self.example = 0, 0.0, None

    def add(self, deviation: float, describe: Callable[[], str]) -> None:
        self.count += 1
        deviation = float(deviation)
        if np.isnan(deviation):
            deviation = float("inf")
        if deviation > self.worst:
            self.worst = deviation
            if deviation > self.tolerance:
                self.example = describe()

    def report(self) -> LawReport:
        return LawReport(self.name, self.count, self.worst, self.tolerance,
                         self.worst <= self.tolerance, self.seed, self.example)


def _dist(f: Superop, g: Superop) -> float:
    return f.distance(g)


# -- bisets -----------------------------------------------------------------


def _corrupt(m: bs.BisetMap) -> bs.BisetMap:
    """Redirect ``h1`` at its first point to a different element, if possible."""
    points = bs._order(m.src.carrier1)
    targets = bs._order(m.dst.carrier1)
    if not points or len(targets) < 2:
        return m
    h1 = dict(m.h1.items())
    x = points[0]
    h1[x] = next(t for t in targets if t != h1[x])
    return bs.BisetMap(m.src, m.dst, m.h0, bs.FinFunction(h1))


def _map_dev(m1: bs.BisetMap, m2: bs.BisetMap) -> int:
    """0 iff both maps are valid and pointwise equal; otherwise a positive count."""
    bad = bs.map_distance(m1, m2)
    bad += (not bs.validate_map(m1)) + (not bs.validate_map(m2))
    return bad


def check_biset_monad(max_carrier: int = 3, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """Monad, strength and commutativity diagrams of T = Delta . U0, pointwise.

    Single-object laws run over every biset with carriers up to
    ``max_carrier``; laws in two or three objects run over one
    representative per isomorphism class (the laws are natural in their
    objects, so isomorphic instances behave identically).
    """
    if max_carrier > bs.DEFAULT_MAX_CARRIER:
        raise CarrierTooLarge(f"max_carrier {max_carrier} exceeds {bs.DEFAULT_MAX_CARRIER}")
    tally = _Tally("biset_monad", 0.0, seed)
    T, eta, mu, Tm = bs.monad_T, bs.unit_eta, bs.mult_mu, bs.T_map

    def t(a, b):
        m = bs.strength_t(a, b)
        return _corrupt(m) if mutation == "biset_strength_corrupt" else m

    def s(a, b):
        return bs.costrength_s(a, b)

    for a in bs.all_bisets(max_carrier):
        ta = T(a)
        tally.add(_map_dev(bs.compose(Tm(eta(a)), mu(a)), bs.identity(ta)), lambda: f"mu.T(eta) at {a!r}")
        tally.add(_map_dev(bs.compose(eta(ta), mu(a)), bs.identity(ta)), lambda: f"mu.eta_T at {a!r}")
        tally.add(_map_dev(bs.compose(Tm(mu(a)), mu(a)), bs.compose(mu(ta), mu(a))), lambda: f"mu assoc at {a!r}")

    reps = list(bs.biset_iso_classes(max_carrier))
    one = bs.TERMINAL
    for b in reps:
        lhs = bs.compose(t(one, b), Tm(bs.projection2(one, b)))
        tally.add(_map_dev(lhs, bs.projection2(one, T(b))), lambda: f"strength unit at {b!r}")
    for a, b in itertools.product(reps, repeat=2):
        ab = bs.product(a, b)
        where = lambda: f"A={a!r}, B={b!r}"  # noqa: E731
        tally.add(_map_dev(bs.compose(bs.product_map(bs.identity(a), eta(b)), t(a, b)), eta(ab)),
                  lambda: "strength/eta at " + where())
        lhs = bs.compose(bs.product_map(bs.identity(a), mu(b)), t(a, b))
        rhs = bs.compose(bs.compose(t(a, T(b)), Tm(t(a, b))), mu(ab))
        tally.add(_map_dev(lhs, rhs), lambda: "strength/mu at " + where())
        # costrength is the strength conjugated by the symmetry
        sym = bs.compose(bs.compose(bs.swap(T(a), b), t(b, a)), Tm(bs.swap(b, a)))
        tally.add(_map_dev(s(a, b), sym), lambda: "costrength/symmetry at " + where())
        lhs = bs.compose(bs.compose(t(T(a), b), Tm(s(a, b))), mu(ab))
        rhs = bs.compose(bs.compose(s(a, T(b)), Tm(t(a, b))), mu(ab))
        tally.add(_map_dev(lhs, rhs), lambda: "commutativity at " + where())
    for a, b, c in itertools.product(reps, repeat=3):
        lhs = bs.compose(t(bs.product(a, b), c), Tm(bs.associator(a, b, c)))
        rhs = bs.compose(bs.compose(bs.associator(a, b, T(c)), bs.product_map(bs.identity(a), t(b, c))),
                         t(a, bs.product(b, c)))
        tally.add(_map_dev(lhs, rhs), lambda: f"strength assoc at A={a!r}, B={b!r}, C={c!r}")
    return tally.report()


def check_biset_exponential(max_carrier: int = 2, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """Currying is a bijection Hom(P x A, B) = Hom(P, A => B), checked exhaustively."""
    tally = _Tally("biset_exponential", 0.0, seed)
    reps = list(bs.biset_iso_classes(max_carrier))
    for p, a, b in itertools.product(reps, repeat=3):
        maps = list(bs.hom_set(bs.product(p, a), b))
        curried = [bs.curry(m, p, a) for m in maps]
        n_hom = sum(1 for _ in bs.hom_set(p, bs.exponential(a, b)))
        where = lambda: f"P={p!r}, A={a!r}, B={b!r}"  # noqa: E731
        tally.add(abs(n_hom - len(maps)) + (len(set(curried)) != len(maps)), lambda: "cardinality at " + where())
        for m, c in zip(maps, curried):
            tally.add(_map_dev(bs.uncurry(c, a, b), m) + (not bs.validate_map(c)),
                      lambda: f"uncurry(curry(m)) != m at {where()}")
    return tally.report()


# -- convexity --------------------------------------------------------------


def _convex(mutation: Optional[str]):
    if mutation == "convex_swapped_weights":
        return lambda ws, fs: qm.convex_sum(list(ws)[::-1], fs)
    return qm.convex_sum


def _random_pair_objects(rng, max_wires: int = 2):
    return random_wire_obj(rng, max_wires), random_wire_obj(rng, max_wires)


def check_convex_axioms(n: int = 200, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """Idempotence, commutativity, unit and four-term regrouping of convex sums on Q(A, B)."""
    rng = np.random.default_rng(seed)
    tally = _Tally("convex_axioms", 1e-12, seed)
    csum = _convex(mutation)
    done = 0
    while done < n:
        a, b = _random_pair_objects(rng)
        x, y, z, w = (random_channel(a, b, rng) for _ in range(4))
        p = float(rng.random())
        q = 1 - p
        where = lambda ax: (lambda: f"{ax}: dom={a}, cod={b}, p={p!r}, instance {done}")  # noqa: E731
        tally.add(_dist(csum([p, q], [x, x]), x), where("idempotence"))
        tally.add(_dist(csum([p, q], [x, y]), csum([q, p], [y, x])), where("commutativity"))
        tally.add(_dist(csum([0.0, 1.0], [x, y]), y), where("unit"))
        ws = rng.dirichlet(np.ones(4)) if done else np.full(4, 0.25)
        wa, wb, wc, wd = (float(v) for v in ws)
        if min(wa + wb, wc + wd, wa + wc, wb + wd) <= 1e-12:
            continue  # denominators must be non-zero
        lhs = csum([wa + wb, wc + wd], [csum([wa / (wa + wb), wb / (wa + wb)], [x, y]),
                                        csum([wc / (wc + wd), wd / (wc + wd)], [z, w])])
        rhs = csum([wa + wc, wb + wd], [csum([wa / (wa + wc), wc / (wa + wc)], [x, z]),
                                        csum([wb / (wb + wd), wd / (wb + wd)], [y, w])])
        tally.add(_dist(lhs, rhs), lambda: f"regrouping at weights {list(ws)}, dom={a}, cod={b}")
        done += 1
    return tally.report()


def bracket(p: float, q: float, mutation: Optional[str] = None) -> Superop:
    """<p, q> := p inj1 + q inj2 : I -> I + I."""
    if mutation == "bracket_swapped_injections":
        return qm.convex_sum([p, q], [qm.inj2(), qm.inj1()])
    return qm.convex_sum([p, q], [qm.inj1(), qm.inj2()])


def check_bracket_forward(n: int = 50, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """The four diagrams for <p, q> built from the convex structure of Q."""
    rng = np.random.default_rng(seed)
    tally = _Tally("bracket_forward", 1e-10, seed)
    br = lambda p, q: bracket(p, q, mutation)  # noqa: E731
    idI = qm.identity_q(UNIT)
    tally.add(_dist(br(0.0, 1.0), qm.inj2()), lambda: "<0,1> != inj2")
    for i in range(n):
        p = float(rng.random())
        q = 1 - p
        tally.add(_dist(qm.compose_q(br(p, q), qm.copair_bit(idI, idI)), idI), lambda: f"[id,id].<p,q> at p={p!r}")
        tally.add(_dist(qm.compose_q(br(p, q), qm.copair_bit(qm.inj2(), qm.inj1())), br(q, p)),
                  lambda: f"swap.<p,q> != <q,p> at p={p!r}")
        a, b, c, d = (float(v) for v in rng.dirichlet(np.ones(4)))
        lhs = qm.compose_q(br(a + b, c + d),
                           qm.coproduct_map(br(a / (a + b), b / (a + b)), br(c / (c + d), d / (c + d))))
        lhs = qm.compose_q(lhs, qm.symmetry_q((BIT,), (BIT,)))
        rhs = qm.compose_q(br(a + c, b + d),
                           qm.coproduct_map(br(a / (a + c), c / (a + c)), br(b / (b + d), d / (b + d))))
        tally.add(_dist(lhs, rhs), lambda: f"regrouping at weights {[a, b, c, d]}")
    return tally.report()


def convex_via_bracket(p: float, q: float, f: Superop, g: Superop, mutation: Optional[str] = None) -> Superop:
    """``A -> A (x) I -> A (x) (I+I) -> A (x) I + A (x) I -> A + A -> B`` evaluated in Q."""
    a = f.dom
    pq = bracket(q, p) if mutation == "bracket_swapped_weights" else bracket(p, q)
    step = qm.tensor_q(qm.identity_q(a), pq)   # the unitors are identities on strict objects
    step = qm.compose_q(step, qm.distribute(a))
    return qm.compose_q(step, qm.copair_bit(f, g))


def check_bracket_backward(n: int = 100, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """The convex sum rebuilt from <p, q>, distributivity and copairing equals the direct one."""
    rng = np.random.default_rng(seed)
    tally = _Tally("bracket_backward", 1e-10, seed)
    for i in range(n):
        a, b = _random_pair_objects(rng)
        f, g = random_channel(a, b, rng), random_channel(a, b, rng)
        p = float(rng.random())
        got = convex_via_bracket(p, 1 - p, f, g, mutation)
        tally.add(_dist(got, qm.convex_sum([p, 1 - p], [f, g])), lambda: f"dom={a}, cod={b}, p={p!r}")
    return tally.report()


# -- the execution layer ----------------------------------------------------


def check_embedding_square(n: int = 100, max_wires: int = 4, max_depth: int = 8, seed: int = 0,
                      mutation: Optional[str] = None, gi: Optional[GateInterp] = None) -> LawReport:
    """E . psi = phi . J on random circuits, compared entrywise with no tolerance."""
    rng = np.random.default_rng(seed)
    sig, gi = cm.default_signature(), gi or default_interp()
    tally = _Tally("embedding_square", 0.0, seed)
    fixed = [cm.lift_gate(sig, "zero"), cm.identity((QUBIT, BIT))]
    for c in fixed + [random_circuit(sig, rng, max_wires, max_depth) for _ in range(n)]:
        left = eta_E(embed_psi(gi, c))
        right = embed_phi(interpret_circuit(gi, c))
        tally.add(float(np.max(np.abs(left.op.mat - right.op.mat), initial=0.0)), lambda: cm.serialize(c))
    return tally.report()


def _swapped_interp() -> GateInterp:
    gi = default_interp()
    return gi.with_entry("zero", qm.inj2()).with_entry("one", qm.inj1())


def check_dynlift_triangle(seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """Dyn . init = eta: lifting a freshly prepared bit gives back the boolean with certainty."""
    tally = _Tally("dynlift_triangle", 0.0, seed)
    gi = _swapped_interp() if mutation == "dynlift_swapped_init" else default_interp()
    for b in (False, True):
        start = Computation.pure()
        prepared = Computation((apply_element(start.branches[0], init_map(b, gi), [], ["w"]),))
        out = dyn_lift(prepared, "w", "b")
        if len(out.branches) != 1:
            tally.add(float("inf"), lambda: f"b={b}: {len(out.branches)} branches")
            continue
        br = out.branches[0]
        dev = abs(br.prob - 1.0) + (br.params != (b,)) + (br.live != ()) + abs(br.state.vec[0] - 1)
        tally.add(dev, lambda: f"b={b}: prob={br.prob}, params={br.params}")
    return tally.report()


def _decompose(mutation: Optional[str]):
    if mutation != "decomposition_unnormalized":
        return qm.decompose_bit_state

    def raw(s, tol=qm.TOL):
        d = qm.decompose_bit_state(s, tol)
        return qm.BitDecomposition(d.p1, d.f1 and d.f1.scaled(d.p1), d.p2, d.f2 and d.f2.scaled(d.p2))

    return raw


def _small_cq_object(rng) -> tuple:
    """Up to two qubits and one bit, in a random order."""
    wires = [QUBIT] * int(rng.integers(0, 3)) + [BIT] * int(rng.integers(0, 2))
    return tuple(wires[i] for i in rng.permutation(len(wires)))


def check_bit_decomposition(n: int = 200, seed: int = 0, mutation: Optional[str] = None) -> List[LawReport]:
    """Decomposition of states on Bit (x) A: round trip (1e-12) and uniqueness (1e-10)."""
    rng = np.random.default_rng(seed)
    trip = _Tally("bit_decomposition_roundtrip", 1e-12, seed)
    uniq = _Tally("bit_decomposition_uniqueness", 1e-10, seed)
    decompose = _decompose(mutation)
    for _ in range(n):
        rest = _small_cq_object(rng)
        s = random_state((BIT,) + rest, rng)
        d = decompose(s)
        back = qm.recompose_bit_state(d, rest)
        trip.add(back.distance(s), lambda: f"A={rest}: {qm.state_to_json(s)}")
        if min(d.p1, d.p2) > 0.01:
            try:
                d2 = decompose(back)
                dev = max(abs(d.p1 - d2.p1), abs(d.p2 - d2.p2), d.f1.distance(d2.f1), d.f2.distance(d2.f2))
            except NotAState:
                dev = float("inf")
            uniq.add(dev, lambda: f"A={rest}: {qm.state_to_json(s)}")
    return [trip.report(), uniq.report()]


def _kcompose(mutation: Optional[str]):
    if mutation != "kleisli_abs_compose":
        return kleisli_compose
    return lambda k1, k2: embed_phi(Superop(k1.dom, k2.cod, np.abs(k2.op.mat @ k1.op.mat)))


def check_kleisli_bilinearity(n: int = 100, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """Both bilinearity equations, plus the Kleisli unit and associativity laws."""
    rng = np.random.default_rng(seed)
    tally = _Tally("kleisli_bilinearity", 1e-12, seed)
    comp = _kcompose(mutation)
    for _ in range(n):
        a, b, c = (random_wire_obj(rng, 2) for _ in range(3))
        k = lambda x, y: embed_phi(random_channel(x, y, rng))  # noqa: E731
        h, f, g, e = k(c, a), k(a, b), k(a, b), k(b, c)
        p = float(rng.random())
        ws = [p, 1 - p]
        mix = kleisli_convex(ws, [f, g])
        where = lambda: f"A={a}, B={b}, C={c}, p={p!r}"  # noqa: E731
        tally.add(comp(h, mix).distance(kleisli_convex(ws, [comp(h, f), comp(h, g)])), lambda: "pre: " + where())
        tally.add(comp(mix, e).distance(kleisli_convex(ws, [comp(f, e), comp(g, e)])), lambda: "post: " + where())
        tally.add(comp(kleisli_identity(a), f).distance(f), lambda: "left unit: " + where())
        tally.add(comp(f, kleisli_identity(b)).distance(f), lambda: "right unit: " + where())
        tally.add(comp(comp(h, f), e).distance(comp(h, comp(f, e))), lambda: "associativity: " + where())
    return tally.report()


def check_box_unbox(n: int = 50, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """unbox . box = id on random elements, and boxing separates distinct canonical circuits."""
    rng = np.random.default_rng(seed)
    sig, gi = cm.default_signature(), default_interp()
    tally = _Tally("box_unbox", 1e-10, seed)
    boxed = []
    for _ in range(n):
        c = random_circuit(sig, rng, 4, 8)
        e = element_of(gi, c)
        b = box(e)
        if mutation == "box_conjugate":
            b = type(b)(type(b.element)(b.element.circuit, Superop(e.dom, e.cod, e.op.mat.conj())))
        u = unbox(b)
        same = cm.equivalent(u.circuit, c)
        tally.add(u.op.distance(e.op) if same else float("inf"), lambda: cm.serialize(c))
        boxed.append((cm.serialize(cm.canonical_form(c)), b))
    for (k1, b1), (k2, b2) in itertools.combinations(boxed, 2):
        tally.add(0.0 if (k1 == k2) == (b1 == b2) else float("inf"), lambda: f"{k1} vs {k2}")
    return tally.report()


def _tensor_q(mutation: Optional[str]):
    if mutation == "functor_naive_kron":
        return lambda f, g: Superop(f.dom + g.dom, f.cod + g.cod, np.kron(f.mat, g.mat))
    return qm.tensor_q


def check_interpretation_functor(n: int = 100, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """J preserves composition, tensor and symmetries on random circuits."""
    rng = np.random.default_rng(seed)
    sig, gi = cm.default_signature(), default_interp()
    tq = _tensor_q(mutation)
    J = lambda c: interpret_circuit(gi, c)  # noqa: E731
    tally = _Tally("interpretation_functor", 1e-10, seed)
    for _ in range(n):
        f = random_circuit(sig, rng, 4, 8)
        g = random_circuit(sig, rng, 4, 8, dom=f.cod)
        tally.add(_dist(J(cm.compose(f, g)), qm.compose_q(J(f), J(g))),
                  lambda: f"compose: {cm.serialize(f)} ; {cm.serialize(g)}")
        f2, g2 = random_circuit(sig, rng, 2, 6), random_circuit(sig, rng, 2, 6)
        tally.add(_dist(J(cm.tensor(f2, g2)), tq(J(f2), J(g2))),
                  lambda: f"tensor: {cm.serialize(f2)} (x) {cm.serialize(g2)}")
        a, b = random_wire_obj(rng, 2), random_wire_obj(rng, 2)
        tally.add(_dist(J(cm.symmetry(a, b)), qm.symmetry_q(a, b)), lambda: f"symmetry {a}, {b}")
    return tally.report()


def _objects(max_wires: int) -> Iterable[tuple]:
    for k in range(max_wires + 1):
        yield from itertools.product((BIT, QUBIT), repeat=k)


def check_coherence(max_wires: int = 3, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """Symmetric monoidal coherence instances in the circuit category, up to canonical form."""
    rng = np.random.default_rng(seed)
    sig = cm.default_signature()
    tally = _Tally("coherence", 0.0, seed)
    if mutation == "coherence_raw_equality":
        eq = lambda f, g: cm.serialize(f) == cm.serialize(g)  # noqa: E731
    else:
        eq = cm.equivalent
    I = cm.identity
    objs = list(_objects(max_wires))
    for a, b in itertools.product(objs, repeat=2):
        if len(a) + len(b) > max_wires:
            continue
        where = lambda: f"A={a}, B={b}"  # noqa: E731
        tally.add(not eq(cm.tensor(I(a), I(b)), I(a + b)), lambda: "id (x) id: " + where())
        tally.add(not eq(cm.compose(cm.symmetry(a, b), cm.symmetry(b, a)), I(a + b)), lambda: "involution: " + where())
        for c in objs:
            if len(a) + len(b) + len(c) > max_wires:
                continue
            hexagon = cm.compose(cm.tensor(cm.symmetry(a, b), I(c)), cm.tensor(I(b), cm.symmetry(a, c)))
            tally.add(not eq(cm.symmetry(a, b + c), hexagon), lambda: f"hexagon: {where()}, C={c}")
            assoc = cm.tensor(cm.tensor(I(a), I(b)), I(c))
            tally.add(not eq(assoc, cm.tensor(I(a), cm.tensor(I(b), I(c)))), lambda: f"associator: {where()}, C={c}")
    for _ in range(20):
        f = random_circuit(sig, rng, 2, 4)
        g = random_circuit(sig, rng, 2, 4)
        par = cm.tensor(f, g)
        left = cm.compose(cm.tensor(f, I(g.dom)), cm.tensor(I(f.cod), g))
        right = cm.compose(cm.tensor(I(f.dom), g), cm.tensor(f, I(g.cod)))
        where = lambda: f"{cm.serialize(f)} (x) {cm.serialize(g)}"  # noqa: E731
        tally.add(not (eq(par, left) and eq(par, right)), lambda: "interchange: " + where())
        nat = cm.compose(par, cm.symmetry(f.cod, g.cod))
        tally.add(not eq(nat, cm.compose(cm.symmetry(f.dom, g.dom), cm.tensor(g, f))), lambda: "naturality: " + where())
    return tally.report()


def _teleport_program(mutation: Optional[str]):
    from .examples import TELEPORT
    from .program import program_from_json

    data = dict(TELEPORT)
    if mutation == "teleport_missing_z":
        data["body"] = [s for s in data["body"] if not (s["op"] == "IF" and s["param"] == "z")]
    return program_from_json(data)


def check_teleport(seed: int = 0, mutation: Optional[str] = None) -> List[LawReport]:
    """Four equiprobable branches; the payload channel is the identity; both runtimes agree.

    The channel is checked on a tomographically complete set of inputs and
    the consistency of each branch on a seeded random input state.
    """
    from .program import aggregate_channel, run

    sig, gi = cm.default_signature(), default_interp()
    prog = _teleport_program(mutation)
    branches = _Tally("teleport_branches", 1e-10, seed)
    channel = _Tally("teleport_channel", 1e-9, seed)
    rng = np.random.default_rng(seed)
    initial = random_state((QUBIT,), rng)
    res = run(gi, sig, prog, initial)
    probs = [b.prob for b in res.branches]
    branches.add(max(abs(p - 0.25) for p in probs) if len(probs) == 4 else float("inf"),
                 lambda: f"branch probabilities {probs}")
    channel.add(_dist(aggregate_channel(gi, sig, prog), qm.identity_q((QUBIT,))), lambda: "aggregate channel")
    for b in res.branches:
        channel.add(consistency_deviation(gi, b, initial), lambda: f"consistency in branch {b.params}")
    return [branches.report(), channel.report()]


def check_exec_invariants(n: int = 30, seed: int = 0, mutation: Optional[str] = None) -> LawReport:
    """Probability conservation, valid branch states and two-runtime consistency on random programs."""
    from .program import program_from_json, run

    rng = np.random.default_rng(seed)
    sig, gi = cm.default_signature(), default_interp()
    tally = _Tally("exec_invariants", 1e-9, seed)
    for _ in range(n):
        data = random_program(rng, int(rng.integers(1, 3)), int(rng.integers(2, 10)))
        prog = program_from_json(data)
        initial = random_state(prog.input_obj, rng)
        res = run(gi, sig, prog, initial)
        where = lambda: str(data)  # noqa: E731
        tally.add(abs(res.computation.total_prob() - 1.0), lambda: "total probability: " + where())
        for b in res.branches:
            try:
                b.state.validate(1e-9)
                ok = 0.0
            except NotAState:
                ok = float("inf")
            tally.add(ok, lambda: "invalid branch state: " + where())
            tally.add(consistency_deviation(gi, b, initial), lambda: "consistency: " + where())
    return tally.report()


# -- registries ---------------------------------------------------------------


def _single(fn):
    return lambda seed=0, mutation=None: [fn(seed=seed, mutation=mutation)]


LAWS: Dict[str, Callable[..., List[LawReport]]] = {
    "biset_monad": _single(check_biset_monad),
    "biset_exponential": _single(check_biset_exponential),
    "convex_axioms": _single(check_convex_axioms),
    "bracket_forward": _single(check_bracket_forward),
    "bracket_backward": _single(check_bracket_backward),
    "embedding_square": _single(check_embedding_square),
    "dynlift_triangle": _single(check_dynlift_triangle),
    "bit_decomposition": check_bit_decomposition,
    "kleisli_bilinearity": _single(check_kleisli_bilinearity),
    "box_unbox": _single(check_box_unbox),
    "interpretation_functor": _single(check_interpretation_functor),
    "coherence": _single(check_coherence),
    "teleport": check_teleport,
    "exec_invariants": _single(check_exec_invariants),
}

# mutation name -> (law it must break, what it does)
MUTATIONS: Dict[str, Tuple[str, str]] = {
    "biset_strength_corrupt": ("biset_monad", "strength h1 redirected at one point"),
    "convex_swapped_weights": ("convex_axioms", "convex sum applies the weights in reverse order"),
    "bracket_swapped_injections": ("bracket_forward", "<p,q> built as p inj2 + q inj1"),
    "bracket_swapped_weights": ("bracket_backward", "composite uses <q,p> in place of <p,q>"),
    "dynlift_swapped_init": ("dynlift_triangle", "zero and one interpreted as inj2 and inj1"),
    "decomposition_unnormalized": ("bit_decomposition", "branch states are not renormalised"),
    "kleisli_abs_compose": ("kleisli_bilinearity", "composition takes entrywise absolute values"),
    "box_conjugate": ("box_unbox", "box stores the complex conjugate operator"),
    "functor_naive_kron": ("interpretation_functor", "tensor of superoperators as a plain Kronecker product"),
    "coherence_raw_equality": ("coherence", "circuits compared without canonical form"),
    "teleport_missing_z": ("teleport", "the Z correction is dropped"),
}


def run_laws(names: Optional[Sequence[str]] = None, seed: int = 0,
             mutation: Optional[str] = None) -> List[LawReport]:
    """Run the named law suites (all when ``names`` is empty) in registry order."""
    names = list(LAWS) if not names else list(names)
    unknown = [n for n in names if n not in LAWS]
    if unknown:
        raise UnknownLaw(f"{unknown}; known laws: {sorted(LAWS)}")
    return [r for n in names for r in LAWS[n](seed=seed, mutation=mutation)]


def run_mutation(name: str, seed: int = 0) -> List[LawReport]:
    if name not in MUTATIONS:
        raise UnknownLaw(f"unknown mutation {name!r}")
    return run_laws([MUTATIONS[name][0]], seed=seed, mutation=name)
