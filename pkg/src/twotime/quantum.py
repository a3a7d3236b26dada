"""The category Q of classical-quantum superoperators.

Vectorisation convention
------------------------
A cq-object with ``b`` BIT wires and ``q`` QUBIT wires has vectorised
dimension ``2**b * 4**q``.  A state is a family of ``2**q x 2**q`` blocks,
one per classical bitstring.  The vector stacks the blocks ordered by the
bitstring read as a binary number (first BIT wire most significant), each
block flattened row-major.  Equivalently the vector is a tensor with one
axis of size 2 per bit, then per qubit row index, then per qubit column
index, each group in wire order.  A superoperator ``f : A -> B`` is a dense
``vecdim(B) x vecdim(A)`` matrix acting on these vectors.

The coproduct ``X + X`` is encoded as ``Bit (x) X``: the leading bit tags
the summand (0 for the first injection, 1 for the second).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import NotAState, NotUnitary, ObjectMismatch, TooManyWires, WeightMismatch
from .wires import BIT, MAX_WIRES, QUBIT, UNIT, WireObj, WireType, nbits, nqubits, vecdim, wire_names, wire_obj

TOL = 1e-9


@dataclass(frozen=True)
class CqObject:
    wires: WireObj

    def __post_init__(self):
        object.__setattr__(self, "wires", wire_obj(self.wires))

    @property
    def bits(self) -> int:
        return nbits(self.wires)

    @property
    def qubits(self) -> int:
        return nqubits(self.wires)

    @property
    def qdim(self) -> int:
        return 2 ** self.qubits

    @property
    def vecdim(self) -> int:
        return vecdim(self.wires)

    def bitstrings(self) -> List[str]:
        return [format(i, f"0{self.bits}b") if self.bits else "" for i in range(2 ** self.bits)]


def _guard(obj: Sequence[WireType]) -> None:
    if len(obj) > MAX_WIRES:
        raise TooManyWires(f"{len(obj)} wires exceed the limit of {MAX_WIRES}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Superop:
    dom: WireObj
    cod: WireObj
    mat: np.ndarray

    def __post_init__(self):
        dom, cod = wire_obj(self.dom), wire_obj(self.cod)
        _guard(dom)
        _guard(cod)
        mat = _frozen(self.mat)
        if mat.shape != (vecdim(cod), vecdim(dom)):
            raise ObjectMismatch(f"matrix shape {mat.shape} does not fit {wire_names(dom)} -> {wire_names(cod)}")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "mat", mat)

    def distance(self, other: "Superop") -> float:
        """Sup-norm distance; infinite when the types differ."""
        if self.dom != other.dom or self.cod != other.cod:
            return float("inf")
        if self.mat.size == 0:
            return 0.0
        return float(np.max(np.abs(self.mat - other.mat)))

    def close(self, other: "Superop", tol: float = TOL) -> bool:
        return self.distance(other) <= tol

    def __repr__(self) -> str:
        return f"Superop({wire_names(self.dom)} -> {wire_names(self.cod)})"


@dataclass(frozen=True, eq=False)
class CqState:
    obj: WireObj
    vec: np.ndarray

    def __post_init__(self):
        obj = wire_obj(self.obj)
        _guard(obj)
        v = _frozen(np.asarray(self.vec).reshape(-1))
        if v.shape != (vecdim(obj),):
            raise ObjectMismatch(f"vector length {v.shape[0]} does not fit {wire_names(obj)}")
        object.__setattr__(self, "obj", obj)
        object.__setattr__(self, "vec", v)

    @classmethod
    def from_blocks(cls, obj: Sequence[WireType], blocks: Dict[str, np.ndarray]) -> "CqState":
        co = CqObject(obj)
        vec = np.zeros(co.vecdim, dtype=complex)
        size = co.qdim ** 2
        for bits, block in blocks.items():
            if len(bits) != co.bits or any(ch not in "01" for ch in bits):
                raise ObjectMismatch(f"bad classical index {bits!r}")
            idx = int(bits, 2) if bits else 0
            vec[idx * size:(idx + 1) * size] = np.asarray(block, dtype=complex).reshape(-1)
        return cls(co.wires, vec)

    @classmethod
    def unit(cls) -> "CqState":
        return cls(UNIT, np.ones(1))

    @property
    def blocks(self) -> Dict[str, np.ndarray]:
        co = CqObject(self.obj)
        size = co.qdim ** 2
        return {
            bits: self.vec[i * size:(i + 1) * size].reshape(co.qdim, co.qdim)
            for i, bits in enumerate(co.bitstrings())
        }

    def nonzero_blocks(self, tol: float = TOL) -> Dict[str, np.ndarray]:
        return {k: v for k, v in self.blocks.items() if np.max(np.abs(v)) > tol}

    def trace(self) -> float:
        return float(sum(np.trace(b).real for b in self.blocks.values()))

    def distance(self, other: "CqState") -> float:
        if self.obj != other.obj:
            return float("inf")
        return float(np.max(np.abs(self.vec - other.vec)))

    def scaled(self, factor: float) -> "CqState":
        return CqState(self.obj, self.vec * factor)

    def validate(self, tol: float = TOL, normalized: bool = True) -> None:
        """Raise NotAState unless every block is PSD and the trace is right."""
        for bits, b in self.blocks.items():
            if np.max(np.abs(b - b.conj().T), initial=0.0) > tol:
                raise NotAState(f"block {bits!r} is not Hermitian")
            if b.size and np.linalg.eigvalsh((b + b.conj().T) / 2).min() < -tol:
                raise NotAState(f"block {bits!r} is not positive semidefinite")
        tr = self.trace()
        if normalized and abs(tr - 1) > tol:
            raise NotAState(f"trace {tr} is not 1")
        if not normalized and tr > 1 + tol:
            raise NotAState(f"trace {tr} exceeds 1")

    def __repr__(self) -> str:
        return f"CqState({wire_names(self.obj)}, {sorted(self.nonzero_blocks())})"


# -- index bookkeeping ------------------------------------------------------


def _axes(obj: WireObj) -> List[tuple]:
    """Axis labels of the vectorised tensor, in storage order."""
    bits = [("b", i) for i, w in enumerate(obj) if w is BIT]
    rows = [("r", i) for i, w in enumerate(obj) if w is QUBIT]
    cols = [("c", i) for i, w in enumerate(obj) if w is QUBIT]
    return bits + rows + cols


def _index_map(src_axes: List[tuple], dst_axes: List[tuple]) -> np.ndarray:
    """For each flat index in dst layout, the flat index in src layout."""
    n = len(src_axes)
    base = np.arange(2 ** n).reshape((2,) * n) if n else np.arange(1).reshape(())
    perm = [src_axes.index(a) for a in dst_axes]
    return base.transpose(perm).reshape(-1)


def _wire_permutation_index(obj: WireObj, order: Sequence[int]) -> np.ndarray:
    out = tuple(obj[i] for i in order)
    # Output wire k carries input wire order[k]; relabel output axes by source wire.
    src = _axes(obj)
    dst = [(kind, order[k]) for kind, k in _axes(out)]
    return _index_map(src, dst)


def _tensor_index(o1: WireObj, o2: WireObj) -> np.ndarray:
    n1 = len(o1)
    kron_axes = _axes(o1) + [(k, n1 + i) for k, i in _axes(o2)]
    return _index_map(kron_axes, _axes(o1 + o2))


# -- categorical structure --------------------------------------------------


def identity_q(a: Sequence[WireType]) -> Superop:
    a = wire_obj(a)
    return Superop(a, a, np.eye(vecdim(a)))


def compose_q(f: Superop, g: Superop) -> Superop:
    """First ``f``, then ``g``."""
    if f.cod != g.dom:
        raise ObjectMismatch(f"cannot compose {wire_names(f.cod)} with {wire_names(g.dom)}")
    return Superop(f.dom, g.cod, g.mat @ f.mat)


def tensor_q(f: Superop, g: Superop) -> Superop:
    k = np.kron(f.mat, g.mat)
    rows = _tensor_index(f.cod, g.cod)
    cols = _tensor_index(f.dom, g.dom)
    return Superop(f.dom + g.dom, f.cod + g.cod, k[np.ix_(rows, cols)])


def permutation_channel(a: Sequence[WireType], order: Sequence[int]) -> Superop:
    """Wire permutation: output wire ``k`` is input wire ``order[k]``."""
    a = wire_obj(a)
    if sorted(order) != list(range(len(a))):
        raise ObjectMismatch(f"{list(order)} is not a permutation of {len(a)} wires")
    idx = _wire_permutation_index(a, order)
    mat = np.zeros((len(idx), len(idx)))
    mat[np.arange(len(idx)), idx] = 1.0
    return Superop(a, tuple(a[i] for i in order), mat)


def symmetry_q(a: Sequence[WireType], b: Sequence[WireType]) -> Superop:
    a, b = wire_obj(a), wire_obj(b)
    na, nb = len(a), len(b)
    return permutation_channel(a + b, list(range(na, na + nb)) + list(range(na)))


def embed_at(op: Superop, wires: Sequence[WireType], positions: Sequence[int]) -> Superop:
    """Act with ``op`` on the wires at ``positions``; outputs move to the end."""
    wires = wire_obj(wires)
    positions = list(positions)
    if tuple(wires[p] for p in positions) != op.dom:
        raise ObjectMismatch(f"wires at {positions} do not match {wire_names(op.dom)}")
    rest = [i for i in range(len(wires)) if i not in positions]
    front = permutation_channel(wires, positions + rest)
    rest_obj = tuple(wires[i] for i in rest)
    acted = tensor_q(op, identity_q(rest_obj))
    n_out = len(op.cod)
    back = permutation_channel(op.cod + rest_obj, list(range(n_out, n_out + len(rest))) + list(range(n_out)))
    return compose_q(compose_q(front, acted), back)


def apply(f: Superop, s: CqState) -> CqState:
    if f.dom != s.obj:
        raise ObjectMismatch(f"{f!r} cannot act on a state over {wire_names(s.obj)}")
    return CqState(f.cod, f.mat @ s.vec)


def apply_at(op: Superop, s: CqState, positions: Sequence[int]) -> CqState:
    return apply(embed_at(op, s.obj, positions), s)


def permute_state(s: CqState, order: Sequence[int]) -> CqState:
    return apply(permutation_channel(s.obj, order), s)


# -- coproduct Bit = I + I ---------------------------------------------------


def inj1() -> Superop:
    return Superop(UNIT, (BIT,), [[1.0], [0.0]])


def inj2() -> Superop:
    return Superop(UNIT, (BIT,), [[0.0], [1.0]])


def copair_bit(f: Superop, g: Superop) -> Superop:
    """``[f, g] : Bit (x) A -> C``: f on the bit-0 summand, g on the bit-1 summand."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ObjectMismatch("copair needs parallel maps")
    return Superop((BIT,) + f.dom, f.cod, np.hstack([f.mat, g.mat]))


def coproduct_map(f: Superop, g: Superop) -> Superop:
    """``f + g : A + A -> B + B`` on the leading-bit encoding of sums."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ObjectMismatch("sum of maps needs parallel maps")
    left = compose_q(f, tensor_q(inj1(), identity_q(f.cod)))
    right = compose_q(g, tensor_q(inj2(), identity_q(g.cod)))
    return copair_bit(left, right)


def distribute(a: Sequence[WireType]) -> Superop:
    """The distributivity iso ``A (x) (I + I) -> A (x) I + A (x) I``.

    With sums encoded by a leading tag bit this moves the trailing Bit wire
    of ``A (x) Bit`` to the front.
    """
    a = wire_obj(a)
    n = len(a)
    return permutation_channel(a + (BIT,), [n] + list(range(n)))


def distribute_inv(a: Sequence[WireType]) -> Superop:
    a = wire_obj(a)
    n = len(a)
    return permutation_channel((BIT,) + a, list(range(1, n + 1)) + [0])


# -- convex structure -------------------------------------------------------


def _check_weights(ws: Sequence[float], tol: float = TOL) -> np.ndarray:
    w = np.asarray(ws, dtype=float)
    if w.ndim != 1 or len(w) == 0:
        raise WeightMismatch("weights must be a non-empty list")
    if np.any(w < -tol) or np.any(w > 1 + tol) or abs(w.sum() - 1) > tol:
        raise WeightMismatch(f"weights {list(w)} are not a probability vector")
    return w


def convex_sum(ws: Sequence[float], fs: Sequence[Superop]) -> Superop:
    if len(ws) != len(fs):
        raise WeightMismatch(f"{len(ws)} weights for {len(fs)} maps")
    w = _check_weights(ws)
    dom, cod = fs[0].dom, fs[0].cod
    if any(f.dom != dom or f.cod != cod for f in fs):
        raise ObjectMismatch("convex sum needs parallel maps")
    mat = np.zeros_like(fs[0].mat)
    for wi, f in zip(w, fs):
        mat = mat + wi * f.mat
    return Superop(dom, cod, mat)


def convex_state(ws: Sequence[float], states: Sequence[CqState]) -> CqState:
    if len(ws) != len(states):
        raise WeightMismatch(f"{len(ws)} weights for {len(states)} states")
    w = _check_weights(ws)
    return CqState(states[0].obj, sum(wi * s.vec for wi, s in zip(w, states)))


# -- decomposition of states on Bit (x) A -------------------------------------


class BitDecomposition(NamedTuple):
    p1: float
    f1: Optional[CqState]
    p2: float
    f2: Optional[CqState]


def decompose_bit_state(s: CqState, tol: float = TOL) -> BitDecomposition:
    """Split a normalised state on ``Bit (x) A`` into its two classical branches.

    ``p_i`` is the trace of branch ``i``; ``f_i`` is the branch normalised
    by ``p_i``, or ``None`` when ``p_i <= tol``.
    """
    if not s.obj or s.obj[0] is not BIT:
        raise ObjectMismatch("decomposition needs a state on Bit (x) A")
    s.validate(tol)
    rest = s.obj[1:]
    half = vecdim(rest)
    parts = []
    for chunk in (s.vec[:half], s.vec[half:]):
        branch = CqState(rest, chunk)
        p = max(branch.trace(), 0.0)
        parts.append((p, branch.scaled(1 / p) if p > tol else None))
    return BitDecomposition(parts[0][0], parts[0][1], parts[1][0], parts[1][1])


def recompose_bit_state(d: BitDecomposition, rest: Sequence[WireType]) -> CqState:
    """``p1 (inj1 (x) f1) + p2 (inj2 (x) f2)``; absent branches contribute nothing."""
    rest = wire_obj(rest)
    pieces = []
    for p, f in ((d.p1, d.f1), (d.p2, d.f2)):
        pieces.append(np.zeros(vecdim(rest), dtype=complex) if f is None else p * f.vec)
    return CqState((BIT,) + rest, np.concatenate(pieces))


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    deviation: float
    detail: str = ""


def _block(f: Superop, c_out: int, c_in: int) -> np.ndarray:
    do, di = CqObject(f.cod).qdim ** 2, CqObject(f.dom).qdim ** 2
    return f.mat[c_out * do:(c_out + 1) * do, c_in * di:(c_in + 1) * di]


def choi_blocks(f: Superop) -> Dict[tuple, np.ndarray]:
    """Choi matrix of each classical-input/classical-output component map.

    For component ``S`` mapping ``2^qi x 2^qi`` blocks to ``2^qo x 2^qo``
    blocks, ``J = sum_ij |i><j| (x) S(|i><j|)``.
    """
    dom, cod = CqObject(f.dom), CqObject(f.cod)
    di, do = dom.qdim, cod.qdim
    out = {}
    for co in range(2 ** cod.bits):
        for ci in range(2 ** dom.bits):
            s = _block(f, co, ci).reshape(do, do, di, di)
            out[(co, ci)] = s.transpose(2, 0, 3, 1).reshape(di * do, di * do)
    return out


def is_cp(f: Superop, tol: float = TOL) -> CheckReport:
    worst = 0.0
    for key, j in choi_blocks(f).items():
        herm = np.max(np.abs(j - j.conj().T), initial=0.0)
        low = -np.linalg.eigvalsh((j + j.conj().T) / 2).min() if j.size else 0.0
        worst = max(worst, herm, low)
    return CheckReport(bool(worst <= tol), float(max(worst, 0.0)), "max negative Choi eigenvalue / non-Hermiticity")


def _trace_functional(obj: WireObj) -> np.ndarray:
    co = CqObject(obj)
    blk = np.eye(co.qdim).reshape(-1)
    return np.tile(blk, 2 ** co.bits)


def is_tp(f: Superop, tol: float = TOL) -> CheckReport:
    dev = np.max(np.abs(_trace_functional(f.cod) @ f.mat - _trace_functional(f.dom)), initial=0.0)
    return CheckReport(bool(dev <= tol), float(dev), "max deviation of output trace from input trace")


def is_cptp(f: Superop, tol: float = TOL) -> bool:
    return is_cp(f, tol).passed and is_tp(f, tol).passed


# -- concrete channels --------------------------------------------------------


def unitary_channel(u, tol: float = TOL) -> Superop:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] & (u.shape[0] - 1):
        raise NotUnitary(f"shape {u.shape} is not 2^n x 2^n")
    if np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) > tol:
        raise NotUnitary("matrix is not unitary")
    n = u.shape[0].bit_length() - 1
    obj = (QUBIT,) * n
    return Superop(obj, obj, np.kron(u, u.conj()))


def meas_channel() -> Superop:
    return Superop((QUBIT,), (BIT,), [[1, 0, 0, 0], [0, 0, 0, 1]])


def init_channel() -> Superop:
    return Superop((BIT,), (QUBIT,), [[1, 0], [0, 0], [0, 0], [0, 1]])


def discard_channel(t: WireType) -> Superop:
    if t is BIT:
        return Superop((BIT,), UNIT, [[1, 1]])
    return Superop((QUBIT,), UNIT, [[1, 0, 0, 1]])


GATE_MATRICES = {
    "H": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Z": np.array([[1, 0], [0, -1]]),
    "S": np.array([[1, 0], [0, 1j]]),
    "Tg": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]]),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
}


# -- dumps ------------------------------------------------------------------


def _entries(a: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(a).reshape(-1)]


def superop_to_json(f: Superop) -> dict:
    return {
        "dom": wire_names(f.dom),
        "cod": wire_names(f.cod),
        "shape": list(f.mat.shape),
        "entries": _entries(f.mat),
    }


def superop_from_json(data: dict) -> Superop:
    from .errors import ParseError

    try:
        dom, cod = wire_obj(data["dom"]), wire_obj(data["cod"])
        vals = np.array([complex(re, im) for re, im in data["entries"]])
        shape = tuple(data.get("shape", (vecdim(cod), vecdim(dom))))
        return Superop(dom, cod, vals.reshape(shape))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed superoperator dump: {exc}") from None


def state_to_json(s: CqState, tol: float = 0.0) -> dict:
    blocks = s.blocks if tol == 0.0 else s.nonzero_blocks(tol)
    return {
        "obj": wire_names(s.obj),
        "blocks": {k: {"shape": list(v.shape), "entries": _entries(v)} for k, v in blocks.items()},
    }


def state_from_json(data: dict) -> CqState:
    from .errors import ParseError

    try:
        obj = wire_obj(data["obj"])
        blocks = {
            k: np.array([complex(re, im) for re, im in b["entries"]]).reshape(b["shape"])
            for k, b in data["blocks"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed state dump: {exc}") from None
    return CqState.from_blocks(obj, blocks)


def basis_state(obj: Sequence[WireType], bits: str = "", psi=None) -> CqState:
    """A pure cq-state: classical bits ``bits`` (default all 0) and qubit vector ``psi``."""
    co = CqObject(obj)
    bits = bits or "0" * co.bits
    if psi is None:
        psi = np.zeros(co.qdim)
        psi[0] = 1
    psi = np.asarray(psi, dtype=complex)
    return CqState.from_blocks(co.wires, {bits: np.outer(psi, psi.conj())})
