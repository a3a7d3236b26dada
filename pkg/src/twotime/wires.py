"""Wire types and objects shared by the circuit and superoperator categories.

An object is an ordered tuple of wire types; the empty tuple is the tensor
unit ``I`` and tensor of objects is tuple concatenation (strict monoidal).
"""
from __future__ import annotations

import enum
from typing import Iterable, Sequence, Tuple

from .errors import ParseError

MAX_WIRES = 10


class WireType(enum.Enum):
    BIT = "BIT"
    QUBIT = "QUBIT"

    def __repr__(self) -> str:
        return self.value


BIT = WireType.BIT
QUBIT = WireType.QUBIT

WireObj = Tuple[WireType, ...]

UNIT: WireObj = ()


def wire_obj(wires: Iterable[WireType | str]) -> WireObj:
    """Coerce a sequence of wire types or their names into a WireObj."""
    out = []
    for w in wires:
        if isinstance(w, WireType):
            out.append(w)
        elif isinstance(w, str) and w in WireType.__members__:
            out.append(WireType[w])
        else:
            raise ParseError(f"not a wire type: {w!r}")
    return tuple(out)


def wire_names(obj: Sequence[WireType]) -> list:
    return [w.value for w in obj]


def nbits(obj: Sequence[WireType]) -> int:
    return sum(1 for w in obj if w is BIT)


def nqubits(obj: Sequence[WireType]) -> int:
    return sum(1 for w in obj if w is QUBIT)


def vecdim(obj: Sequence[WireType]) -> int:
    """Dimension of the vectorised cq-space: 2^bits * 4^qubits."""
    return 2 ** nbits(obj) * 4 ** nqubits(obj)
