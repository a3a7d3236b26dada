"""Bundled example programs and signatures, as plain JSON-able data."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, List, Tuple

from .errors import UnknownExample
from .interp import signature_to_json
from .circuit import default_signature

_SX = [[[0.5, 0.5], [0.5, -0.5]], [[0.5, -0.5], [0.5, 0.5]]]

COINFLIP = {
    "inputs": [],
    "body": [
        {"op": "NEW", "name": "q", "type": "QUBIT"},
        {"op": "GATE", "gate": "H", "args": ["q"]},
        {"op": "MEASURE", "wire": "q", "result": "m"},
        {"op": "DYNLIFT", "wire": "m", "param": "coin"},
        {"op": "RETURN", "wires": []},
    ],
}

TELEPORT = {
    "inputs": [["q", "QUBIT"]],
    "body": [
        {"op": "NEW", "name": "a", "type": "QUBIT"},
        {"op": "NEW", "name": "b", "type": "QUBIT"},
        {"op": "GATE", "gate": "H", "args": ["a"]},
        {"op": "GATE", "gate": "CNOT", "args": ["a", "b"]},
        {"op": "GATE", "gate": "CNOT", "args": ["q", "a"]},
        {"op": "GATE", "gate": "H", "args": ["q"]},
        {"op": "MEASURE", "wire": "q", "result": "mq"},
        {"op": "MEASURE", "wire": "a", "result": "ma"},
        {"op": "DYNLIFT", "wire": "ma", "param": "x"},
        {"op": "DYNLIFT", "wire": "mq", "param": "z"},
        {"op": "IF", "param": "x", "then": [{"op": "GATE", "gate": "X", "args": ["b"]}], "else": []},
        {"op": "IF", "param": "z", "then": [{"op": "GATE", "gate": "Z", "args": ["b"]}], "else": []},
        {"op": "RETURN", "wires": ["b"]},
    ],
}

# The boxed circuit depends on a lifted coin: its shape is decided at
# generation time, then it is applied to a fresh qubit.
BOX_DEMO = {
    "inputs": [],
    "body": [
        {"op": "NEW", "name": "q", "type": "QUBIT"},
        {"op": "GATE", "gate": "H", "args": ["q"]},
        {"op": "MEASURE", "wire": "q", "result": "m"},
        {"op": "DYNLIFT", "wire": "m", "param": "coin"},
        {
            "op": "BOX",
            "name": "f",
            "inputs": [["u", "QUBIT"]],
            "body": [
                {"op": "IF", "param": "coin",
                 "then": [{"op": "GATE", "gate": "SX", "args": ["u"]}],
                 "else": [{"op": "GATE", "gate": "H", "args": ["u"]}]},
                {"op": "MEASURE", "wire": "u", "result": "r"},
                {"op": "RETURN", "wires": ["r"]},
            ],
        },
        {"op": "NEW", "name": "t", "type": "QUBIT"},
        {"op": "APPLY_BOXED", "box": "f", "args": ["t"], "results": ["out"]},
        {"op": "RETURN", "wires": ["out"]},
    ],
}

_BOX_DEMO_SIG = [{"name": "SX", "dom": ["QUBIT"], "cod": ["QUBIT"],
                  "interp": {"kind": "unitary", "entries": [e for row in _SX for e in row]}}]

EXAMPLES: Dict[str, Tuple[dict, list]] = {
    "coinflip": (COINFLIP, []),
    "teleport": (TELEPORT, []),
    "box-demo": (BOX_DEMO, _BOX_DEMO_SIG),
}


def example(name: str) -> Tuple[dict, list]:
    """The (program, signature) JSON pair of a bundled example."""
    try:
        return EXAMPLES[name]
    except KeyError:
        raise UnknownExample(f"{name!r}; choose from {sorted(EXAMPLES)}") from None


def write_example(name: str, directory: str | Path) -> List[Path]:
    """Write ``<name>.program.json`` and ``<name>.signature.json``; return the paths."""
    prog, extra = example(name)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    names = {d["name"] for d in extra}
    sig = [d for d in signature_to_json(default_signature()) if d["name"] not in names] + extra
    paths = [directory / f"{name}.program.json", directory / f"{name}.signature.json"]
    paths[0].write_text(json.dumps(prog, indent=2) + "\n")
    paths[1].write_text(json.dumps(sig, indent=2) + "\n")
    return paths
