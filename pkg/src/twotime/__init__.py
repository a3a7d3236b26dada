"""Two-time quantum circuit semantics.

Circuits are built at generation time and executed later; this package
models both worlds (syntactic circuits and cq-superoperators), the biset
monad relating them, and an exact interpreter in which lifted measurement
results steer circuit generation.
"""
from .circuit import Circuit, CircuitBuilder, GateDecl, Signature, default_signature
from .errors import TwotimeError
from .interp import GateInterp, GlobalElement, default_interp, element_of, interpret_circuit
from .program import Program, aggregate_channel, parse_program, run
from .quantum import CqState, Superop
from .wires import BIT, QUBIT, WireType

__version__ = "0.1.0"

__all__ = [
    "BIT", "QUBIT", "WireType", "Circuit", "CircuitBuilder", "GateDecl", "Signature", "default_signature",
    "CqState", "Superop", "GateInterp", "GlobalElement", "default_interp", "element_of", "interpret_circuit",
    "Program", "parse_program", "run", "aggregate_channel", "TwotimeError",
]
