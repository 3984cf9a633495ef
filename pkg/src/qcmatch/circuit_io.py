"""Text format for circuits.

One gate per line: ``name[(p1,p2,...)] q1 q2 ...`` with decimal radian
parameters and non-negative integer qubit labels. ``#`` starts a comment
line, and an optional ``qubits N`` header declares the qubit count. The
serializer round-trips exactly: ``parse_circuit(serialize_circuit(c)) == c``.
"""

from __future__ import annotations

import re

from .circuit import Circuit
from .errors import GateError, ParseError
from .gates import Gate, GateRegistry, DEFAULT_REGISTRY

_GATE_RE = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\((?P<params>[^)]*)\))?$")


def parse_circuit(text: str, registry: GateRegistry = DEFAULT_REGISTRY) -> Circuit:
    """Parse circuit text; errors carry 1-based line numbers."""
    gates = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "qubits":
            if len(tokens) != 2:
                raise ParseError("qubits header expects one integer", line=lineno)
            try:
                declared = int(tokens[1])
            except ValueError:
                raise ParseError(f"bad qubit count {tokens[1]!r}", line=lineno) from None
            if declared < 0:
                raise ParseError("qubit count must be non-negative", line=lineno)
            continue
        head = _GATE_RE.match(tokens[0])
        if head is None:
            raise ParseError(f"malformed gate term {tokens[0]!r}", line=lineno)
        name = head.group("name")
        params: tuple[float, ...] = ()
        if head.group("params") is not None:
            try:
                params = tuple(float(p) for p in head.group("params").split(",") if p.strip())
            except ValueError:
                raise ParseError(
                    f"malformed parameter list {head.group('params')!r}", line=lineno
                ) from None
        try:
            qubits = tuple(int(q) for q in tokens[1:])
        except ValueError:
            raise ParseError(f"malformed qubit label in {line!r}", line=lineno) from None
        if any(q < 0 for q in qubits):
            raise ParseError("qubit labels must be non-negative", line=lineno)
        try:
            gates.append(Gate(name, qubits, params, registry=registry))
        except GateError as err:
            raise ParseError(str(err), line=lineno) from None
    return Circuit(gates, num_qubits=declared)


def serialize_circuit(c: Circuit) -> str:
    """Text form of a circuit; parameter floats are written with full precision."""
    lines = []
    if c.declared_qubits is not None:
        lines.append(f"qubits {c.declared_qubits}")
    lines.extend(str(g) for g in c.gates)
    return "\n".join(lines) + ("\n" if lines else "")


def load_circuit(path: str, registry: GateRegistry = DEFAULT_REGISTRY) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_circuit(fh.read(), registry)


def save_circuit(c: Circuit, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_circuit(c))
