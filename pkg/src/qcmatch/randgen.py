"""Seeded random circuit generation.

Uses ``random.Random`` (Mersenne Twister), whose integer draws are stable
across platforms and Python versions, so a seed reproduces the same circuit
everywhere.
"""

from __future__ import annotations

import random

from .circuit import Circuit
from .errors import GateError
from .gates import Gate

RANDOM_GATE_SET = ("x", "cx", "ccx")
_ARITY = {"x": 1, "cx": 2, "ccx": 3}


def random_circuit(
    n_gates: int,
    n_qubits: int,
    seed: int,
    gate_set: tuple[str, ...] = RANDOM_GATE_SET,
    allow_narrow: bool = False,
) -> Circuit:
    """Random circuit with names uniform over ``gate_set``.

    Qubit tuples are drawn uniformly among ordered tuples of distinct labels
    below ``n_qubits``. Needs at least 3 qubits for the default gate set
    (Toffoli); pass ``allow_narrow`` to restrict the gate set to what fits
    instead of raising.
    """
    max_arity = max(_ARITY[g] for g in gate_set)
    if n_qubits < max_arity:
        if not allow_narrow:
            raise GateError(
                f"{n_qubits} qubits cannot host {max_arity}-qubit gates; "
                "use allow_narrow to restrict the gate set"
            )
        gate_set = tuple(g for g in gate_set if _ARITY[g] <= n_qubits)
        if not gate_set:
            raise GateError(f"no gate in {RANDOM_GATE_SET} fits on {n_qubits} qubit(s)")
    rng = random.Random(seed)
    gates = []
    for _ in range(n_gates):
        name = gate_set[rng.randrange(len(gate_set))]
        qubits = rng.sample(range(n_qubits), _ARITY[name])
        gates.append(Gate(name, tuple(qubits)))
    return Circuit(gates, num_qubits=n_qubits)
