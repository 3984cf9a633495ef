"""Dense-unitary construction and phase-insensitive operator equality.

Verification-scale only: circuits are capped at 10 qubits (a 2^10 matrix).
Qubit labels map to tensor positions in ascending label order, with the
smallest label on the most significant axis.
"""

from __future__ import annotations

import numpy as np

from .circuit import Circuit
from .errors import CapabilityError, GateError
from .gates import Gate

MAX_SIM_QUBITS = 10
UNITARITY_TOL = 1e-9
PHASE_EQ_TOL = 1e-8


def gate_matrix(g: Gate) -> np.ndarray:
    """Unitary of a single gate on its own qubits (dimension ``2**arity``)."""
    fn = g.spec.matrix_fn
    if fn is None:
        raise CapabilityError(f"gate {g.name!r} has no matrix constructor")
    return fn(*g.params)


def _apply_gate(unitary: np.ndarray, g: Gate, positions: dict[int, int], n: int) -> np.ndarray:
    """Left-multiply the embedded gate onto ``unitary`` (so the gate acts last)."""
    k = len(g.qubits)
    small = gate_matrix(g).reshape((2,) * (2 * k))
    axes = [positions[q] for q in g.qubits]
    tensor = unitary.reshape((2,) * n + (unitary.shape[1],))
    tensor = np.tensordot(small, tensor, axes=(range(k, 2 * k), axes))
    # tensordot moves the contracted axes to the front; put them back in place.
    tensor = np.moveaxis(tensor, range(k), axes)
    return tensor.reshape(unitary.shape)


def circuit_unitary(c: Circuit, qubits: tuple[int, ...] | None = None) -> np.ndarray:
    """Dense unitary of the whole circuit.

    Args:
        c: circuit to simulate.
        qubits: qubit label ordering; defaults to the circuit's labels
            ascending. Must cover every label the circuit touches.
    """
    if qubits is None:
        qubits = c.qubits()
        if not qubits:
            qubits = (0,)
    missing = {q for g in c for q in g.qubits} - set(qubits)
    if missing:
        raise GateError(f"circuit uses qubits outside the given order: {sorted(missing)}")
    n = len(qubits)
    if n > MAX_SIM_QUBITS:
        raise CapabilityError(f"{n} qubits exceed the {MAX_SIM_QUBITS}-qubit simulator cap")
    positions = {q: i for i, q in enumerate(qubits)}
    unitary = np.eye(2**n, dtype=complex)
    for g in c:
        unitary = _apply_gate(unitary, g, positions, n)
    return unitary


def is_unitary(mat: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    eye = np.eye(mat.shape[0])
    return bool(np.max(np.abs(mat.conj().T @ mat - eye)) <= tol)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = PHASE_EQ_TOL) -> bool:
    """True iff ``a == exp(ix) * b`` entrywise within ``tol`` for some real x.

    The phase is read off the largest-magnitude entry of ``b``.
    """
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) <= tol:
        return bool(np.max(np.abs(a)) <= tol)
    phase = a[idx] / b[idx]
    mag = abs(phase)
    if abs(mag - 1.0) > tol:
        return False
    phase /= mag
    return bool(np.max(np.abs(a - phase * b)) <= tol)


def circuits_equivalent(a: Circuit, b: Circuit, tol: float = PHASE_EQ_TOL) -> bool:
    """Operator equality of two circuits up to global phase.

    Both circuits are simulated on the union of their qubit labels.
    """
    qubits = tuple(sorted(a.qubit_set | b.qubit_set)) or (0,)
    return equal_up_to_phase(circuit_unitary(a, qubits), circuit_unitary(b, qubits), tol)
