"""Circuit representation: an indexed gate list.

Gate indices are 1-based throughout the package: ``circuit.gate(1)`` is the
first gate applied. The operator of a circuit is the product of its gate
unitaries with later gates applied later.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .gates import Gate


class Circuit:
    """An ordered, immutable list of gates.

    Args:
        gates: gates in application order.
        num_qubits: optional declared qubit count; labels ``0..num_qubits-1``
            are considered part of the circuit even if unused by any gate.
    """

    __slots__ = ("gates", "qubit_set", "_declared")

    def __init__(self, gates: Iterable[Gate] = (), num_qubits: int | None = None):
        self.gates: tuple[Gate, ...] = tuple(gates)
        used = set()
        for g in self.gates:
            used.update(g.qubits)
        if num_qubits is not None:
            used.update(range(num_qubits))
        self.qubit_set: frozenset[int] = frozenset(used)
        self._declared = num_qubits

    def gate(self, index: int) -> Gate:
        """Gate at 1-based position ``index``."""
        if not 1 <= index <= len(self.gates):
            raise IndexError(f"gate index {index} out of range 1..{len(self.gates)}")
        return self.gates[index - 1]

    @property
    def num_qubits(self) -> int:
        return len(self.qubit_set)

    @property
    def declared_qubits(self) -> int | None:
        return self._declared

    def qubits(self) -> tuple[int, ...]:
        """All qubit labels, ascending."""
        return tuple(sorted(self.qubit_set))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __eq__(self, other) -> bool:
        return isinstance(other, Circuit) and self.gates == other.gates

    def __hash__(self) -> int:
        return hash(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        declared = None
        if self._declared is not None or other._declared is not None:
            declared = max(self._declared or 0, other._declared or 0)
        return Circuit(self.gates + other.gates, num_qubits=declared)

    def __repr__(self) -> str:
        return f"Circuit([{', '.join(str(g) for g in self.gates)}])"

    def subcircuit(self, indices: Iterable[int]) -> "Circuit":
        """Circuit made of the gates at the given 1-based indices, in index order."""
        return Circuit(self.gates[i - 1] for i in sorted(indices))
