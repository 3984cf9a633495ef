"""Canonical form of a circuit: the pairwise-commutation DAG.

Vertices are 1-based gate indices. There is an edge ``i -> j`` exactly when
gate ``i`` can be brought immediately to the left of gate ``j`` by swapping
commuting gates, but ``i`` and ``j`` themselves do not commute. The resulting
labeled graph is invariant under reordering of commuting gates, and
``j in successors(i)`` holds iff gates ``i`` and ``j`` cannot have their
relative order exchanged.
"""

from __future__ import annotations

from .circuit import Circuit
from .commutation import DEFAULT_ORACLE, CommutationOracle


class CanonicalDag:
    """Commutation DAG of a circuit, with cached reachability closures.

    All per-vertex containers are indexed 1..n; index 0 is unused filler.
    Immutable once built: matching overlays its own mutable annotations.
    """

    __slots__ = (
        "circuit", "n", "direct_succ", "direct_pred",
        "successors", "predecessors", "succ_sets", "pred_sets",
    )

    def __init__(self, circuit: Circuit):
        self.circuit = circuit
        self.n = len(circuit)
        self.direct_succ: list[list[int]] = [[] for _ in range(self.n + 1)]
        self.direct_pred: list[list[int]] = [[] for _ in range(self.n + 1)]
        self.successors: list[tuple[int, ...]] = [()] * (self.n + 1)
        self.predecessors: list[tuple[int, ...]] = [()] * (self.n + 1)
        self.succ_sets: list[frozenset[int]] = [frozenset()] * (self.n + 1)
        self.pred_sets: list[frozenset[int]] = [frozenset()] * (self.n + 1)

    def edges(self) -> list[tuple[int, int]]:
        """Direct edges sorted by (source, target)."""
        return [(i, j) for i in range(1, self.n + 1) for j in self.direct_succ[i]]

    def commutes_in_circuit(self, i: int, j: int) -> bool:
        """True iff gates ``i`` and ``j`` can have their order exchanged."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"gate index out of range 1..{self.n}: ({i}, {j})")
        if i == j:
            return True
        if i > j:
            i, j = j, i
        return j not in self.succ_sets[i]


def create_canonical_form(
    c: Circuit, oracle: CommutationOracle | None = None, closures: bool = True
) -> CanonicalDag:
    """Build the canonical form of ``c``.

    Gates are inserted left to right; for each new gate ``j``, earlier gates
    are scanned right to left and an edge ``i -> j`` is added whenever gate
    ``i`` is still reachable (no interposed non-commuting gate) and does not
    commute with gate ``j``. Predecessors of a newly connected gate become
    unreachable for the rest of the scan.
    """
    oracle = oracle or DEFAULT_ORACLE
    dag = CanonicalDag(c)
    n = dag.n
    reachable = [True] * (n + 1)
    for j in range(1, n + 1):
        gate_j = c.gate(j)
        for k in range(1, j):
            reachable[k] = True
        for i in range(j - 1, 0, -1):
            if reachable[i] and not oracle.commutes(c.gate(i), gate_j):
                dag.direct_succ[i].append(j)
                dag.direct_pred[j].append(i)
                _mark_predecessors_unreachable(dag, i, reachable)
    for i in range(1, n + 1):
        dag.direct_succ[i].sort()
        dag.direct_pred[i].sort()
    if closures:
        initialize_reachability_lists(dag)
    return dag


def _mark_predecessors_unreachable(dag: CanonicalDag, i: int, reachable: list[bool]) -> None:
    stack = list(dag.direct_pred[i])
    while stack:
        v = stack.pop()
        if reachable[v]:
            reachable[v] = False
            stack.extend(dag.direct_pred[v])


def initialize_reachability_lists(dag: CanonicalDag) -> None:
    """Fill the per-vertex full successor and predecessor closures.

    Successor lists are merged in reverse topological (descending label)
    order, predecessor lists in ascending order; both come out sorted and
    duplicate-free, giving constant-time reachability membership afterwards.
    """
    n = dag.n
    for i in range(n, 0, -1):
        acc: set[int] = set()
        for d in dag.direct_succ[i]:
            acc.add(d)
            acc.update(dag.succ_sets[d])
        dag.succ_sets[i] = frozenset(acc)
        dag.successors[i] = tuple(sorted(acc))
    for i in range(1, n + 1):
        acc = set()
        for d in dag.direct_pred[i]:
            acc.add(d)
            acc.update(dag.pred_sets[d])
        dag.pred_sets[i] = frozenset(acc)
        dag.predecessors[i] = tuple(sorted(acc))


def is_connected_part(dag: CanonicalDag, indices: frozenset[int] | set[int]) -> bool:
    """True iff the gate set can be made contiguous by commuting swaps.

    Equivalently: no path between two members of the set passes through a
    non-member, i.e. no outside vertex has both a predecessor and a
    successor inside the set.
    """
    for w in range(1, dag.n + 1):
        if w in indices:
            continue
        if (dag.pred_sets[w] & indices) and (dag.succ_sets[w] & indices):
            return False
    return True
