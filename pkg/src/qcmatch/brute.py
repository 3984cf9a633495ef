"""Exhaustive combinatorial matching: the ground-truth oracle.

Enumerates every connected subset of pattern gates, then every assignment of
those gates to congruent circuit gates, keeping assignments that (1) respect
the gate ordering constraints of both sides, (2) pick a connected part of the
circuit, and (3) admit one consistent qubit relabeling. Intentionally
exponential in the pattern size; exists for testing and as a baseline.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .circuit import Circuit
from .commutation import DEFAULT_ORACLE, CommutationOracle
from .dag import CanonicalDag, create_canonical_form, is_connected_part
from .errors import CapabilityError
from .gates import gate_congruent, gate_equal_under_map
from .matching import Match

MAX_PATTERN_GATES = 12
MAX_CIRCUIT_GATES = 24


@dataclass(frozen=True)
class SubPattern:
    """A connected subset of pattern gate indices with its own canonical form.

    ``indices`` are original 1-based pattern indices, ascending; the canonical
    form is rebuilt from the induced gate sequence (removing gates can unlock
    orderings the full pattern forbids).
    """

    indices: tuple[int, ...]
    circuit: Circuit
    dag: CanonicalDag


def enumerate_subpatterns(
    t: Circuit,
    oracle: CommutationOracle | None = None,
    max_gates: int = MAX_PATTERN_GATES,
) -> list[SubPattern]:
    """All non-empty connected subsets of ``t``'s gates.

    A subset is connected iff no outside vertex of the full pattern's
    canonical form has both a predecessor and a successor inside it.
    """
    if len(t) > max_gates:
        raise CapabilityError(f"pattern of {len(t)} gates exceeds the cap of {max_gates}")
    oracle = oracle or DEFAULT_ORACLE
    g_t = create_canonical_form(t, oracle)
    out = []
    labels = range(1, len(t) + 1)
    for size in labels:
        for subset in itertools.combinations(labels, size):
            chosen = frozenset(subset)
            if not is_connected_part(g_t, chosen):
                continue
            sub = t.subcircuit(chosen)
            out.append(SubPattern(tuple(subset), sub, create_canonical_form(sub, oracle)))
    return out


def brute_force_matches(
    c: Circuit,
    t: Circuit,
    oracle: CommutationOracle | None = None,
    max_pattern: int = MAX_PATTERN_GATES,
    max_circuit: int = MAX_CIRCUIT_GATES,
) -> list[Match]:
    """Every match of every connected sub-pattern of ``t`` in ``c``.

    Returns one Match per distinct pair set (first valid qubit map kept),
    sorted by (size descending, pair set).
    """
    if len(c) > max_circuit:
        raise CapabilityError(f"circuit of {len(c)} gates exceeds the cap of {max_circuit}")
    oracle = oracle or DEFAULT_ORACLE
    g_c = create_canonical_form(c, oracle)
    found: dict[frozenset, Match] = {}
    for sub in enumerate_subpatterns(t, oracle, max_pattern):
        _match_subpattern(c, t, g_c, sub, found)
    return sorted(found.values(), key=Match.sort_key)


def _match_subpattern(c, t, g_c, sub, found):
    k = len(sub.indices)
    # Candidate circuit gates per slot, by congruence.
    slots = []
    for local, orig in enumerate(sub.indices, start=1):
        gate = t.gate(orig)
        slots.append([r for r in range(1, len(c) + 1) if gate_congruent(c.gate(r), gate)])
        if not slots[-1]:
            return

    sub_succ = sub.dag.succ_sets
    c_succ = g_c.succ_sets
    assignment = [0] * (k + 1)  # local slot -> circuit index
    used: set[int] = set()

    def order_compatible(local: int, r: int) -> bool:
        for prev in range(1, local):
            rp = assignment[prev]
            if local in sub_succ[prev] and r not in c_succ[rp]:
                return False
            if prev in sub_succ[local] and rp not in c_succ[r]:
                return False
        return True

    def backtrack(local: int):
        if local > k:
            circuit_part = frozenset(assignment[1:])
            if is_connected_part(g_c, circuit_part):
                for qmap in _qubit_assignments(c, t, sub.indices, assignment):
                    pairs = frozenset(
                        (orig, assignment[local_i])
                        for local_i, orig in enumerate(sub.indices, start=1)
                    )
                    if pairs not in found:
                        found[pairs] = Match(pairs, qmap, min(pairs))
                    break
            return
        for r in slots[local - 1]:
            if r in used or not order_compatible(local, r):
                continue
            assignment[local] = r
            used.add(r)
            backtrack(local + 1)
            used.remove(r)

    backtrack(1)


def _qubit_assignments(c, t, indices, assignment):
    """Consistent bijections of sub-pattern qubits onto assigned circuit qubits."""
    t_qubits = sorted({q for orig in indices for q in t.gate(orig).qubits})
    c_qubits = sorted({q for r in assignment[1:] for q in c.gate(r).qubits})
    if len(t_qubits) != len(c_qubits):
        return
    for image in itertools.permutations(c_qubits):
        qmap = dict(zip(t_qubits, image))
        ok = True
        for local, orig in enumerate(indices, start=1):
            if not gate_equal_under_map(t.gate(orig), c.gate(assignment[local]), qmap):
                ok = False
                break
        if ok:
            yield qmap
