"""Circuit optimization passes built on the matcher.

Two passes: identity-template rewriting (replace a matched part of a
template with the inverted remainder whenever that lowers the cost) and
peephole search for the longest connected sub-circuits supported on a small
qubit subset.
"""

from __future__ import annotations

import heapq
import itertools
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .commutation import DEFAULT_ORACLE, CommutationOracle
from .dag import CanonicalDag, create_canonical_form, is_connected_part
from .errors import StructureError
from .gates import Gate
from .matching import Match, MatchOptions, pattern_match
from .simulator import MAX_SIM_QUBITS, circuit_unitary, equal_up_to_phase

TEMPLATE_ID_TOL = 1e-9


@dataclass(frozen=True)
class Template:
    """A circuit whose total unitary is the identity, usable for rewriting."""

    name: str
    circuit: Circuit

    def __post_init__(self):
        if self.circuit.num_qubits <= MAX_SIM_QUBITS:
            dim = 2 ** max(self.circuit.num_qubits, 1)
            unitary = circuit_unitary(self.circuit)
            if not equal_up_to_phase(unitary, np.eye(dim), TEMPLATE_ID_TOL):
                raise StructureError(
                    f"template {self.name!r} does not implement the identity"
                )


@dataclass(frozen=True)
class CostModel:
    """Additive per-gate-name weights; unnamed gates fall back to ``default``."""

    weights: dict[str, float] = field(default_factory=dict)
    default: float = 1.0
    name: str = "unit"

    def gate_cost(self, g: Gate) -> float:
        return self.weights.get(g.name, self.default)

    def cost(self, gates) -> float:
        return sum(self.gate_cost(g) for g in gates)


UNIT_COST = CostModel()
CNOT_COST = CostModel(weights={"cx": 1.0}, default=0.0, name="cnot")
COST_PRESETS = {"unit": UNIT_COST, "cnot": CNOT_COST}


def extract_adjacent(
    c: Circuit, matched: frozenset[int] | set[int],
    oracle: CommutationOracle | None = None,
    g_c: CanonicalDag | None = None,
) -> tuple[Circuit, Circuit, Circuit]:
    """Reorder ``c`` so the matched gates sit contiguously.

    Unmatched gates that precede a matched gate in the canonical DAG are
    moved in front of the block, all others behind it; relative order within
    each region is preserved. Returns ``(prefix, block, suffix)`` whose
    concatenation implements the same operator as ``c``.

    Raises:
        StructureError: the matched set is not a connected part of ``c``.
    """
    if g_c is None:
        g_c = create_canonical_form(c, oracle or DEFAULT_ORACLE)
    matched = frozenset(matched)
    if not is_connected_part(g_c, matched):
        raise StructureError(f"gate set {sorted(matched)} is not a connected part")
    prefix, block, suffix = [], [], []
    for idx in range(1, len(c) + 1):
        gate = c.gate(idx)
        if idx in matched:
            block.append(gate)
        elif g_c.succ_sets[idx] & matched:
            prefix.append(gate)
        else:
            suffix.append(gate)
    return Circuit(prefix), Circuit(block), Circuit(suffix)


def dagger_reverse(gates) -> list[Gate]:
    """Inverses of the gates in reverse order; implements the adjoint."""
    return [g.inverse() for g in reversed(list(gates))]


def apply_template_substitution(
    c: Circuit, t: Template, m: Match, cost: CostModel = UNIT_COST,
    allow_equal_cost: bool = False,
    oracle: CommutationOracle | None = None,
) -> Circuit | None:
    """Rewrite the matched part of ``c`` using the identity template.

    Splitting the template as (before, matched, after), the matched gates
    equal the inverted concatenation of the two unmatched slices, so the
    matched circuit gates are replaced by ``dagger(before) + dagger(after)``
    with qubits sent through the match's map. Returns the rewritten circuit
    when it is strictly cheaper (or not more expensive, with
    ``allow_equal_cost``), else ``None``.
    """
    oracle = oracle or DEFAULT_ORACLE
    matched_t = m.pattern_indices()
    matched_c = m.circuit_indices()
    g_t = create_canonical_form(t.circuit, oracle)
    if not is_connected_part(g_t, matched_t):
        raise StructureError("matched template part is not connected")
    before, after = [], []
    for idx in range(1, len(t.circuit) + 1):
        if idx in matched_t:
            continue
        gate = t.circuit.gate(idx)
        if g_t.succ_sets[idx] & matched_t:
            before.append(gate)
        else:
            after.append(gate)
    replacement = [
        g.relabeled(m.qubit_map)
        for g in dagger_reverse(before) + dagger_reverse(after)
    ]
    old_cost = cost.cost(c.gate(j) for j in matched_c)
    new_cost = cost.cost(replacement)
    if new_cost > old_cost or (new_cost == old_cost and not allow_equal_cost):
        return None
    prefix, _, suffix = extract_adjacent(c, matched_c, oracle)
    return Circuit(
        prefix.gates + tuple(replacement) + suffix.gates,
        num_qubits=c.declared_qubits,
    )


def template_optimize(
    c: Circuit,
    templates: list[Template],
    cost: CostModel = UNIT_COST,
    max_iters: int = 10_000,
    allow_equal_cost: bool = False,
    opts: MatchOptions | None = None,
) -> tuple[Circuit, dict]:
    """Repeatedly rewrite ``c`` with the given templates until no rewrite helps.

    Per template visit, the largest cost-reducing substitution is applied
    (ties broken by earliest circuit index) and matching restarts on the
    rewritten circuit. Returns the optimized circuit and a report with
    per-template statistics.
    """
    opts = opts or MatchOptions()
    report = {
        "cost_model": cost.name,
        "cost_before": cost.cost(c.gates),
        "gates_before": len(c),
        "templates": {t.name: {"matches_found": 0, "applied": 0, "cost_saved": 0.0}
                      for t in templates},
    }
    start_time = time.perf_counter()
    iters = 0
    improved = True
    while improved and iters < max_iters:
        improved = False
        for template in templates:
            while iters < max_iters:
                iters += 1
                applied = _apply_best(c, template, cost, allow_equal_cost, opts, report)
                if applied is None:
                    break
                c = applied
                improved = True
    report["cost_after"] = cost.cost(c.gates)
    report["gates_after"] = len(c)
    report["wall_seconds"] = time.perf_counter() - start_time
    return c, report


def _apply_best(c, template, cost, allow_equal_cost, opts, report):
    if len(template.circuit) == 0 or len(c) == 0:
        return None
    if template.circuit.num_qubits > c.num_qubits:
        return None
    matches = pattern_match(c, template.circuit, opts)
    entry = report["templates"][template.name]
    entry["matches_found"] += len(matches)
    best = None
    for m in sorted(matches, key=lambda m: (-m.size, min(m.circuit_indices()))):
        candidate = apply_template_substitution(
            c, template, m, cost, allow_equal_cost, opts.oracle
        )
        if candidate is None:
            continue
        gain = cost.cost(c.gates) - cost.cost(candidate.gates)
        if best is None or gain > best[0]:
            best = (gain, candidate)
    if best is None:
        return None
    entry["applied"] += 1
    entry["cost_saved"] += best[0]
    return best[1]


def find_longest_subcircuits(
    c: Circuit, width: int, oracle: CommutationOracle | None = None
) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Maximal connected parts of ``c`` supported on ``width`` qubits.

    Runs the matching machinery with the pattern replaced by a support test:
    any gate acting only inside the chosen qubit subset counts as a match.
    Returns (qubit subset, gate index set) pairs, largest first; per subset,
    sets dominated by a strictly larger overlapping set are dropped.
    """
    oracle = oracle or DEFAULT_ORACLE
    if width > c.num_qubits:
        raise StructureError(f"width {width} exceeds the circuit's {c.num_qubits} qubits")
    g_c = create_canonical_form(c, oracle)
    results = []
    for subset in itertools.combinations(sorted(c.qubit_set), width):
        qubits = frozenset(subset)
        eligible = [
            idx for idx in range(1, len(c) + 1) if c.gate(idx).support <= qubits
        ]
        if not eligible:
            continue
        runs: set[frozenset[int]] = set()
        for start in eligible:
            for found in _support_match(g_c, qubits, start):
                runs.add(found)
        for run in _maximal_sets(runs):
            results.append((qubits, run))
    results.sort(key=lambda qr: (-len(qr[1]), sorted(qr[0]), sorted(qr[1])))
    return results


def _maximal_sets(runs: set[frozenset[int]]) -> list[frozenset[int]]:
    out = []
    for run in runs:
        if not any(len(other) > len(run) and other & run for other in runs):
            out.append(run)
    return sorted(out, key=lambda r: (-len(r), sorted(r)))


def _support_match(g_c: CanonicalDag, qubits: frozenset[int], r: int):
    """Forward/backward search where "matches" are gates supported on ``qubits``."""
    circuit = g_c.circuit
    supported = [False] * (g_c.n + 1)
    for idx in range(1, g_c.n + 1):
        supported[idx] = circuit.gate(idx).support <= qubits

    # Forward pass: greedy walk over the start's successor cone.
    matched = {r}
    blocked: set[int] = set()
    to_visit = {r: deque(g_c.direct_succ[r])}
    heap = [(to_visit[r][0], r)] if g_c.direct_succ[r] else []
    while heap:
        _, v0 = heapq.heappop(heap)
        queue = to_visit[v0]
        s = queue.popleft()
        if queue:
            heapq.heappush(heap, (queue[0], v0))
        if s in blocked or s in matched:
            continue
        if supported[s]:
            matched.add(s)
            nxt = [w for w in g_c.direct_succ[s] if w not in blocked and w not in matched]
            if nxt:
                to_visit[s] = deque(nxt)
                heapq.heappush(heap, (nxt[0], s))
        else:
            blocked.add(s)
            blocked.update(g_c.succ_sets[s])

    forward = frozenset(matched)
    gate_indices = sorted(
        (l for l in range(1, g_c.n + 1) if l not in matched and l not in blocked),
        reverse=True,
    )
    results: set[frozenset[int]] = set()
    wave = [(set(matched), set(blocked), 1)]
    c_succ = g_c.succ_sets
    while wave:
        next_wave = []
        for m_set, b_set, counter in wave:
            if counter > len(gate_indices):
                results.add(frozenset(m_set))
                continue
            s = gate_indices[counter - 1]
            if s in b_set:
                next_wave.append((m_set, b_set, counter + 1))
                continue
            backward_part = m_set - forward
            if supported[s]:
                # Matching a supported gate never disturbs previous matches,
                # so pushing it to the left is redundant (mirrors the exact
                # algorithm's guarded left-block).
                next_wave.append((m_set | {s}, set(b_set), counter + 1))
                b_set.add(s)
                following = any(u in m_set for u in c_succ[s])
                if not g_c.direct_pred[s] or not following:
                    next_wave.append((m_set, b_set, counter + 1))
                else:
                    m2 = m_set - c_succ[s]
                    if r in m2 and backward_part <= m2:
                        next_wave.append((m2, b_set | c_succ[s], counter + 1))
            else:
                b_set.add(s)
                following = any(u in m_set for u in c_succ[s])
                if not g_c.direct_pred[s] or not following:
                    next_wave.append((m_set, b_set, counter + 1))
                else:
                    m2 = m_set - c_succ[s]
                    if r in m2 and backward_part <= m2:
                        next_wave.append((m2, b_set | c_succ[s], counter + 1))
                    next_wave.append((m_set, b_set | g_c.pred_sets[s], counter + 1))
        wave = next_wave
    if not results:
        return []
    best = max(len(x) for x in results)
    return [x for x in results if len(x) == best]
