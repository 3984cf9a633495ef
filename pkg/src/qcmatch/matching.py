"""Exact pattern matching on commutation DAGs.

Given a circuit and a (smaller) pattern, find every maximal way of matching a
connected part of the pattern to a connected part of the circuit under a
qubit relabeling, taking pairwise gate commutation into account. The search
fixes a starting pair of congruent gates plus a qubit assignment, greedily
matches the successor cone of the start (forward pass), then explores a tree
of scenarios to extend the match against the remaining gates (backward pass),
trading backward gains against forward gains.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field

from .circuit import Circuit
from .commutation import DEFAULT_ORACLE, CommutationOracle
from .dag import CanonicalDag, create_canonical_form, is_connected_part
from .errors import InfeasibleError
from .gates import Gate, gate_congruent, gate_equal_under_map, gates_equal, params_equal
from .heuristics import HeuristicConfig, heuristic_qubits, prune_scenarios


class Match:
    """A set of (pattern index, circuit index) pairs plus the qubit map.

    ``start`` records the (pattern, circuit) starting pair of the search
    attempt that produced the match.
    """

    __slots__ = ("pairs", "qubit_map", "start")

    def __init__(self, pairs, qubit_map: dict[int, int], start: tuple[int, int]):
        self.pairs: frozenset[tuple[int, int]] = frozenset(pairs)
        self.qubit_map = dict(qubit_map)
        self.start = start

    @property
    def size(self) -> int:
        return len(self.pairs)

    def pattern_indices(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.pairs)

    def circuit_indices(self) -> frozenset[int]:
        return frozenset(j for _, j in self.pairs)

    def sort_key(self):
        return (-len(self.pairs), self.start, tuple(sorted(self.pairs)))

    def __eq__(self, other):
        return (
            isinstance(other, Match)
            and self.pairs == other.pairs
            and self.qubit_map == other.qubit_map
        )

    def __repr__(self):
        return f"Match(size={len(self.pairs)}, pairs={sorted(self.pairs)}, map={self.qubit_map})"

    def to_dict(self) -> dict:
        return {
            "pairs": [list(p) for p in sorted(self.pairs)],
            "qubit_map": {str(k): v for k, v in sorted(self.qubit_map.items())},
            "size": len(self.pairs),
        }


@dataclass
class MatchingScenario:
    """One node of the backward search tree.

    Holds the mutable annotation overlays for both DAGs (matched/blocked),
    the partial match, and the position in the backward gate list. The DAG
    structure itself is shared and immutable; copies duplicate only these
    overlays.
    """

    circuit_matched: dict[int, int]
    circuit_blocked: set[int]
    pattern_matched: dict[int, int]
    pattern_blocked: set[int]
    pairs: set[tuple[int, int]]
    counter: int

    def copy(self) -> "MatchingScenario":
        return MatchingScenario(
            dict(self.circuit_matched), set(self.circuit_blocked),
            dict(self.pattern_matched), set(self.pattern_blocked),
            set(self.pairs), self.counter,
        )


@dataclass(frozen=True)
class MatchOptions:
    """Knobs for :func:`pattern_match`."""

    dedup: bool = True
    expand_equivalents: bool = False
    heuristic: HeuristicConfig | None = None
    backward_prune_check: bool = True
    oracle: CommutationOracle = field(default_factory=lambda: DEFAULT_ORACLE)


def _gate_key(g: Gate):
    return (g.name, g.qubits, g.params)


def _relabeled_key(g: Gate, qmap: dict[int, int]):
    mapped = [qmap[q] for q in g.qubits]
    for group in g.spec.symmetric_groups:
        chosen = sorted(mapped[pos] for pos in group)
        for pos, label in zip(group, chosen):
            mapped[pos] = label
    return (g.name, tuple(mapped), g.params)


def _keys_match(a, b) -> bool:
    return a[0] == b[0] and a[1] == b[1] and (not a[2] or params_equal(a[2], b[2]))


def find_forward_candidates(
    g_t: CanonicalDag, last_matched_vertex: int, matched: set[int] | frozenset[int]
) -> list[int]:
    """Pattern indices that may extend the match from ``last_matched_vertex``.

    Direct successors of the vertex, minus already matched indices, minus
    indices whose matching would leave an unmatched gate strictly inside the
    matched region (which could never be matched later without disconnecting
    the match).
    """
    block: set[int] = set()
    for l in matched:
        if l == last_matched_vertex:
            continue
        for v in g_t.direct_succ[l]:
            if v not in matched:
                block.update(g_t.succ_sets[v])
    return [
        x for x in g_t.direct_succ[last_matched_vertex]
        if x not in matched and x not in block
    ]


def _forward_match(g_c, g_t, trel, ckeys, r, i):
    """Greedy maximal match of the start's forward cone (circuit side).

    Returns ``(pairs, circuit_matched, circuit_blocked)``. Successors of the
    starting circuit gate are visited in ascending label order; a gate that
    matches no candidate is blocked together with all its successors.
    """
    pairs = {(i, r)}
    c_matched = {r: i}
    c_blocked: set[int] = set()
    t_matched = {i}
    to_visit: dict[int, deque[int]] = {}
    heap: list[tuple[int, int]] = []
    if g_c.direct_succ[r]:
        to_visit[r] = deque(g_c.direct_succ[r])
        heap.append((to_visit[r][0], r))
    while heap:
        _, v0 = heapq.heappop(heap)
        queue = to_visit[v0]
        s = queue.popleft()
        if queue:
            heapq.heappush(heap, (queue[0], v0))
        if s in c_blocked or s in c_matched:
            continue
        key_s = ckeys[s]
        j = None
        for cand in find_forward_candidates(g_t, c_matched[v0], t_matched):
            if _keys_match(trel[cand], key_s):
                j = cand
                break
        if j is not None:
            pairs.add((j, s))
            c_matched[s] = j
            t_matched.add(j)
            nxt = [w for w in g_c.direct_succ[s] if w not in c_blocked and w not in c_matched]
            if nxt:
                to_visit[s] = deque(nxt)
                heapq.heappush(heap, (nxt[0], s))
        else:
            c_blocked.add(s)
            c_blocked.update(g_c.succ_sets[s])
    return pairs, c_matched, c_blocked


def find_backward_candidates(
    g_t: CanonicalDag, i: int, blocked: set[int], matched: dict[int, int]
) -> list[int]:
    """Unmatched, unblocked pattern indices above ``i`` outside its successor cone."""
    return [
        l for l in range(i + 1, g_t.n + 1)
        if l not in g_t.succ_sets[i] and l not in blocked and l not in matched
    ]


def _backward_match(g_c, g_t, trel, ckeys, r, i, forward, options):
    """Scenario-tree search extending the forward match backward.

    Processes the unmatched, unblocked circuit gates in descending index
    order. For each gate the scenario branches between matching it against a
    backward candidate, pushing it to the right of the match (blocking its
    successors, possibly unmatching forward gains), or pushing it to the
    left (blocking its predecessors). Only matches of maximal size among all
    completed scenarios are returned, as a set of frozen pair sets.
    """
    f_pairs, f_matched, f_blocked = forward
    forward_set = frozenset(f_pairs)
    forward_len = len(f_pairs)
    gate_indices = sorted(
        (l for l in range(1, g_c.n + 1) if l not in f_blocked and l not in f_matched),
        reverse=True,
    )
    num_left = (g_t.n - (i - 1)) - forward_len
    pool = [l for l in range(i + 1, g_t.n + 1) if l not in g_t.succ_sets[i]]
    heur = options.heuristic
    prune_every = heur.backward_depth_L if heur and heur.prunes_backward else None
    check_potential = options.backward_prune_check

    results: set[frozenset] = set()
    initial = MatchingScenario(
        dict(f_matched), set(f_blocked),
        {j: s for (j, s) in f_pairs}, set(g_t.succ_sets[i]),
        set(f_pairs), 1,
    )
    wave = [initial]
    generation = 0
    c_succ = g_c.succ_sets
    t_succ = g_t.succ_sets

    def pushable(scenario: MatchingScenario) -> bool:
        if not check_potential:
            return True
        capacity = sum(
            1 for l in pool
            if l not in scenario.pattern_blocked and l not in scenario.pattern_matched
        )
        return len(scenario.pairs) + capacity >= forward_len

    while wave:
        next_wave: list[MatchingScenario] = []
        push = next_wave.append
        for sc in wave:
            pairs = sc.pairs
            m_backward = pairs - forward_set
            if sc.counter > len(gate_indices) or len(m_backward) == num_left:
                results.add(frozenset(pairs))
                continue
            s = gate_indices[sc.counter - 1]
            if s in sc.circuit_blocked:
                sc.counter += 1
                push(sc)
                continue
            candidates = [
                l for l in pool
                if l not in sc.pattern_blocked and l not in sc.pattern_matched
                and _keys_match(trel[l], ckeys[s])
            ]
            if candidates:
                # Drop candidates equivalent to an earlier one (commuting pair
                # of equal gates); keep the smallest index of each cluster.
                kept: list[int] = []
                for k in candidates:
                    if all(k in t_succ[m] for m in kept):
                        kept.append(k)
                every_option_blocked = True
                for j in kept:
                    branch = sc.copy()
                    newly = [p for p in t_succ[j] if p not in branch.pattern_matched]
                    branch.pattern_blocked.update(newly)
                    unmatch: set[int] = set()
                    for b in newly:
                        for q in t_succ[b]:
                            branch.pattern_blocked.add(q)
                            if q in branch.pattern_matched:
                                unmatch.add(q)
                    for q in unmatch:
                        c_idx = branch.pattern_matched.pop(q)
                        del branch.circuit_matched[c_idx]
                        branch.pairs.discard((q, c_idx))
                    if (i, r) in branch.pairs and m_backward <= branch.pairs:
                        if not unmatch:
                            every_option_blocked = False
                        branch.pairs.add((j, s))
                        branch.circuit_matched[s] = j
                        branch.pattern_matched[j] = s
                        branch.counter += 1
                        if pushable(branch):
                            push(branch)
                sc.circuit_blocked.add(s)
                following = any(u in c_succ[s] for u in sc.circuit_matched)
                if not g_c.direct_pred[s] or not following:
                    sc.counter += 1
                    push(sc)
                else:
                    branch = sc.copy()
                    for u in c_succ[s]:
                        branch.circuit_blocked.add(u)
                        j2 = branch.circuit_matched.pop(u, None)
                        if j2 is not None:
                            branch.pattern_matched.pop(j2, None)
                            branch.pairs.discard((j2, u))
                    if (i, r) in branch.pairs and m_backward <= branch.pairs:
                        branch.counter += 1
                        if pushable(branch):
                            push(branch)
                    if every_option_blocked:
                        sc.circuit_blocked.update(g_c.pred_sets[s])
                        sc.counter += 1
                        push(sc)
            else:
                sc.circuit_blocked.add(s)
                following = any(u in c_succ[s] for u in sc.circuit_matched)
                if not g_c.direct_pred[s] or not following:
                    sc.counter += 1
                    push(sc)
                else:
                    branch = sc.copy()
                    for u in c_succ[s]:
                        branch.circuit_blocked.add(u)
                        j2 = branch.circuit_matched.pop(u, None)
                        if j2 is not None:
                            branch.pattern_matched.pop(j2, None)
                            branch.pairs.discard((j2, u))
                    if (i, r) in branch.pairs and m_backward <= branch.pairs:
                        branch.counter += 1
                        if pushable(branch):
                            push(branch)
                    sc.circuit_blocked.update(g_c.pred_sets[s])
                    sc.counter += 1
                    push(sc)
        generation += 1
        if prune_every is not None and generation % prune_every == 0:
            next_wave = prune_scenarios(next_wave, heur.backward_survivors_S)
        wave = next_wave

    if not results:
        return []
    best = max(len(p) for p in results)
    return [p for p in results if len(p) == best]


def _start_qubit_maps(t_gate: Gate, c_gate: Gate) -> list[dict[int, int]]:
    """All injective maps of the starting pattern gate's qubits onto the
    starting circuit gate's qubits that realize the gate exactly."""
    groups = list(t_gate.spec.symmetric_groups)
    grouped = set(itertools.chain.from_iterable(groups))
    groups.extend((pos,) for pos in range(len(t_gate.qubits)) if pos not in grouped)
    maps = []
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        qmap = {}
        for orig, new in zip(itertools.chain.from_iterable(groups),
                             itertools.chain.from_iterable(perms)):
            qmap[t_gate.qubits[orig]] = c_gate.qubits[new]
        if gate_equal_under_map(t_gate, c_gate, qmap) and qmap not in maps:
            maps.append(qmap)
    return maps


def _assignments(pattern_qubits, base, circuit_qubits, required):
    """Extend a starting map over the remaining pattern qubits.

    Yields every injective completion; when ``required`` is given (qubit
    heuristic), only completions whose image covers it are produced.
    """
    remaining_t = [q for q in pattern_qubits if q not in base]
    taken = set(base.values())
    available = [q for q in circuit_qubits if q not in taken]
    must_cover = (required - taken) if required is not None else set()
    if not remaining_t:
        if not must_cover:
            yield dict(base)
        return
    for image in itertools.permutations(available, len(remaining_t)):
        if must_cover and not must_cover.issubset(image):
            continue
        qmap = dict(base)
        qmap.update(zip(remaining_t, image))
        yield qmap


def forward_match(c, g_c, t, g_t, qubit_map, r, i):
    """Run the greedy forward pass for one fixed start; returns a Match.

    Thin wrapper over the internal engine, mainly for tests and debugging;
    :func:`pattern_match` drives the engine directly.
    """
    trel = {j: _relabeled_key(t.gate(j), qubit_map) for j in range(1, len(t) + 1)}
    ckeys = [None] + [_gate_key(g) for g in c.gates]
    pairs, _, _ = _forward_match(g_c, g_t, trel, ckeys, r, i)
    return Match(pairs, qubit_map, (i, r))


def backward_match(c, g_c, t, g_t, qubit_map, r, i, m_forward, options=None):
    """Run the backward scenario search for one fixed start; returns Matches."""
    options = options or MatchOptions()
    trel = {j: _relabeled_key(t.gate(j), qubit_map) for j in range(1, len(t) + 1)}
    ckeys = [None] + [_gate_key(g) for g in c.gates]
    fwd = _forward_match(g_c, g_t, trel, ckeys, r, i)
    assert frozenset(fwd[0]) == m_forward.pairs, "forward match does not fit this start"
    result = _backward_match(g_c, g_t, trel, ckeys, r, i, fwd, options)
    return [Match(p, qubit_map, (i, r)) for p in sorted(result, key=sorted)]


def pattern_match(c: Circuit, t: Circuit, opts: MatchOptions | None = None) -> list[Match]:
    """Find all maximal matches of pattern ``t`` in circuit ``c``.

    Output is sorted by (size descending, starting pair, pair set) and is
    deterministic for identical inputs. With ``opts.dedup`` (default) the
    output is restricted to matches not dominated by a strictly larger match
    sharing a pair; with ``opts.expand_equivalents`` each found match is
    closed under reassignments among equal gates before filtering.

    Raises:
        InfeasibleError: empty inputs, or the pattern has more qubits than
            the circuit.
    """
    opts = opts or MatchOptions()
    if len(c) == 0 or len(t) == 0:
        raise InfeasibleError("pattern matching needs non-empty circuits")
    if t.num_qubits > c.num_qubits:
        raise InfeasibleError(
            f"pattern has {t.num_qubits} qubits but circuit only {c.num_qubits}"
        )
    g_c = create_canonical_form(c, opts.oracle)
    g_t = create_canonical_form(t, opts.oracle)
    matches = _run_attempts(c, t, g_c, g_t, opts)
    if opts.expand_equivalents:
        matches = expand_equivalent_matches(c, t, matches, g_c, g_t)
    if opts.dedup:
        matches = filter_maximal(matches)
    return sorted(matches, key=Match.sort_key)


def _run_attempts(c, t, g_c, g_t, opts):
    ckeys = [None] + [_gate_key(g) for g in c.gates]
    circuit_qubits = sorted(c.qubit_set)
    pattern_qubits = sorted(t.qubit_set)
    heur = opts.heuristic
    f_explore = heur.qubit_exploration_F if heur else None
    found: dict[frozenset, Match] = {}
    for i in range(1, len(t) + 1):
        t_i = t.gate(i)
        starts = [r for r in range(1, len(c) + 1) if gate_congruent(c.gate(r), t_i)]
        for r in starts:
            required = None
            if f_explore is not None:
                required = heuristic_qubits(g_c, g_t, t.num_qubits, r, i, f_explore)
            for base in _start_qubit_maps(t_i, c.gate(r)):
                for qmap in _assignments(pattern_qubits, base, circuit_qubits, required):
                    trel = {j: _relabeled_key(t.gate(j), qmap) for j in range(i, len(t) + 1)}
                    fwd = _forward_match(g_c, g_t, trel, ckeys, r, i)
                    for pairs in _backward_match(g_c, g_t, trel, ckeys, r, i, fwd, opts):
                        if pairs not in found:
                            found[pairs] = Match(pairs, qmap, (i, r))
    return list(found.values())


def filter_maximal(matches: list[Match]) -> list[Match]:
    """Drop exact duplicates and matches dominated by a strictly larger
    match sharing at least one pair."""
    unique: dict[frozenset, Match] = {}
    for m in matches:
        unique.setdefault(m.pairs, m)
    best_at: dict[tuple[int, int], int] = {}
    for pairs in unique:
        size = len(pairs)
        for p in pairs:
            if best_at.get(p, 0) < size:
                best_at[p] = size
    return [
        m for pairs, m in unique.items()
        if all(best_at[p] <= len(pairs) for p in pairs)
    ]


def validate_match(c: Circuit, t: Circuit, m: Match,
                   g_c: CanonicalDag | None = None,
                   g_t: CanonicalDag | None = None,
                   oracle: CommutationOracle | None = None) -> bool:
    """Independent validity check of a match against the definition.

    Verifies the pair bijection, gate equality under the qubit map,
    connectedness of both matched parts, and that the pattern's ordering
    constraints can be realized simultaneously with the circuit's.
    """
    oracle = oracle or DEFAULT_ORACLE
    if g_c is None:
        g_c = create_canonical_form(c, oracle)
    if g_t is None:
        g_t = create_canonical_form(t, oracle)
    t_part = [p for p, _ in m.pairs]
    c_part = [q for _, q in m.pairs]
    if len(set(t_part)) != len(m.pairs) or len(set(c_part)) != len(m.pairs):
        return False
    for p, q in m.pairs:
        if not gate_equal_under_map(t.gate(p), c.gate(q), m.qubit_map):
            return False
    if not is_connected_part(g_t, frozenset(t_part)):
        return False
    if not is_connected_part(g_c, frozenset(c_part)):
        return False
    # A common gate order must exist: circuit rigidity plus mapped pattern
    # rigidity must stay acyclic.
    order: dict[int, set[int]] = {q: set() for q in c_part}
    for (p1, q1), (p2, q2) in itertools.permutations(m.pairs, 2):
        if q2 in g_c.succ_sets[q1] or p2 in g_t.succ_sets[p1]:
            order[q1].add(q2)
    seen: dict[int, int] = {}

    def dfs(u: int) -> bool:
        seen[u] = 1
        for v in order[u]:
            state = seen.get(v)
            if state == 1 or (state is None and not dfs(v)):
                return False
        seen[u] = 2
        return True

    return all(seen.get(u) == 2 or dfs(u) for u in order)


def expand_equivalent_matches(c, t, matches, g_c=None, g_t=None) -> list[Match]:
    """Close a match list under single reassignments among equal gates.

    The matcher prunes matches that only differ by exchanging the roles of
    equal, mutually commuting gates; this recovers them. Each generated pair
    set is validated independently before being kept.
    """
    if g_c is None:
        g_c = create_canonical_form(c)
    if g_t is None:
        g_t = create_canonical_form(t)
    t_equal: dict[tuple, list[int]] = {}
    for idx in range(1, len(t) + 1):
        t_equal.setdefault(_gate_key(t.gate(idx)), []).append(idx)
    c_equal: dict[tuple, list[int]] = {}
    for idx in range(1, len(c) + 1):
        c_equal.setdefault(_gate_key(c.gate(idx)), []).append(idx)

    out: dict[frozenset, Match] = {m.pairs: m for m in matches}
    queue = deque(matches)
    while queue:
        m = queue.popleft()
        t_used = m.pattern_indices()
        c_used = m.circuit_indices()
        variants = []
        for (p, q) in m.pairs:
            rest = m.pairs - {(p, q)}
            for p2 in t_equal[_gate_key(t.gate(p))]:
                if p2 not in t_used:
                    variants.append(rest | {(p2, q)})
            for q2 in c_equal[_gate_key(c.gate(q))]:
                if q2 not in c_used:
                    variants.append(rest | {(p, q2)})
        for (p1, q1), (p2, q2) in itertools.combinations(m.pairs, 2):
            if _gate_key(t.gate(p1)) == _gate_key(t.gate(p2)):
                variants.append((m.pairs - {(p1, q1), (p2, q2)}) | {(p1, q2), (p2, q1)})
        for pairs in variants:
            frozen = frozenset(pairs)
            if frozen in out:
                continue
            candidate = Match(frozen, m.qubit_map, m.start)
            if candidate.start not in frozen:
                candidate.start = min(frozen)
            if validate_match(c, t, candidate, g_c, g_t):
                out[frozen] = candidate
                queue.append(candidate)
    return list(out.values())
