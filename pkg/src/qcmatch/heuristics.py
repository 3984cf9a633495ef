"""Speed/quality trade-off heuristics for the matcher.

Two independent knobs:

* qubit exploration ``F``: walk up to ``F`` gates around the starting gate
  and only enumerate qubit assignments whose image contains the qubits those
  gates act on (remaining qubits are still enumerated exhaustively);
* backward pruning ``(L, S)``: evolve the backward scenario tree in waves and
  every ``L`` generations keep only the ``S`` scenarios that have matched the
  most gates so far.

Both default to off, which reproduces the exact algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dag import CanonicalDag


@dataclass(frozen=True)
class HeuristicConfig:
    """Heuristic knobs; ``None`` means exact behavior for that knob."""

    qubit_exploration_F: int | None = None
    backward_depth_L: int | None = None
    backward_survivors_S: int | None = None

    def __post_init__(self):
        for name in ("qubit_exploration_F", "backward_depth_L", "backward_survivors_S"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value}")
        if (self.backward_depth_L is None) != (self.backward_survivors_S is None):
            raise ValueError("backward pruning needs both L and S")

    @property
    def prunes_backward(self) -> bool:
        return self.backward_depth_L is not None


def heuristic_qubits(
    g_c: CanonicalDag, g_t: CanonicalDag, n_t: int, r: int, i: int, f: int
) -> set[int]:
    """Circuit qubits that the chosen assignment must include.

    Explores forward when at least half of the remaining pattern lies in the
    starting gate's successor cone, otherwise backward. Always contains the
    starting gate's own qubits and never exceeds ``n_t`` labels.
    """
    if len(g_t.succ_sets[i]) >= 0.5 * (g_t.n - i + 1):
        order = list(g_c.successors[r])
    else:
        order = [l for l in range(g_c.n, 0, -1) if l != r and l not in g_c.succ_sets[r]]
    qubits = set(g_c.circuit.gate(r).qubits)
    steps = 0
    for label in order:
        if steps >= f:
            break
        candidate = qubits | set(g_c.circuit.gate(label).qubits)
        if len(candidate) > n_t:
            break
        qubits = candidate
        steps += 1
    return qubits


def prune_scenarios(scenarios: list, s: int) -> list:
    """Keep the ``s`` scenarios with the largest partial match.

    Ties are broken by creation order (earlier scenarios survive); callers
    pass one stack generation at a time.
    """
    if len(scenarios) <= s:
        return list(scenarios)
    ranked = sorted(enumerate(scenarios), key=lambda kv: (-len(kv[1].pairs), kv[0]))
    keep = sorted(idx for idx, _ in ranked[:s])
    return [scenarios[idx] for idx in keep]
