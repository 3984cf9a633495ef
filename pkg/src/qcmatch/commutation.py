"""Pairwise gate commutation oracle.

Three modes:

* ``rule-table``: per-wire commutation classes only. Proves commutation for
  control/control, control/z-diagonal, z/z and x-target/x-target overlaps;
  everything else on a shared wire counts as non-commuting. Identical gates
  and disjoint supports always commute.
* ``numeric``: builds both unitaries on the union support and tests the
  commutator against a tolerance.
* ``hybrid`` (default): rule table first; a shared-wire pair the table cannot
  prove is re-checked numerically when matrices are available.
"""

from __future__ import annotations

import numpy as np

from .circuit import Circuit
from .errors import CapabilityError
from .gates import COMMUTING_CLASSES, Gate, gates_equal
from .simulator import circuit_unitary

NUMERIC_TOL = 1e-9


def _rule_commutes(a: Gate, b: Gate) -> bool:
    classes_a = a.spec.wire_classes
    classes_b = b.spec.wire_classes
    pos_b = {q: i for i, q in enumerate(b.qubits)}
    for i, q in enumerate(a.qubits):
        j = pos_b.get(q)
        if j is None:
            continue
        if (classes_a[i], classes_b[j]) not in COMMUTING_CLASSES:
            return False
    return True


def _numeric_commutes(a: Gate, b: Gate, tol: float) -> bool:
    support = tuple(sorted(a.support | b.support))
    ua = circuit_unitary(Circuit([a]), support)
    ub = circuit_unitary(Circuit([b]), support)
    return bool(np.linalg.norm(ua @ ub - ub @ ua) <= tol)


class CommutationOracle:
    """Decides whether two gates commute. Safe to share across workers."""

    MODES = ("rule-table", "numeric", "hybrid")

    def __init__(self, mode: str = "hybrid", tol: float = NUMERIC_TOL):
        if mode not in self.MODES:
            raise ValueError(f"unknown commutation mode {mode!r}")
        self.mode = mode
        self.tol = tol
        self._cache: dict[tuple, bool] = {}

    def commutes(self, a: Gate, b: Gate) -> bool:
        spec_a, spec_b = a.spec, b.spec  # raises GateError on unknown names
        if not (a.support & b.support):
            return True
        if gates_equal(a, b):
            return True
        key = self._cache_key(a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.mode == "numeric":
            result = self._numeric(a, b)
        elif self.mode == "rule-table":
            result = _rule_commutes(a, b)
        else:
            result = _rule_commutes(a, b)
            if not result and spec_a.matrix_fn is not None and spec_b.matrix_fn is not None:
                result = self._numeric(a, b)
        self._cache[key] = result
        return result

    def _numeric(self, a: Gate, b: Gate) -> bool:
        if a.spec.matrix_fn is None or b.spec.matrix_fn is None:
            raise CapabilityError(
                f"numeric commutation needs matrices for {a.name!r} and {b.name!r}"
            )
        return _numeric_commutes(a, b, self.tol)

    def _cache_key(self, a: Gate, b: Gate) -> tuple:
        # Relabel the union support to 0..k-1 so the cache is label-independent.
        relabel: dict[int, int] = {}
        for q in a.qubits + b.qubits:
            if q not in relabel:
                relabel[q] = len(relabel)
        return (
            a.name, a.params, tuple(relabel[q] for q in a.qubits),
            b.name, b.params, tuple(relabel[q] for q in b.qubits),
        )


DEFAULT_ORACLE = CommutationOracle()


def commutes(a: Gate, b: Gate, oracle: CommutationOracle | None = None) -> bool:
    """Module-level convenience wrapper around :class:`CommutationOracle`."""
    return (oracle or DEFAULT_ORACLE).commutes(a, b)
