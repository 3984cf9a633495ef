"""Gate representation and the gate registry.

A gate is a named unitary applied to an ordered tuple of qubit labels.
The registry records, per gate name, the arity, parameter count, which
argument positions are interchangeable (e.g. the two controls of a
Toffoli), how to invert the gate, how to build its matrix, and the
commutation class of each wire position.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import GateError

#: Tolerance used when comparing gate parameters for equality.
PARAM_TOL = 1e-12

# Wire commutation classes. Two gates commute if, on every shared wire,
# the pair of classes is one of the combinations listed in COMMUTING_CLASSES.
CTRL = "ctrl"      # control node (diagonal in the computational basis, conditions on it)
TARGET_X = "tx"    # X-type action (X gate, CNOT/Toffoli target)
DIAG_Z = "dz"      # Z-type diagonal action (Z, S, T, ...)
GENERIC = "gen"    # anything else; never commutes on a shared wire by rule

COMMUTING_CLASSES = {
    (CTRL, CTRL),
    (CTRL, DIAG_Z),
    (DIAG_Z, CTRL),
    (DIAG_Z, DIAG_Z),
    (TARGET_X, TARGET_X),
}


def _u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    return np.array(
        [
            [math.cos(theta / 2), -cmath.exp(1j * lam) * math.sin(theta / 2)],
            [
                cmath.exp(1j * phi) * math.sin(theta / 2),
                cmath.exp(1j * (phi + lam)) * math.cos(theta / 2),
            ],
        ],
        dtype=complex,
    )


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _controlled(mat: np.ndarray, n_controls: int) -> np.ndarray:
    dim = mat.shape[0] << n_controls
    out = np.eye(dim, dtype=complex)
    out[-mat.shape[0]:, -mat.shape[0]:] = mat
    return out


@dataclass(frozen=True)
class GateSpec:
    """Registry entry describing one gate name."""

    name: str
    num_qubits: int
    num_params: int
    wire_classes: tuple[str, ...]
    symmetric_groups: tuple[tuple[int, ...], ...] = ()
    self_inverse: bool = False
    inverse_name: str | None = None
    inverse_params: Callable[[tuple], tuple] | None = None
    matrix_fn: Callable[..., np.ndarray] | None = None


class GateRegistry:
    """Lookup table of known gates. Immutable after construction."""

    def __init__(self, specs: list[GateSpec]):
        self._specs = {s.name: s for s in specs}

    def spec(self, name: str) -> GateSpec:
        try:
            return self._specs[name]
        except KeyError:
            raise GateError(f"unknown gate name: {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._specs

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self._specs))


DEFAULT_REGISTRY = GateRegistry(
    [
        GateSpec("x", 1, 0, (TARGET_X,), self_inverse=True, matrix_fn=lambda: _X),
        GateSpec("y", 1, 0, (GENERIC,), self_inverse=True, matrix_fn=lambda: _Y),
        GateSpec("z", 1, 0, (DIAG_Z,), self_inverse=True, matrix_fn=lambda: _Z),
        GateSpec("h", 1, 0, (GENERIC,), self_inverse=True, matrix_fn=lambda: _H),
        GateSpec("s", 1, 0, (DIAG_Z,), inverse_name="sdg",
                 matrix_fn=lambda: np.diag([1, 1j]).astype(complex)),
        GateSpec("sdg", 1, 0, (DIAG_Z,), inverse_name="s",
                 matrix_fn=lambda: np.diag([1, -1j]).astype(complex)),
        GateSpec("t", 1, 0, (DIAG_Z,), inverse_name="tdg",
                 matrix_fn=lambda: np.diag([1, cmath.exp(1j * math.pi / 4)])),
        GateSpec("tdg", 1, 0, (DIAG_Z,), inverse_name="t",
                 matrix_fn=lambda: np.diag([1, cmath.exp(-1j * math.pi / 4)])),
        GateSpec("cx", 2, 0, (CTRL, TARGET_X), self_inverse=True,
                 matrix_fn=lambda: _controlled(_X, 1)),
        GateSpec("cz", 2, 0, (CTRL, CTRL), symmetric_groups=((0, 1),),
                 self_inverse=True, matrix_fn=lambda: _controlled(_Z, 1)),
        GateSpec("ccx", 3, 0, (CTRL, CTRL, TARGET_X), symmetric_groups=((0, 1),),
                 self_inverse=True, matrix_fn=lambda: _controlled(_X, 2)),
        GateSpec("u3", 1, 3, (GENERIC,),
                 inverse_params=lambda p: (-p[0], -p[2], -p[1]),
                 matrix_fn=_u3_matrix),
    ]
)


@dataclass(frozen=True)
class Gate:
    """One gate application: a name, optional real parameters, qubit labels.

    Qubit labels are arbitrary non-negative integers and must be pairwise
    distinct within one gate. Interchangeable argument positions (the two
    controls of ``ccx``, both wires of ``cz``) are stored sorted ascending,
    so syntactic equality coincides with semantic equality.
    """

    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    registry: GateRegistry = field(default=DEFAULT_REGISTRY, repr=False, compare=False)

    def __post_init__(self):
        spec = self.registry.spec(self.name)
        qubits = tuple(int(q) for q in self.qubits)
        if len(qubits) != spec.num_qubits:
            raise GateError(
                f"{self.name} expects {spec.num_qubits} qubit(s), got {len(qubits)}"
            )
        if len(set(qubits)) != len(qubits):
            raise GateError(f"duplicate qubit label in {self.name}{qubits}")
        if any(q < 0 for q in qubits):
            raise GateError(f"negative qubit label in {self.name}{qubits}")
        if len(self.params) != spec.num_params:
            raise GateError(
                f"{self.name} expects {spec.num_params} parameter(s), got {len(self.params)}"
            )
        for group in spec.symmetric_groups:
            chosen = sorted(qubits[pos] for pos in group)
            merged = list(qubits)
            for pos, label in zip(group, chosen):
                merged[pos] = label
            qubits = tuple(merged)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    @property
    def spec(self) -> GateSpec:
        return self.registry.spec(self.name)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.qubits)

    def relabeled(self, mapping: dict[int, int]) -> "Gate":
        """Gate with every qubit label sent through ``mapping``."""
        return Gate(self.name, tuple(mapping[q] for q in self.qubits), self.params,
                    registry=self.registry)

    def inverse(self) -> "Gate":
        """Gate whose unitary is the adjoint of this one, on the same qubits."""
        spec = self.spec
        if spec.self_inverse:
            return self
        if spec.inverse_name is not None:
            return Gate(spec.inverse_name, self.qubits, self.params, registry=self.registry)
        if spec.inverse_params is not None:
            return Gate(self.name, self.qubits, spec.inverse_params(self.params),
                        registry=self.registry)
        raise GateError(f"no inverse rule for gate {self.name!r}")

    def __str__(self):
        args = f"({','.join(_fmt_param(p) for p in self.params)})" if self.params else ""
        return f"{self.name}{args} {' '.join(str(q) for q in self.qubits)}"


def _fmt_param(p: float) -> str:
    return repr(p)


def params_equal(a: tuple[float, ...], b: tuple[float, ...], tol: float = PARAM_TOL) -> bool:
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def gate_congruent(a: Gate, b: Gate) -> bool:
    """True iff the gates perform the same operation, qubit labels ignored."""
    return a.name == b.name and params_equal(a.params, b.params)


def gates_equal(a: Gate, b: Gate) -> bool:
    """Syntactic equality with parameter tolerance (qubits already canonical)."""
    return a.name == b.name and a.qubits == b.qubits and params_equal(a.params, b.params)


def gate_equal_under_map(t: Gate, c: Gate, qmap: dict[int, int]) -> bool:
    """True iff relabeling ``t`` through ``qmap`` gives exactly ``c``.

    ``qmap`` must cover all of ``t``'s qubits and be injective on them.
    Symmetric argument positions are re-canonicalized after relabeling.
    """
    if t.name != c.name or not params_equal(t.params, c.params):
        return False
    mapped = [qmap[q] for q in t.qubits]
    for group in t.spec.symmetric_groups:
        chosen = sorted(mapped[pos] for pos in group)
        for pos, label in zip(group, chosen):
            mapped[pos] = label
    return tuple(mapped) == c.qubits
