"""Built-in identity template library.

Every template is machine-verified to implement the identity (up to global
phase) when constructed; see :class:`~qcmatch.optimizer.Template`. External
libraries can be loaded from a directory of circuit files carrying a
``# template`` header line.
"""

from __future__ import annotations

import os

from .circuit import Circuit
from .errors import ParseError
from .gates import Gate
from .optimizer import Template


def _c(*specs) -> Circuit:
    return Circuit(Gate(name, qubits) for name, *qubits in specs)


def builtin_templates() -> list[Template]:
    """The shipped identity templates, self-verified at construction."""
    return [
        Template("xx", _c(("x", 0), ("x", 0))),
        Template("hh", _c(("h", 0), ("h", 0))),
        Template("zz", _c(("z", 0), ("z", 0))),
        Template("cxcx", _c(("cx", 0, 1), ("cx", 0, 1))),
        Template("czcz", _c(("cz", 0, 1), ("cz", 0, 1))),
        Template("ccxccx", _c(("ccx", 0, 1, 2), ("ccx", 0, 1, 2))),
        # Five-CNOT chain identity.
        Template("cx5", _c(("cx", 1, 2), ("cx", 0, 1), ("cx", 1, 2), ("cx", 0, 1),
                           ("cx", 0, 2))),
        # Pair cancellations across a commuting spectator gate.
        Template("x_cx_comm", _c(("x", 1), ("cx", 0, 1), ("x", 1), ("cx", 0, 1))),
        Template("x_ccx_comm", _c(("x", 2), ("ccx", 0, 1, 2), ("x", 2), ("ccx", 0, 1, 2))),
        Template("cx_shared_target", _c(("cx", 0, 2), ("cx", 1, 2), ("cx", 0, 2),
                                        ("cx", 1, 2))),
        Template("cx_shared_control", _c(("cx", 0, 1), ("cx", 0, 2), ("cx", 0, 1),
                                         ("cx", 0, 2))),
        Template("ccx_cx_target", _c(("ccx", 0, 1, 2), ("cx", 0, 2), ("ccx", 0, 1, 2),
                                     ("cx", 0, 2))),
        # Single-qubit conjugation identities.
        Template("hzh_x", _c(("h", 0), ("z", 0), ("h", 0), ("x", 0))),
        Template("zxzx", _c(("z", 0), ("x", 0), ("z", 0), ("x", 0))),
    ]


def load_template_dir(path: str) -> list[Template]:
    """Load templates from every ``*.qc`` file in ``path``.

    Each file must start with a ``# template`` comment line and parses as a
    regular circuit file; the identity property is verified on load.
    """
    from .circuit_io import parse_circuit

    templates = []
    for entry in sorted(os.listdir(path)):
        if not entry.endswith(".qc"):
            continue
        full = os.path.join(path, entry)
        with open(full, encoding="utf-8") as fh:
            text = fh.read()
        first = text.splitlines()[0].strip() if text.splitlines() else ""
        if first != "# template":
            raise ParseError(f"{entry}: missing '# template' header", line=1)
        templates.append(Template(os.path.splitext(entry)[0], parse_circuit(text)))
    return templates
