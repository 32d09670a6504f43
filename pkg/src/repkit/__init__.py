"""repkit: remote entanglement preparation toolkit.

Builds canonical-form entangled states, compiles phase-gate circuits into
stabilizer resource states with adaptive local-measurement schedules, runs
the preparation protocol end to end with resource accounting, and evaluates
graph-state purification noise thresholds.

Qubit convention used everywhere: qubits are numbered 1..n and qubit 1 is
the most significant bit of a computational basis index.
"""

__version__ = "0.1.0"

from . import qsim, pauli, canonical_form, graphstab, compiler, rep_protocol
from . import purification, lme_classical

__all__ = [
    "qsim",
    "pauli",
    "canonical_form",
    "graphstab",
    "compiler",
    "rep_protocol",
    "purification",
    "lme_classical",
]
