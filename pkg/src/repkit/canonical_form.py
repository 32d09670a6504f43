"""Canonical-form circuits, parameter counting, and gate-decomposition identities.

An n-qubit canonical form is produced by a circuit containing only local
Clifford gates and phase gates, with qubit 1 touched by phase gates only.
For n = 2 the form is the Schmidt form ``Z_12(alpha)|++>`` (one parameter);
for n = 3 it is a fixed circuit with five parameter slots.  Circuits keep
their parameter angles symbolic ("slots") so the same compiled object can be
replayed for any parameter values; only measurement bases depend on them.
"""

import cmath
import json
import math

import numpy as np

from . import qsim
from .qsim import Gate

CLIFFORD_KINDS = ("H", "RZ+", "RZ-", "RX+", "RX-", "CZ", "CNOT")


class CanonicalFormError(Exception):
    pass


def param_count(n):
    """Number of free phase parameters of the n-qubit canonical form.

    1 for n = 2 (Schmidt angle); 2^(n+1) - 3(n+1) + 2^(n-3) for n >= 3,
    which satisfies P_n = 2 P_{n-1} + 3 (n-1) with P_3 = 5.
    """
    if n < 2:
        raise CanonicalFormError("canonical form needs n >= 2")
    if n == 2:
        return 1
    return 2 ** (n + 1) - 3 * (n + 1) + 2 ** (n - 3)


class CFParams:
    """Ordered parameter angles (radians) for the n-qubit canonical form."""

    __slots__ = ("n", "angles")

    def __init__(self, n, angles):
        angles = tuple(float(a) for a in angles)
        if len(angles) != param_count(n):
            raise CanonicalFormError(
                f"n={n} needs {param_count(n)} angles, got {len(angles)}")
        if not all(math.isfinite(a) for a in angles):
            raise CanonicalFormError("angles must be finite")
        self.n = n
        self.angles = angles

    @classmethod
    def random(cls, n, rng):
        return cls(n, rng.uniform(0.0, 2.0 * math.pi, size=param_count(n)))

    def __repr__(self):
        return f"CFParams(n={self.n}, angles={self.angles})"


class SeqGate:
    """One element of a GateSequence.

    Clifford elements carry (kind, qubits).  Phase elements carry a support
    and either a slot index into CFParams (symbolic) or a constant angle;
    ``multiplier`` scales the bound slot value.
    """

    __slots__ = ("kind", "qubits", "slot", "angle", "multiplier")

    def __init__(self, kind, qubits, slot=None, angle=None, multiplier=1.0):
        self.kind = kind
        self.qubits = tuple(qubits)
        self.slot = slot
        self.angle = angle
        self.multiplier = multiplier

    @classmethod
    def clifford(cls, kind, *qubits):
        if kind not in CLIFFORD_KINDS:
            raise CanonicalFormError(f"not a Clifford kind: {kind!r}")
        return cls(kind, qubits)

    @classmethod
    def phase_slot(cls, support, slot, multiplier=1.0):
        return cls("phase", tuple(sorted(support)), slot=int(slot),
                   multiplier=float(multiplier))

    @classmethod
    def phase_const(cls, support, angle):
        return cls("phase", tuple(sorted(support)), angle=float(angle))

    def is_phase(self):
        return self.kind == "phase"

    def bound_angle(self, params):
        if self.angle is not None:
            return self.angle
        if self.slot is None:
            raise CanonicalFormError("phase gate has neither slot nor angle")
        return self.multiplier * params.angles[self.slot]

    def to_dict(self):
        d = {"kind": self.kind, "qubits": list(self.qubits)}
        if self.kind == "phase":
            if self.angle is not None:
                d["angle"] = self.angle
            else:
                d["slot"] = self.slot
                if self.multiplier != 1.0:
                    d["multiplier"] = self.multiplier
        return d

    @classmethod
    def from_dict(cls, d):
        if d["kind"] == "phase":
            if "angle" in d:
                return cls.phase_const(d["qubits"], d["angle"])
            return cls.phase_slot(d["qubits"], d["slot"], d.get("multiplier", 1.0))
        return cls.clifford(d["kind"], *d["qubits"])

    def __repr__(self):
        if self.is_phase():
            tag = f"angle={self.angle:.6g}" if self.angle is not None else f"slot={self.slot}"
            return f"SeqGate(phase, {self.qubits}, {tag})"
        return f"SeqGate({self.kind}, {self.qubits})"


class GateSequence:
    """Ordered list of local Cliffords and phase gates on n wire qubits."""

    __slots__ = ("n", "gates")

    def __init__(self, n, gates):
        self.n = n
        self.gates = list(gates)

    def phase_gates(self):
        return [g for g in self.gates if g.is_phase()]

    def validate(self, phase_only_on_qubit_1=True):
        """Check the sequence invariants; raises on violation.

        With ``phase_only_on_qubit_1`` (the canonical-form rule) any local
        Clifford acting on qubit 1 is rejected.
        """
        for g in self.gates:
            if g.kind not in CLIFFORD_KINDS and g.kind != "phase":
                raise CanonicalFormError(f"disallowed gate kind {g.kind!r}")
            if any(not 1 <= q <= self.n for q in g.qubits):
                raise CanonicalFormError(f"gate {g} off the wire register")
            if g.is_phase() and not g.qubits:
                raise CanonicalFormError("phase gate with empty support")
            if (phase_only_on_qubit_1 and g.kind in CLIFFORD_KINDS
                    and len(g.qubits) == 1 and g.qubits[0] == 1):
                raise CanonicalFormError("local Clifford on qubit 1")
        return self

    def bind(self, params):
        """Concrete qsim gates with all phase slots bound."""
        out = []
        for g in self.gates:
            if g.is_phase():
                out.append(Gate.phase(g.qubits, g.bound_angle(params)))
            else:
                out.append(Gate.clifford(g.kind, *g.qubits))
        return out

    def to_json(self):
        return json.dumps({"n": self.n,
                           "gates": [g.to_dict() for g in self.gates]},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["n"], [SeqGate.from_dict(g) for g in d["gates"]])


def cf_circuit(n, mes=False):
    """The canonical-form circuit for n in {2, 3} with symbolic slots.

    Slots are 0-based indices into CFParams (slot k holds alpha_{k+1}).
    With ``mes=True`` (n = 3 only) the two middle parameters are frozen to
    pi/4, turning their gates into Cliffords and leaving three slots.
    """
    if n == 2:
        if mes:
            raise CanonicalFormError("mes variant is a 3-qubit construction")
        return GateSequence(2, [SeqGate.phase_slot((1, 2), 0)]).validate()
    if n != 3:
        raise CanonicalFormError(f"canonical-form synthesis supports n in {{2, 3}}, got {n}")
    gates = [SeqGate.phase_slot((2, 3), 4)]
    gates += [SeqGate.clifford("H", 2), SeqGate.clifford("H", 3)]
    # qubit 2 carries Z(a4), then RX-, Z(a3), RX+; qubit 3 carries Z(-pi/4), RX-
    if mes:
        gates.append(SeqGate.clifford("RZ+", 2))
    else:
        gates.append(SeqGate.phase_slot((2,), 3))
    gates.append(SeqGate.clifford("RZ-", 3))
    gates += [SeqGate.clifford("RX-", 2), SeqGate.clifford("RX-", 3)]
    if mes:
        gates.append(SeqGate.clifford("RZ+", 2))
    else:
        gates.append(SeqGate.phase_slot((2,), 2))
    gates.append(SeqGate.clifford("RX+", 2))
    gates.append(SeqGate.phase_slot((1, 2), 1))
    gates.append(SeqGate.phase_slot((1, 3), 0))
    return GateSequence(3, gates).validate()


def cf_state(params):
    """The canonical-form state: circuit applied to |+>^n."""
    seq = cf_circuit(params.n)
    return qsim.apply_circuit(qsim.StateVector.plus(params.n), seq.bind(params))


def mes_params(alpha1, alpha2, alpha5):
    """Full CFParams with the two middle angles pinned to pi/4."""
    return CFParams(3, (alpha1, alpha2, math.pi / 4, math.pi / 4, alpha5))


def controlled_phase_decompose(control, support, angle):
    """Split a controlled phase gate into two plain phase gates.

    Returns (Z_S(angle/2), Z_{S+control}(-angle/2)) whose product acts as the
    identity when the control is |0> and as Z_S(angle) when it is |1>.
    """
    support = tuple(sorted(set(support)))
    if control in support:
        raise CanonicalFormError("control qubit must not lie in the support")
    if not support:
        raise CanonicalFormError("empty support")
    return (Gate.phase(support, angle / 2.0),
            Gate.phase(support + (control,), -angle / 2.0))


def euler_decompose(u):
    """Angles (a1, a2, a3) and a global phase with
    u = phase * Z(a1) H Z(a2) H Z(a3), where Z(a) = exp(i a sigma_z).

    Uses H Z(a) H = exp(i a sigma_x), i.e. a ZXZ Euler decomposition.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.abs(u @ u.conj().T - np.eye(2)).max() > 1e-10:
        raise CanonicalFormError("input must be a 2x2 unitary")
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    phase = cmath.sqrt(det)
    su = u / phase
    # su = [[cos(b) e^{i(a+c)}, i sin(b) e^{i(a-c)}], [i sin(b) e^{-i(a-c)}, ...]]
    cb = abs(su[0, 0])
    b = math.atan2(abs(su[0, 1]), cb)
    if cb > 1e-12:
        apc = cmath.phase(su[0, 0])
    else:
        apc = 0.0
    if abs(su[0, 1]) > 1e-12:
        amc = cmath.phase(su[0, 1] / 1j)
    else:
        amc = apc  # b = 0: only a+c matters; pick c = 0
    a1 = 0.5 * (apc + amc)
    a3 = 0.5 * (apc - amc)
    return a1, b, a3, phase


def euler_reconstruct(a1, a2, a3, phase=1.0):
    return phase * (qsim.zrot(a1) @ qsim.H_MATRIX @ qsim.zrot(a2)
                    @ qsim.H_MATRIX @ qsim.zrot(a3))


def nonlocal_two_qubit_decompose(a1, a2, a3, qubits=(1, 2)):
    """Clifford + phase-gate sequence for exp(i sum_k a_k sigma_k x sigma_k).

    Each factor is a Clifford-conjugated two-qubit phase gate; the three
    factors commute.  Returned as a GateSequence on the given qubit pair
    (Cliffords may act on either qubit, so the canonical-form qubit-1 rule
    does not apply here).
    """
    qa, qb = qubits
    gates = []
    if a3 != 0.0:
        gates.append(SeqGate.phase_const((qa, qb), a3))
    if a1 != 0.0:
        gates += [SeqGate.clifford("H", qa), SeqGate.clifford("H", qb),
                  SeqGate.phase_const((qa, qb), a1),
                  SeqGate.clifford("H", qa), SeqGate.clifford("H", qb)]
    if a2 != 0.0:
        gates += [SeqGate.clifford("RX-", qa), SeqGate.clifford("RX-", qb),
                  SeqGate.phase_const((qa, qb), a2),
                  SeqGate.clifford("RX+", qa), SeqGate.clifford("RX+", qb)]
    n = max(qubits)
    return GateSequence(n, gates).validate(phase_only_on_qubit_1=False)
