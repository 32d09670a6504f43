"""Compile phase-gate circuits into stabilizer resource states plus adaptive
measurement schedules, and execute those schedules with Pauli-frame tracking.

Each phase gate Z_S(angle) becomes a parity gadget: a fresh ancilla prepared
in |0> receives a CNOT from every wire in S, and is later measured in the
basis B_{+-angle}.  Outcome 1 leaves the byproduct sigma_z on the gate's
support, which is tracked in a Pauli frame rather than corrected on the spot.
Local Cliffords in the input act directly on the wires at their original
circuit position, so a byproduct created at time t must be pushed through
every later circuit element before it joins the frame; pushing a byproduct
through the CNOT fan-in of a later gadget is what makes X/Y letters appear
on not-yet-measured ancillas, and those letters are exactly what flips the
sign of the pending measurement angle (X or Y) or the reported outcome
(Z or Y).

The construction circuit is Clifford-only, so the resource is a stabilizer
state, independent of every phase parameter; parameters enter only through
the measurement bases.
"""

import hashlib
import json

import numpy as np

from . import qsim, graphstab
from .pauli import PauliString
from .qsim import Gate


class CompileError(Exception):
    pass


class MeasurementStep:
    """One scheduled ancilla measurement."""

    __slots__ = ("ancilla", "slot", "angle", "multiplier", "support",
                 "position", "after_index")

    def __init__(self, ancilla, slot, angle, multiplier, support, position,
                 after_index):
        self.ancilla = ancilla
        self.slot = slot
        self.angle = angle
        self.multiplier = multiplier
        self.support = tuple(support)
        self.position = position          # 1-based schedule order
        self.after_index = after_index    # circuit elements after this gadget

    def bound_angle(self, params):
        if self.angle is not None:
            return self.angle
        if params is None:
            raise CompileError("schedule has unbound slots and no parameters")
        return self.multiplier * params.angles[self.slot]

    def to_dict(self):
        return {"ancilla": self.ancilla, "slot": self.slot, "angle": self.angle,
                "multiplier": self.multiplier, "support": list(self.support),
                "position": self.position, "after_index": self.after_index}

    @classmethod
    def from_dict(cls, d):
        return cls(d["ancilla"], d["slot"], d["angle"], d["multiplier"],
                   tuple(d["support"]), d["position"], d["after_index"])


class CompiledProtocol:
    """Construction circuit + ordered adaptive measurement schedule."""

    __slots__ = ("n_wires", "n_total", "elements", "schedule", "output_map",
                 "_resource_cache")

    def __init__(self, n_wires, n_total, elements, schedule, output_map):
        self.n_wires = n_wires
        self.n_total = n_total
        self.elements = list(elements)    # Clifford Gate objects
        self.schedule = list(schedule)
        self.output_map = dict(output_map)
        self._resource_cache = None

    @property
    def ancillas(self):
        return tuple(range(self.n_wires + 1, self.n_total + 1))

    def circuit_json(self):
        """Parameter-independent serialization of the construction circuit."""
        items = [{"kind": g.kind, "qubits": list(g.qubits)} for g in self.elements]
        return json.dumps({"n_wires": self.n_wires, "n_total": self.n_total,
                           "circuit": items}, sort_keys=True)

    def circuit_hash(self):
        return hashlib.sha256(self.circuit_json().encode()).hexdigest()

    def to_json(self):
        return json.dumps({
            "qubits": self.n_total,
            "n_wires": self.n_wires,
            "circuit": [{"kind": g.kind, "qubits": list(g.qubits)}
                        for g in self.elements],
            "schedule": [s.to_dict() for s in self.schedule],
            "output_map": {str(k): v for k, v in self.output_map.items()},
        }, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        elements = [Gate.clifford(e["kind"], *e["qubits"]) for e in d["circuit"]]
        schedule = [MeasurementStep.from_dict(s) for s in d["schedule"]]
        out = {int(k): v for k, v in d["output_map"].items()}
        return cls(d["n_wires"], d["qubits"], elements, schedule, out)


def compile_sequence(seq):
    """Compile a GateSequence on n wires into a CompiledProtocol.

    Every phase element gets one gadget ancilla (in circuit order); Clifford
    elements are emitted directly.  Local Cliffords on wire 1 are rejected,
    which is what keeps the final correction on output 1 inside {I, Z}.
    """
    seq.validate(phase_only_on_qubit_1=True)
    n = seq.n
    phase_gates = seq.phase_gates()
    n_total = n + len(phase_gates)
    if n_total > 23:
        raise CompileError(f"qubit budget exceeded: {n_total} > 23")
    elements = []
    schedule = []
    ancilla = n
    for g in seq.gates:
        if g.is_phase():
            ancilla += 1
            for w in g.qubits:
                elements.append(Gate.clifford("CNOT", w, ancilla))
            schedule.append(MeasurementStep(
                ancilla=ancilla, slot=g.slot, angle=g.angle,
                multiplier=g.multiplier, support=g.qubits,
                position=len(schedule) + 1, after_index=len(elements)))
        else:
            elements.append(Gate.clifford(g.kind, *g.qubits))
    output_map = {w: w for w in range(1, n + 1)}
    return CompiledProtocol(n, n_total, elements, schedule, output_map)


def resource_state(cp, wire_state=None):
    """Statevector of the construction circuit on |+> wires and |0> ancillas.

    ``wire_state`` substitutes an arbitrary input on the wires (used by the
    gadget equivalence check; the standard protocol always starts from |+>).
    """
    if cp.n_total > 23:
        raise CompileError("qubit budget exceeded")
    if wire_state is None and cp._resource_cache is not None:
        return cp._resource_cache.copy()
    wires = wire_state if wire_state is not None else qsim.StateVector.plus(cp.n_wires)
    if wires.n != cp.n_wires:
        raise CompileError("wire state has wrong qubit count")
    state = wires
    for _ in range(cp.n_total - cp.n_wires):
        state = state.tensor(qsim.StateVector.computational(1, 0))
    state = qsim.apply_circuit(state, cp.elements)
    if wire_state is None:
        cp._resource_cache = state.copy()
    return state


def resource_tableau(cp):
    """Stabilizer tableau of the construction circuit (standard |+> input)."""
    plus = set(range(1, cp.n_wires + 1))
    return graphstab.tableau_from_circuit(cp.n_total, cp.elements, plus)


def frame_conjugate(frame, gate):
    """Push a Pauli frame through one Clifford gate (U F U^dagger)."""
    return frame.conjugated(gate)


def effective_measurement(step, frame):
    """Sign and outcome-flip for a pending step under the current frame.

    The measured angle is sign * angle (sign = -1 iff the frame holds X or Y
    on the step's ancilla) and the reported outcome is the physical outcome
    XOR the flip bit (flip = 1 iff the frame holds Z or Y there).
    """
    letter = frame.letter(step.ancilla)
    sign = -1 if letter in (1, 2) else 1
    flip = 1 if letter in (2, 3) else 0
    return sign, flip


def _byproduct(cp, step):
    """sigma_z on the gate's support, conjugated through every circuit element
    after the gadget (i.e. expressed at end-of-circuit time)."""
    frame = PauliString.sigma_z_on(step.support, cp.n_total)
    for el in cp.elements[step.after_index:]:
        frame = frame.conjugated(el)
    return frame


class ScheduleResult:
    """Outcome record of one adaptive-schedule execution."""

    __slots__ = ("outcomes", "frame", "wire_state", "signs")

    def __init__(self, outcomes, frame, wire_state, signs):
        self.outcomes = outcomes
        self.frame = frame
        self.wire_state = wire_state
        self.signs = signs

    def wire_frame(self, cp):
        return self.frame.restricted(sorted(cp.output_map.values()))


def _extract_wires(state, n_wires):
    """Reduced wire state after all ancillas are measured out (must be pure)."""
    n = state.n
    m = state.amps.reshape(1 << n_wires, 1 << (n - n_wires))
    rho = m @ m.conj().T
    vals, vecs = np.linalg.eigh(rho)
    if vals[-1] < 1.0 - 1e-9:
        raise CompileError(f"wire register is not pure (top weight {vals[-1]})")
    return qsim.StateVector(n_wires, vecs[:, -1])


def run_schedule(cp, params=None, rng=None, forced=None, wire_state=None):
    """Measure the ancillas in schedule order with frame-adapted bases.

    ``forced`` optionally fixes the physical outcomes (list, one per step).
    Returns a ScheduleResult whose ``frame`` is the accumulated byproduct on
    all qubits and whose ``wire_state`` is the post-measurement state of the
    wires (uncorrected).  The reported outcomes are the logical ones (physical
    XOR flip).
    """
    state = resource_state(cp, wire_state=wire_state)
    frame = PauliString.identity(cp.n_total)
    outcomes = []
    signs = []
    for i, step in enumerate(cp.schedule):
        sign, flip = effective_measurement(step, frame)
        beta = sign * step.bound_angle(params)
        want = None if forced is None else forced[i]
        phys, state, _ = qsim.measure_basis(state, step.ancilla, beta,
                                            rng=rng, forced=want)
        logical = phys ^ flip
        outcomes.append(logical)
        signs.append(sign)
        if logical:
            frame = frame * _byproduct(cp, step)
    wires = _extract_wires(state, cp.n_wires)
    result = ScheduleResult(outcomes, frame, wires, signs)
    if frame.letter(cp.output_map[1]) not in (0, 3):
        raise CompileError("frame letter on output qubit 1 left {I, Z}")
    return result


def apply_wire_correction(state, frame, cp):
    """Undo the byproduct on the wire register (Paulis are self-inverse)."""
    out = state
    for w in range(1, cp.n_wires + 1):
        out = qsim.apply_pauli(out, w, frame.letter(cp.output_map[w]))
    return out


def gadget_check(gate, input_state, rng, tol=1e-9):
    """Single-gadget equivalence test on an arbitrary wire input.

    Compiles the one-gate sequence, runs it on ``input_state`` (prepared on
    the wires instead of |+>), undoes the reported byproduct, and compares
    with the direct gate application.
    """
    from .canonical_form import GateSequence, SeqGate

    n = input_state.n
    seq = GateSequence(n, [SeqGate.phase_const(gate.qubits, gate.angle)])
    cp = compile_sequence(seq)
    res = run_schedule(cp, rng=rng, wire_state=input_state)
    corrected = apply_wire_correction(res.wire_state, res.frame, cp)
    target = qsim.apply_gate(input_state, gate)
    return qsim.fidelity(corrected, target) >= 1.0 - tol


def teleport_phase_gadget(input_state, qubit, angle, rng, forced_bell=None,
                          forced_basis=None):
    """Oracle variant of the single-qubit phase gadget for unknown inputs:
    a 3-qubit GHZ auxiliary, a Bell measurement attaching the input, then a
    basis measurement with the sign chosen from the Bell outcome.

    Returns (post_state, byproduct PauliString on the original register);
    after undoing the byproduct the register holds Z(angle) applied to the
    input qubit (the gate's output lives back on ``qubit``).
    """
    n = input_state.n
    work = input_state.tensor(qsim.StateVector.ghz(3))
    g1, g2, g3 = n + 1, n + 2, n + 3
    bell, work = qsim.bell_measure(work, (qubit, g3), rng=rng, forced=forced_bell)
    beta = angle if bell in (0, 3) else -angle
    k, work, _ = qsim.measure_basis(work, g2, beta, rng=rng, forced=forced_basis)
    # the gate output sits on the first GHZ qubit; swap it back onto `qubit`
    perm = list(range(1, n + 4))
    perm[qubit - 1], perm[g1 - 1] = perm[g1 - 1], perm[qubit - 1]
    axes = [p - 1 for p in perm]
    amps = work.amps.reshape([2] * (n + 3)).transpose(axes).reshape(-1)
    work = qsim.StateVector(n + 3, amps)
    m = work.amps.reshape(1 << n, 8)
    rho = m @ m.conj().T
    vals, vecs = np.linalg.eigh(rho)
    if vals[-1] < 1.0 - 1e-9:
        raise CompileError("teleport gadget left the register mixed")
    post = qsim.StateVector(n, vecs[:, -1])
    byproduct = PauliString.from_letters({qubit: bell}, n)
    if k:
        byproduct = PauliString.sigma_z_on((qubit,), n) * byproduct
    return post, byproduct
