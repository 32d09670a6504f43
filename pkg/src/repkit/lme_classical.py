"""Locally maximally entanglable (LME) states and the classical channel
they carry.

An LME state is a product of phase gates applied to |+>^n, i.e. a uniform-
modulus amplitude pattern exp(i beta_x)/2^(n/2).  When every relative phase
beta_x lies in {0, pi} (a "pi-LME" state) the state admits a generalized
stabilizer S_k = U sigma_x^(k) U^dagger whose eigenvalue on sigma_z^i U|+..+>
is (-1)^(i_k), and single-copy local measurements (sigma_x on a qubit,
sigma_z on the qubits it interacts with) recover individual bits i_k.

Remote preparation of an LME state produces sigma_z^i U|+..+> for a frame
bitstring i that is uniformly random and known only to the sender, which is
what turns the protocol into a classical channel: the sender XOR-masks the
frame bits of an independent set with a payload and announces the mask; the
receiver extracts the frame bits locally and unmasks.
"""

import itertools
import json
import math

import numpy as np

from . import qsim, compiler
from .canonical_form import GateSequence, SeqGate
from .qsim import Gate


class LmeError(Exception):
    pass


class LmesSpec:
    """A list of (support, angle) phase gates on n qubits."""

    __slots__ = ("n", "gates")

    def __init__(self, n, gates):
        self.n = n
        norm = []
        for support, angle in gates:
            support = tuple(sorted(set(support)))
            if not support or any(not 1 <= q <= n for q in support):
                raise LmeError(f"bad support {support}")
            if not math.isfinite(angle):
                raise LmeError("angle must be finite")
            norm.append((support, float(angle)))
        self.gates = norm

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["n"], [(tuple(g["support"]), g["angle"]) for g in d["gates"]])

    def to_json(self):
        return json.dumps({"n": self.n,
                           "gates": [{"support": list(s), "angle": a}
                                     for s, a in self.gates]}, sort_keys=True)

    def phase_profile(self):
        """beta_x over the 2^n basis labels, relative to beta_0."""
        n = self.n
        idx = np.arange(1 << n)
        beta = np.zeros(1 << n)
        for support, angle in self.gates:
            par = np.zeros(1 << n, dtype=np.int64)
            for q in support:
                par ^= (idx >> (n - q)) & 1
            beta += np.where(par == 0, angle, -angle)
        return beta - beta[0]

    def is_pi_lmes(self, tol=1e-9):
        """All relative phases in {0, pi} mod 2pi."""
        beta = np.mod(self.phase_profile(), 2.0 * math.pi)
        near = np.minimum.reduce([np.abs(beta), np.abs(beta - math.pi),
                                  np.abs(beta - 2.0 * math.pi)])
        return bool((near < tol).all())

    def interaction_graph(self):
        """Adjacency from qubits co-appearing in a gate support."""
        from .graphstab import Graph
        adj = np.zeros((self.n, self.n), dtype=np.uint8)
        for support, _ in self.gates:
            for a, b in itertools.combinations(support, 2):
                adj[a - 1, b - 1] = adj[b - 1, a - 1] = 1
        return Graph(self.n, adj)

    def neighbors(self, j):
        return self.interaction_graph().neighbors(j)

    def gate_sequence(self):
        """GateSequence routing every listed gate through a gadget (constant
        angles included: the point of the compiled form is the random frame,
        so Clifford-angle gates are gadgetized too)."""
        return GateSequence(self.n, [SeqGate.phase_const(s, a)
                                     for s, a in self.gates])


def pi_phase_spec(n=3):
    """Phase-gate realization of the n=3 pi-phase LME state, i.e. the
    diagonal unitary 1 - 2|111><111| expanded over parity supports."""
    if n != 3:
        raise LmeError("only the 3-qubit pi-phase spec is provided")
    a = math.pi / 8.0
    gates = [((1,), -a), ((2,), -a), ((3,), -a),
             ((1, 2), a), ((1, 3), a), ((2, 3), a),
             ((1, 2, 3), -a)]
    return LmesSpec(3, gates)


def graph_state_spec(graph):
    """Phase-gate realization of a graph state (per edge (a, b):
    Z_a(-pi/4) Z_b(-pi/4) Z_ab(pi/4) up to global phase), with the per-vertex
    contributions merged."""
    a = math.pi / 4.0
    vertex_angle = {}
    gates = []
    for (u, v) in graph.edges():
        gates.append(((u, v), a))
        vertex_angle[u] = vertex_angle.get(u, 0.0) - a
        vertex_angle[v] = vertex_angle.get(v, 0.0) - a
    for v, angle in sorted(vertex_angle.items()):
        if angle % (2.0 * math.pi) != 0.0:
            gates.append(((v,), angle))
    return LmesSpec(graph.n, gates)


def build_lmes(spec):
    """U|+>^n for the spec's phase-gate product."""
    state = qsim.StateVector.plus(spec.n)
    for support, angle in spec.gates:
        state = qsim.apply_gate(state, Gate.phase(support, angle))
    return state


def generalized_stabilizer(spec, k):
    """S_k = U sigma_x^(k) U^dagger as a dense operator (small n only)."""
    if not 1 <= k <= spec.n:
        raise LmeError(f"qubit {k} out of range")
    if spec.n > 5:
        raise LmeError("dense stabilizer construction is limited to n <= 5")
    n = spec.n
    u = np.ones(1 << n, dtype=complex)  # diagonal of U
    idx = np.arange(1 << n)
    for support, angle in spec.gates:
        par = np.zeros(1 << n, dtype=np.int64)
        for q in support:
            par ^= (idx >> (n - q)) & 1
        u = u * np.where(par == 0, np.exp(1j * angle), np.exp(-1j * angle))
    flip = idx ^ (1 << (n - k))
    s = np.zeros((1 << n, 1 << n), dtype=complex)
    s[flip, idx] = u[flip] * np.conj(u[idx])
    return s


def _diag_sign_function(spec, j, tol=1e-9):
    """<x ^ e_j | S_j | x> as a function of the basis label x; for a pi-LME
    spec this is a +-1 function independent of bit j."""
    n = spec.n
    idx = np.arange(1 << n)
    u = np.ones(1 << n, dtype=complex)
    for support, angle in spec.gates:
        par = np.zeros(1 << n, dtype=np.int64)
        for q in support:
            par ^= (idx >> (n - q)) & 1
        u = u * np.where(par == 0, np.exp(1j * angle), np.exp(-1j * angle))
    flip = idx ^ (1 << (n - j))
    vals = u[flip] * np.conj(u[idx])
    if np.abs(np.abs(vals) - 1.0).max() > tol:
        raise LmeError("stabilizer diagonal is not unimodular")
    signs = np.real(vals)
    if np.abs(np.abs(signs) - 1.0).max() > tol:
        raise LmeError("spec is not a pi-LME state (diagonal not +-1)")
    if np.abs(signs - signs[flip]).max() > tol:
        raise LmeError("sign function depends on the measured bit")
    return signs


def measurement_sign(spec, j, z_bits):
    """m_l = <l|U_j|l>: the +-1 factor fixed by the sigma_z outcomes on the
    qubits interacting with j (other bits are irrelevant and set to 0)."""
    signs = _diag_sign_function(spec, j)
    x = 0
    for q, bit in z_bits.items():
        if bit:
            x |= 1 << (spec.n - q)
    return float(signs[x])


def extract_bit(state, spec, j, rng):
    """Recover bit i_j from a single copy of sigma_z^i U|+..+>.

    Measures sigma_x on qubit j and sigma_z on the qubits interacting with
    j; the product of the x outcome and the sign <l|U_j|l> is (-1)^(i_j).
    """
    if not spec.is_pi_lmes():
        raise LmeError("bit extraction needs a pi-LME spec")
    if not 1 <= j <= spec.n:
        raise LmeError(f"qubit {j} out of range")
    work = state
    outcome, work, _ = qsim.measure_basis(work, j, 0.0, rng=rng)  # B_0 = sigma_x
    m_j = 1.0 - 2.0 * outcome
    z_bits = {}
    for q in spec.neighbors(j):
        bit, work, _ = qsim.measure_z(work, q, rng=rng)
        z_bits[q] = bit
    m_l = measurement_sign(spec, j, z_bits)
    return int(m_j * m_l < 0.0)


def extract_independent_set(state, spec, subset, rng):
    """Recover {i_j for j in subset} from one copy; the subset must be
    independent in the interaction graph (their x measurements and their
    neighbourhood z measurements then coexist on a single copy)."""
    subset = sorted(set(subset))
    graph = spec.interaction_graph()
    for a, b in itertools.combinations(subset, 2):
        if graph.adj[a - 1, b - 1]:
            raise LmeError(f"subset is not independent ({a}-{b})")
    if not subset:
        return {}
    if not spec.is_pi_lmes():
        raise LmeError("bit extraction needs a pi-LME spec")
    work = state
    x_out = {}
    for j in subset:
        outcome, work, _ = qsim.measure_basis(work, j, 0.0, rng=rng)
        x_out[j] = outcome
    z_out = {}
    for q in sorted({k for j in subset for k in graph.neighbors(j)}):
        bit, work, _ = qsim.measure_z(work, q, rng=rng)
        z_out[q] = bit
    bits = {}
    for j in subset:
        m_j = 1.0 - 2.0 * x_out[j]
        m_l = measurement_sign(spec, j, {q: z_out[q] for q in graph.neighbors(j)})
        bits[j] = int(m_j * m_l < 0.0)
    return bits


class ChannelRun:
    __slots__ = ("payload", "received", "frame_bits", "mask", "carriers")

    def __init__(self, payload, received, frame_bits, mask, carriers):
        self.payload = payload
        self.received = received
        self.frame_bits = frame_bits
        self.mask = mask
        self.carriers = carriers


def classical_channel_demo(spec, payload, rng, carriers=None):
    """Send classical bits over one remotely prepared LME copy.

    The compiled schedule's byproducts for a phase-gate-only circuit are all
    sigma_z-type, giving a uniformly random frame bitstring known to the
    sender.  She announces frame XOR payload on an independent carrier set;
    the receiver extracts the frame bits from his copy and unmasks.
    """
    if carriers is None:
        carriers = default_carriers(spec)
    carriers = sorted(carriers)
    if len(payload) > len(carriers):
        raise LmeError(f"payload longer than the carrier set ({len(carriers)})")
    payload = list(payload) + [0] * (len(carriers) - len(payload))

    cp = compiler.compile_sequence(spec.gate_sequence())
    res = compiler.run_schedule(cp, rng=rng)
    for w in range(1, spec.n + 1):
        if res.frame.letter(w) not in (0, 3):
            raise LmeError("non sigma_z byproduct on an LME compilation")
    frame_bits = {w: (1 if res.frame.letter(w) == 3 else 0)
                  for w in range(1, spec.n + 1)}
    # receiver's physical copy: sigma_z^frame U|+..+> (uncorrected wires)
    bob_state = res.wire_state
    mask = [frame_bits[j] ^ b for j, b in zip(carriers, payload)]
    extracted = extract_independent_set(bob_state, spec, carriers, rng)
    received = [extracted[j] ^ m for j, m in zip(carriers, mask)]
    return ChannelRun(payload, received, frame_bits, mask, tuple(carriers))


def default_carriers(spec):
    """Greedy independent set of the interaction graph: the default payload
    carriers (their bits are extractable from a single copy)."""
    graph = spec.interaction_graph()
    chosen = []
    blocked = set()
    for j in range(1, graph.n + 1):
        if j in blocked:
            continue
        chosen.append(j)
        blocked.update(graph.neighbors(j))
    return chosen
