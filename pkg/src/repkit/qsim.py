"""Dense statevector and density-matrix engine.

Qubits are numbered 1..n with qubit 1 as the most significant bit of the
basis index.  Intended scale is ~12 qubits for pure states and ~5 qubits for
density matrices; everything is plain numpy.

Conventions:

* ``Z(a)`` denotes ``exp(i a sigma_z)`` and the multi-qubit phase gate on a
  support S is ``exp(i a sigma_z^(S))`` (diagonal, with sign given by the
  parity of the support bits).
* The measurement basis ``B_beta`` consists of
  ``|phi^i(beta)> = sigma_z^i Z(-beta)|+>`` for outcome i in {0, 1}.
* Global phase is never stripped from stored amplitudes; comparisons go
  through the phase-invariant :func:`fidelity`.

States are immutable by convention: operations return new values.
"""

import json
import math

import numpy as np

SQRT2_INV = 1.0 / math.sqrt(2.0)

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) * SQRT2_INV


def zrot(angle):
    """exp(i * angle * sigma_z) as a 2x2 matrix."""
    return np.array([[np.exp(1j * angle), 0], [0, np.exp(-1j * angle)]],
                    dtype=complex)


def xrot(angle):
    """exp(i * angle * sigma_x) as a 2x2 matrix."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)


CLIFFORD_1Q = {
    "H": H_MATRIX,
    "RZ+": zrot(math.pi / 4),
    "RZ-": zrot(-math.pi / 4),
    "RX+": xrot(math.pi / 4),
    "RX-": xrot(-math.pi / 4),
}
CLIFFORD_2Q = ("CZ", "CNOT")


class QsimError(Exception):
    pass


class Gate:
    """A gate in the repo-wide alphabet.

    kind is one of the named single-qubit Cliffords (H, RZ+/-, RX+/-), a
    two-qubit Clifford (CZ, CNOT), "phase" (multi-qubit phase gate with a
    bound angle), or "u2" (arbitrary single-qubit unitary, used by oracles).
    """

    __slots__ = ("kind", "qubits", "angle", "matrix")

    def __init__(self, kind, qubits, angle=None, matrix=None):
        self.kind = kind
        self.qubits = tuple(qubits)
        self.angle = angle
        self.matrix = matrix

    @classmethod
    def clifford(cls, kind, *qubits):
        if kind in CLIFFORD_1Q:
            if len(qubits) != 1:
                raise QsimError(f"{kind} takes one qubit")
        elif kind in CLIFFORD_2Q:
            if len(qubits) != 2 or qubits[0] == qubits[1]:
                raise QsimError(f"{kind} takes two distinct qubits")
        else:
            raise QsimError(f"unknown Clifford kind {kind!r}")
        return cls(kind, qubits)

    @classmethod
    def phase(cls, support, angle):
        support = tuple(sorted(set(support)))
        if not support:
            raise QsimError("phase gate needs a non-empty support")
        if not math.isfinite(angle):
            raise QsimError("phase angle must be finite")
        return cls("phase", support, angle=float(angle))

    @classmethod
    def single_qubit_unitary(cls, qubit, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise QsimError("u2 gate needs a 2x2 matrix")
        if np.abs(m @ m.conj().T - np.eye(2)).max() > 1e-10:
            raise QsimError("u2 matrix is not unitary")
        return cls("u2", (qubit,), matrix=m)

    def __repr__(self):
        if self.kind == "phase":
            return f"Gate(phase, {self.qubits}, angle={self.angle:.6g})"
        return f"Gate({self.kind}, {self.qubits})"


class StateVector:
    """n-qubit pure state; amplitudes indexed with qubit 1 as the MSB."""

    __slots__ = ("n", "amps")

    def __init__(self, n, amps):
        amps = np.asarray(amps, dtype=complex)
        if amps.shape != (1 << n,):
            raise QsimError(f"expected {1 << n} amplitudes, got {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-8:
            raise QsimError(f"state not normalized: |psi|^2 = {norm}")
        self.n = n
        self.amps = amps

    @classmethod
    def plus(cls, n):
        return cls(n, np.full(1 << n, (1 << n) ** -0.5, dtype=complex))

    @classmethod
    def computational(cls, n, index):
        amps = np.zeros(1 << n, dtype=complex)
        amps[index] = 1.0
        return cls(n, amps)

    @classmethod
    def ghz(cls, n):
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = amps[-1] = SQRT2_INV
        return cls(n, amps)

    @classmethod
    def bell(cls):
        return cls.ghz(2)

    @classmethod
    def w(cls, n=3):
        amps = np.zeros(1 << n, dtype=complex)
        for j in range(n):
            amps[1 << j] = 1.0 / math.sqrt(n)
        return cls(n, amps)

    def copy(self):
        return StateVector(self.n, self.amps.copy())

    def tensor(self, other):
        return StateVector(self.n + other.n, np.kron(self.amps, other.amps))

    def to_json(self):
        """Debug dump: JSON array of [re, im] pairs."""
        return json.dumps([[float(a.real), float(a.imag)] for a in self.amps])

    def __repr__(self):
        return f"StateVector(n={self.n})"


def _qubit_axis(n, qubit):
    if not 1 <= qubit <= n:
        raise QsimError(f"qubit {qubit} out of range for n={n}")
    return qubit - 1


def _apply_1q_matrix(amps, n, qubit, m):
    ax = _qubit_axis(n, qubit)
    psi = np.moveaxis(amps.reshape([2] * n), ax, 0)
    psi = np.tensordot(m, psi, axes=([1], [0]))
    return np.moveaxis(psi, 0, ax).reshape(-1)


def _support_parity(n, support):
    idx = np.arange(1 << n)
    par = np.zeros(1 << n, dtype=np.int64)
    for q in support:
        _qubit_axis(n, q)
        par ^= (idx >> (n - q)) & 1
    return par


def apply_gate(state, gate):
    """Apply a gate; returns a new StateVector with the norm preserved."""
    n = state.n
    amps = state.amps
    if gate.kind in CLIFFORD_1Q:
        out = _apply_1q_matrix(amps, n, gate.qubits[0], CLIFFORD_1Q[gate.kind])
    elif gate.kind == "u2":
        out = _apply_1q_matrix(amps, n, gate.qubits[0], gate.matrix)
    elif gate.kind == "phase":
        par = _support_parity(n, gate.qubits)
        out = amps * np.where(par == 0, np.exp(1j * gate.angle),
                              np.exp(-1j * gate.angle))
    elif gate.kind == "CZ":
        a, b = (_qubit_axis(n, q) for q in gate.qubits)
        idx = np.arange(1 << n)
        sel = ((idx >> (n - 1 - a)) & 1) & ((idx >> (n - 1 - b)) & 1)
        out = amps * np.where(sel, -1.0, 1.0)
    elif gate.kind == "CNOT":
        c, t = (_qubit_axis(n, q) for q in gate.qubits)
        psi = np.moveaxis(amps.reshape([2] * n), (c, t), (0, 1)).copy()
        psi[1, 0], psi[1, 1] = psi[1, 1].copy(), psi[1, 0].copy()
        out = np.moveaxis(psi, (0, 1), (c, t)).reshape(-1)
    else:
        raise QsimError(f"unknown gate kind {gate.kind!r}")
    return StateVector(n, out)


def apply_circuit(state, gates):
    for g in gates:
        state = apply_gate(state, g)
    return state


def apply_pauli(state, qubit, letter):
    """Apply a single Pauli (letter in 0..3 for I,X,Y,Z)."""
    if letter == 0:
        return state
    return StateVector(state.n,
                       _apply_1q_matrix(state.amps, state.n, qubit, PAULI[letter]))


def basis_vector(beta, outcome):
    """|phi^i(beta)> = sigma_z^i Z(-beta)|+> as a length-2 array."""
    v = np.array([np.exp(-1j * beta), np.exp(1j * beta)], dtype=complex) * SQRT2_INV
    if outcome:
        v = v * np.array([1.0, -1.0])
    return v


def _project_1q(state, qubit, vectors, rng, forced):
    """Project a qubit onto one of the given orthonormal 1-qubit vectors."""
    n = state.n
    ax = _qubit_axis(n, qubit)
    psi = np.moveaxis(state.amps.reshape([2] * n), ax, 0)
    branches = []
    for v in vectors:
        sub = np.tensordot(v.conj(), psi, axes=([0], [0]))
        branches.append((float(np.vdot(sub, sub).real), v, sub))
    probs = np.array([b[0] for b in branches])
    if forced is None:
        if rng is None:
            raise QsimError("sampling a measurement needs an rng (or a forced outcome)")
        outcome = int(rng.choice(len(vectors), p=probs / probs.sum()))
    else:
        outcome = int(forced)
        if probs[outcome] < 1e-12:
            raise QsimError(f"forced outcome {outcome} has zero probability")
    p, v, sub = branches[outcome]
    post = np.tensordot(v, sub / math.sqrt(p), axes=0)
    post = np.moveaxis(post.reshape([2] * n), 0, ax).reshape(-1)
    return outcome, StateVector(n, post), float(p)


def measure_basis(state, qubit, beta, rng=None, forced=None):
    """Von Neumann measurement of one qubit in the basis B_beta.

    Returns (outcome, post_state, probability).  The measured qubit is left
    in place in the corresponding basis state.  Pass ``forced`` to
    post-select an outcome deterministically (errors if its probability
    vanishes).
    """
    return _project_1q(state, qubit,
                       [basis_vector(beta, 0), basis_vector(beta, 1)],
                       rng, forced)


def measure_z(state, qubit, rng=None, forced=None):
    """Computational-basis measurement of one qubit (plumbing helper)."""
    e0 = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([0.0, 1.0], dtype=complex)
    return _project_1q(state, qubit, [e0, e1], rng, forced)


def bell_projectors():
    """The four Bell vectors (sigma_i x 1)|Phi+> as length-4 arrays."""
    phi = np.zeros(4, dtype=complex)
    phi[0b00] = phi[0b11] = SQRT2_INV
    vecs = []
    for i in range(4):
        m = np.kron(PAULI[i], np.eye(2))
        vecs.append(m @ phi)
    return vecs


def bell_probabilities(state, pair):
    """Born probabilities of the four Bell outcomes on a qubit pair."""
    n = state.n
    a, b = (_qubit_axis(n, q) for q in pair)
    psi = np.moveaxis(state.amps.reshape([2] * n), (a, b), (0, 1)).reshape(4, -1)
    return [float(np.vdot(v.conj() @ psi, v.conj() @ psi).real)
            for v in bell_projectors()]


def bell_measure(state, pair, rng=None, forced=None):
    """Project a qubit pair onto the Bell basis {(sigma_i x 1)|Phi+>}.

    Returns (outcome in 0..3, post_state); the pair is left in the Bell
    state of the observed outcome.
    """
    n = state.n
    a, b = (_qubit_axis(n, q) for q in pair)
    psi = np.moveaxis(state.amps.reshape([2] * n), (a, b), (0, 1)).reshape(4, -1)
    branches = []
    for v in bell_projectors():
        sub = v.conj() @ psi
        branches.append((float(np.vdot(sub, sub).real), v, sub))
    probs = np.array([x[0] for x in branches])
    if forced is None:
        if rng is None:
            raise QsimError("sampling a measurement needs an rng (or a forced outcome)")
        outcome = int(rng.choice(4, p=probs / probs.sum()))
    else:
        outcome = int(forced)
        if probs[outcome] < 1e-12:
            raise QsimError(f"forced Bell outcome {outcome} has zero probability")
    p, v, sub = branches[outcome]
    post = np.tensordot(v, sub / math.sqrt(p), axes=0).reshape([4] + [2] * (n - 2))
    post = post.reshape([2] * n)
    post = np.moveaxis(post, (0, 1), (a, b)).reshape(-1)
    return outcome, StateVector(n, post)


def schmidt_probabilities(state, part):
    """Squared Schmidt coefficients across part | complement."""
    n = state.n
    part = sorted(set(part))
    if not part or len(part) == n:
        raise QsimError("bipartition must be proper and non-empty")
    axes = [q - 1 for q in part]
    rest = [i for i in range(n) if i not in axes]
    psi = state.amps.reshape([2] * n).transpose(axes + rest)
    m = psi.reshape(1 << len(part), 1 << len(rest))
    s = np.linalg.svd(m, compute_uv=False)
    return s ** 2


def entanglement_entropy(state, part):
    """Base-2 von Neumann entropy of the reduced state on ``part``."""
    p = schmidt_probabilities(state, part)
    p = p[p > 1e-15]
    return float(-(p * np.log2(p)).sum())


def fidelity(s1, s2):
    """|<s1|s2>|^2 (global-phase invariant)."""
    if s1.n != s2.n:
        raise QsimError("fidelity needs equal qubit counts")
    return float(abs(np.vdot(s1.amps, s2.amps)) ** 2)


# ---------------------------------------------------------------------------
# density matrices


class DensityMatrix:
    """Dense n-qubit density matrix (Hermitian, unit trace)."""

    __slots__ = ("n", "mat")

    def __init__(self, n, mat):
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (1 << n, 1 << n):
            raise QsimError("density matrix has wrong shape")
        if np.abs(mat - mat.conj().T).max() > 1e-9:
            raise QsimError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > 1e-9:
            raise QsimError("density matrix trace is not 1")
        self.n = n
        self.mat = mat

    @classmethod
    def from_statevector(cls, state):
        return cls(state.n, np.outer(state.amps, state.amps.conj()))

    def copy(self):
        return DensityMatrix(self.n, self.mat.copy())


def _pauli_full(n, qubit, letter):
    ops = [np.eye(2, dtype=complex)] * n
    ops[qubit - 1] = PAULI[letter]
    full = ops[0]
    for o in ops[1:]:
        full = np.kron(full, o)
    return full


def depolarize(rho, qubit, survival):
    """Local depolarizing channel with survival parameter p:

    E_p(rho) = p*rho + (1-p)/4 * sum_{i=0..3} sigma_i rho sigma_i.
    """
    if not 0.0 <= survival <= 1.0:
        raise QsimError("survival parameter must lie in [0, 1]")
    out = survival * rho.mat
    for letter in range(4):
        full = _pauli_full(rho.n, qubit, letter)
        out = out + (1.0 - survival) / 4.0 * (full @ rho.mat @ full.conj().T)
    return DensityMatrix(rho.n, out)


def partial_transpose(rho, subsystem):
    """Transpose the given qubits' indices of a density matrix."""
    n = rho.n
    subsystem = sorted(set(subsystem))
    t = rho.mat.reshape([2] * (2 * n))
    for q in subsystem:
        _qubit_axis(n, q)
        t = np.swapaxes(t, q - 1, n + q - 1)
    return t.reshape(1 << n, 1 << n)


def ppt_min_eigenvalue(rho, subsystem):
    """Minimum eigenvalue of the partial transpose over ``subsystem``."""
    pt = partial_transpose(rho, subsystem)
    if np.abs(pt - pt.conj().T).max() > 1e-9:
        raise QsimError("partial transpose is not Hermitian")
    return float(np.linalg.eigvalsh(pt).min())
