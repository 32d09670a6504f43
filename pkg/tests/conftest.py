"""Shared dense oracles for the test suite.

Everything here is built from first principles (kron products, explicit
matrix exponentials, permutation matrices) so it stays independent of the
package's own gate-application paths.
"""

import math

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PAULIS = (I2, X, Y, Z)


def kron_all(mats):
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def embed_1q(n, qubit, m):
    return kron_all([m if q == qubit else I2 for q in range(1, n + 1)])


def dense_zrot(angle):
    return np.array([[np.exp(1j * angle), 0], [0, np.exp(-1j * angle)]],
                    dtype=complex)


def dense_xrot(angle):
    from scipy.linalg import expm
    return expm(1j * angle * X)


def dense_phase_gate(n, support, angle):
    """exp(i * angle * Z^(support)) via an explicit matrix exponential."""
    from scipy.linalg import expm
    zs = kron_all([Z if q in support else I2 for q in range(1, n + 1)])
    return expm(1j * angle * zs)


def dense_cnot(n, control, target):
    size = 1 << n
    m = np.zeros((size, size), dtype=complex)
    for idx in range(size):
        j = idx
        if idx & (1 << (n - control)):
            j = idx ^ (1 << (n - target))
        m[j, idx] = 1.0
    return m


def dense_cz(n, a, b):
    size = 1 << n
    d = np.ones(size, dtype=complex)
    for idx in range(size):
        if (idx & (1 << (n - a))) and (idx & (1 << (n - b))):
            d[idx] = -1.0
    return np.diag(d)


def dense_gate_matrix(n, gate):
    """Full 2^n unitary of a repkit gate, built independently."""
    kind = gate.kind
    if kind == "H":
        return embed_1q(n, gate.qubits[0], H)
    if kind == "RZ+":
        return embed_1q(n, gate.qubits[0], dense_zrot(math.pi / 4))
    if kind == "RZ-":
        return embed_1q(n, gate.qubits[0], dense_zrot(-math.pi / 4))
    if kind == "RX+":
        return embed_1q(n, gate.qubits[0], dense_xrot(math.pi / 4))
    if kind == "RX-":
        return embed_1q(n, gate.qubits[0], dense_xrot(-math.pi / 4))
    if kind == "CNOT":
        return dense_cnot(n, *gate.qubits)
    if kind == "CZ":
        return dense_cz(n, *gate.qubits)
    if kind == "phase":
        return dense_phase_gate(n, gate.qubits, gate.angle)
    if kind == "u2":
        return embed_1q(n, gate.qubits[0], gate.matrix)
    raise ValueError(f"no dense oracle for {kind}")


def dense_circuit_matrix(n, gates):
    u = np.eye(1 << n, dtype=complex)
    for g in gates:
        u = dense_gate_matrix(n, g) @ u
    return u


def plus_amps(n):
    return np.full(1 << n, (1 << n) ** -0.5, dtype=complex)


def graph_state_amps(graph):
    """Graph-state amplitudes from the phase pattern (-1)^(# populated edges)."""
    n = graph.n
    size = 1 << n
    amps = plus_amps(n)
    for (a, b) in graph.edges():
        ma, mb = 1 << (n - a), 1 << (n - b)
        for idx in range(size):
            if (idx & ma) and (idx & mb):
                amps[idx] = -amps[idx]
    return amps


def graph_basis_matrix(graph):
    """Rows are the graph-basis vectors sigma_z^mu |G>."""
    n = graph.n
    size = 1 << n
    g = graph_state_amps(graph)
    rows = np.empty((size, size), dtype=complex)
    idx = np.arange(size)
    for mu in range(size):
        par = np.zeros(size, dtype=np.int64)
        t = idx & mu
        while t.any():
            par ^= t & 1
            t >>= 1
        rows[mu] = g * np.where(par, -1.0, 1.0)
    return rows


def dense_depolarize(rho, n, qubit, survival):
    out = survival * rho
    for p in PAULIS:
        full = embed_1q(n, qubit, p)
        out = out + (1 - survival) / 4.0 * (full @ rho @ full.conj().T)
    return out


def fidelity_amps(a, b):
    return abs(np.vdot(a, b)) ** 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unitary_2x2(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))
