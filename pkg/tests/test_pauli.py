"""Pauli algebra against dense matrix products."""

import itertools

import numpy as np
import pytest

from repkit.pauli import PauliString, PauliError
from repkit.qsim import Gate

from conftest import dense_gate_matrix, kron_all, PAULIS


def test_single_letter_products_exhaustive():
    for a in range(4):
        for b in range(4):
            pa = PauliString.from_letters({1: a}, 1)
            pb = PauliString.from_letters({1: b}, 1)
            assert np.allclose((pa * pb).dense(), PAULIS[a] @ PAULIS[b])


def test_two_qubit_products_exhaustive():
    for la in itertools.product(range(4), repeat=2):
        for lb in itertools.product(range(4), repeat=2):
            pa = PauliString(2, np.array(la))
            pb = PauliString(2, np.array(lb))
            dense = kron_all([PAULIS[la[0]], PAULIS[la[1]]]) @ \
                kron_all([PAULIS[lb[0]], PAULIS[lb[1]]])
            assert np.allclose((pa * pb).dense(), dense)


@pytest.mark.parametrize("kind", ["H", "RZ+", "RZ-", "RX+", "RX-"])
def test_single_qubit_conjugation_vs_dense(kind):
    g = Gate.clifford(kind, 1)
    u = dense_gate_matrix(1, g)
    for a in range(4):
        p = PauliString.from_letters({1: a}, 1)
        got = p.conjugated(g).dense()
        want = u @ p.dense() @ u.conj().T
        assert np.allclose(got, want), (kind, a)


@pytest.mark.parametrize("kind", ["CNOT", "CZ"])
def test_two_qubit_conjugation_vs_dense(kind):
    g = Gate.clifford(kind, 1, 2)
    u = dense_gate_matrix(2, g)
    for la in itertools.product(range(4), repeat=2):
        p = PauliString(2, np.array(la))
        got = p.conjugated(g).dense()
        want = u @ p.dense() @ u.conj().T
        assert np.allclose(got, want), (kind, la)


def test_random_frame_through_random_circuit(rng):
    # letters + phase tracked through a random Clifford circuit equal the
    # dense conjugation on 4 qubits
    n = 4
    letters = rng.integers(0, 4, size=n)
    frame = PauliString(n, letters)
    dense = frame.dense()
    for _ in range(30):
        roll = int(rng.integers(0, 3))
        if roll == 0:
            kind = str(rng.choice(["H", "RZ+", "RZ-", "RX+", "RX-"]))
            g = Gate.clifford(kind, int(rng.integers(1, n + 1)))
        else:
            a, b = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            g = Gate.clifford("CNOT" if roll == 1 else "CZ", int(a), int(b))
        frame = frame.conjugated(g)
        u = dense_gate_matrix(n, g)
        dense = u @ dense @ u.conj().T
    assert np.allclose(frame.dense(), dense)


def test_restriction_and_letters():
    p = PauliString.from_letters({1: "X", 3: "Z"}, 4, phase=-1)
    sub = p.restricted([3, 1])
    assert str(sub) == "-ZX"
    assert p.letter(2) == 0


def test_cnot_x_propagation():
    p = PauliString.from_letters({1: "X"}, 2)
    out = p.conjugated(Gate.clifford("CNOT", 1, 2))
    assert str(out) == "+XX"
    p = PauliString.from_letters({2: "Z"}, 2)
    out = p.conjugated(Gate.clifford("CNOT", 1, 2))
    assert str(out) == "+ZZ"


def test_h_swaps_x_and_z():
    p = PauliString.from_letters({1: "X"}, 1)
    assert str(p.conjugated(Gate.clifford("H", 1))) == "+Z"
    p = PauliString.from_letters({1: "Z"}, 1)
    assert str(p.conjugated(Gate.clifford("H", 1))) == "+X"


def test_bad_phase_rejected():
    with pytest.raises(PauliError):
        PauliString(2, phase=0.5)
