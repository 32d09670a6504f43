"""Pauli strings with exact sign tracking and Clifford conjugation.

Letters are coded 0..3 for I, X, Y, Z.  A PauliString carries an overall
phase from {+1, -1, +i, -i}; products and Clifford conjugations keep it
exact.  The two-qubit conjugation tables are generated once from dense 4x4
matrix products, the single-qubit rules are the standard ones.
"""

import numpy as np

from .qsim import PAULI, CLIFFORD_1Q

LETTERS = "IXYZ"

# single-letter products: _PROD[a][b] = (letter of sigma_a sigma_b, phase)
_PROD = {}
for _a in range(4):
    for _b in range(4):
        _m = PAULI[_a] @ PAULI[_b]
        for _c in range(4):
            for _ph in (1, -1, 1j, -1j):
                if np.allclose(_m, _ph * PAULI[_c]):
                    _PROD[(_a, _b)] = (_c, _ph)

# single-qubit Clifford conjugation: {gate: {letter: (letter', sign)}}
_CONJ_1Q = {}
for _name, _u in CLIFFORD_1Q.items():
    _CONJ_1Q[_name] = {0: (0, 1)}
    for _a in range(1, 4):
        _m = _u @ PAULI[_a] @ _u.conj().T
        for _c in range(1, 4):
            for _ph in (1, -1):
                if np.allclose(_m, _ph * PAULI[_c]):
                    _CONJ_1Q[_name][_a] = (_c, _ph)

# two-qubit Clifford conjugation tables on letter pairs
_CNOT_DENSE = np.zeros((4, 4), dtype=complex)
for _i, _j in ((0, 0), (1, 1), (2, 3), (3, 2)):
    _CNOT_DENSE[_j, _i] = 1.0
_CZ_DENSE = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def _pair_table(u):
    table = {}
    for a in range(4):
        for b in range(4):
            m = u @ np.kron(PAULI[a], PAULI[b]) @ u.conj().T
            for c in range(4):
                for d in range(4):
                    for ph in (1, -1, 1j, -1j):
                        if np.allclose(m, ph * np.kron(PAULI[c], PAULI[d])):
                            table[(a, b)] = (c, d, ph)
    return table


_CONJ_2Q = {"CNOT": _pair_table(_CNOT_DENSE), "CZ": _pair_table(_CZ_DENSE)}


class PauliError(Exception):
    pass


class PauliString:
    """A signed Pauli operator on qubits 1..n."""

    __slots__ = ("n", "letters", "phase")

    def __init__(self, n, letters=None, phase=1):
        self.n = n
        if letters is None:
            self.letters = np.zeros(n, dtype=np.uint8)
        else:
            self.letters = np.asarray(letters, dtype=np.uint8).copy()
            if self.letters.shape != (n,):
                raise PauliError("letter array has wrong length")
        if phase not in (1, -1, 1j, -1j):
            raise PauliError(f"phase must be a fourth root of unity, got {phase}")
        self.phase = complex(phase)

    @classmethod
    def identity(cls, n):
        return cls(n)

    @classmethod
    def from_letters(cls, mapping, n, phase=1):
        """Build from a {qubit: letter} dict (letters 0..3 or 'IXYZ')."""
        p = cls(n, phase=phase)
        for q, l in mapping.items():
            if isinstance(l, str):
                l = LETTERS.index(l)
            p.letters[q - 1] = l
        return p

    @classmethod
    def sigma_z_on(cls, support, n):
        return cls.from_letters({q: 3 for q in support}, n)

    def letter(self, qubit):
        return int(self.letters[qubit - 1])

    def is_identity(self):
        return not self.letters.any()

    def copy(self):
        return PauliString(self.n, self.letters, self._phase_key())

    def _phase_key(self):
        for ph in (1, -1, 1j, -1j):
            if abs(self.phase - ph) < 1e-9:
                return ph
        raise PauliError("phase drifted off the unit roots")

    def __mul__(self, other):
        if self.n != other.n:
            raise PauliError("length mismatch")
        out = PauliString(self.n)
        phase = self.phase * other.phase
        for i in range(self.n):
            c, ph = _PROD[(int(self.letters[i]), int(other.letters[i]))]
            out.letters[i] = c
            phase *= ph
        out.phase = phase
        out._phase_key()
        return out

    def conjugated(self, gate):
        """Return U P U^dagger for a Clifford gate from the qsim alphabet."""
        out = self.copy()
        if gate.kind in _CONJ_1Q:
            q = gate.qubits[0]
            l = int(out.letters[q - 1])
            nl, s = _CONJ_1Q[gate.kind][l]
            out.letters[q - 1] = nl
            out.phase *= s
        elif gate.kind in _CONJ_2Q:
            a, b = gate.qubits
            la, lb = int(out.letters[a - 1]), int(out.letters[b - 1])
            na, nb, ph = _CONJ_2Q[gate.kind][(la, lb)]
            out.letters[a - 1] = na
            out.letters[b - 1] = nb
            out.phase *= ph
        else:
            raise PauliError(f"cannot conjugate through gate kind {gate.kind!r}")
        out._phase_key()
        return out

    def restricted(self, qubits):
        """Letters re-indexed to the given qubit list (phase kept)."""
        sub = PauliString(len(qubits), phase=self._phase_key())
        for i, q in enumerate(qubits):
            sub.letters[i] = self.letters[q - 1]
        return sub

    def dense(self):
        """Dense matrix (including phase); for tests on small n."""
        m = np.array([[self.phase]], dtype=complex)
        for l in self.letters:
            m = np.kron(m, PAULI[int(l)])
        return m

    def __str__(self):
        s = "".join(LETTERS[int(l)] for l in self.letters)
        pre = {1: "+", -1: "-", 1j: "+i", -1j: "-i"}[self._phase_key()]
        return pre + s

    def __repr__(self):
        return f"PauliString({self})"
