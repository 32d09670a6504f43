"""LME states, generalized stabilizers, bit extraction, classical channel."""

import itertools
import math

import numpy as np
import pytest

from repkit import qsim, graphstab, lme_classical as lme
from repkit.graphstab import Graph
from repkit.qsim import StateVector

from conftest import graph_state_amps, fidelity_amps, kron_all, I2, X, Z


class TestBuildLmes:
    def test_no_gates_gives_plus(self):
        spec = lme.LmesSpec(3, [])
        st = lme.build_lmes(spec)
        assert fidelity_amps(st.amps, StateVector.plus(3).amps) > 1 - 1e-12

    def test_amplitudes_have_uniform_modulus(self, rng):
        spec = lme.LmesSpec(3, [((1, 2), 0.3), ((2, 3), 1.1), ((1, 2, 3), 0.7)])
        st = lme.build_lmes(spec)
        assert np.abs(np.abs(st.amps) - 8 ** -0.5).max() < 1e-12

    def test_pi_phase_spec_matches_projector_form(self):
        # 1 - 2|111><111| applied to |+++>
        spec = lme.pi_phase_spec()
        st = lme.build_lmes(spec)
        want = StateVector.plus(3).amps.copy()
        want[7] *= -1
        assert fidelity_amps(st.amps, want) > 1 - 1e-12
        assert spec.is_pi_lmes()

    def test_cz_chain_is_path_graph_state(self):
        path = Graph.from_edges(3, [(1, 2), (2, 3)])
        spec = lme.graph_state_spec(path)
        st = lme.build_lmes(spec)
        assert fidelity_amps(st.amps, graph_state_amps(path)) > 1 - 1e-12
        assert spec.is_pi_lmes()
        assert spec.interaction_graph().edges() == [(1, 2), (2, 3)]

    def test_non_pi_spec_detected(self):
        spec = lme.LmesSpec(2, [((1, 2), 0.3)])
        assert not spec.is_pi_lmes()


class TestGeneralizedStabilizer:
    def test_no_gates_gives_sigma_x(self):
        spec = lme.LmesSpec(2, [])
        s1 = lme.generalized_stabilizer(spec, 1)
        assert np.abs(s1 - kron_all([X, I2])).max() < 1e-12

    def test_cz_pair_gives_x_tensor_z(self):
        # a CZ-type coupling turns sigma_x on 1 into sigma_x x sigma_z
        cz_graph = Graph.from_edges(2, [(1, 2)])
        spec = lme.graph_state_spec(cz_graph)
        s1 = lme.generalized_stabilizer(spec, 1)
        want = kron_all([X, Z])
        # global phase of U cancels in U sigma U+; compare up to sign pattern
        assert np.abs(np.abs(s1) - np.abs(want)).max() < 1e-9
        ratio = s1[np.abs(want) > 0.5] / want[np.abs(want) > 0.5]
        assert np.abs(ratio - ratio[0]).max() < 1e-9
        assert abs(abs(ratio[0]) - 1.0) < 1e-9

    def test_hermitian_unitary_and_eigenbasis(self, rng):
        # Eq-style eigenbasis property: S_k sigma_z^i |Psi> = (-1)^{i_k} ...
        specs = [
            lme.pi_phase_spec(),
            lme.graph_state_spec(Graph.from_edges(4, [(1, 2), (2, 3), (3, 4)])),
            lme.LmesSpec(3, [((1, 2), math.pi / 2), ((1, 3), math.pi / 2)]),
        ]
        for spec in specs:
            n = spec.n
            psi = lme.build_lmes(spec).amps
            for k in range(1, n + 1):
                s = lme.generalized_stabilizer(spec, k)
                assert np.abs(s - s.conj().T).max() < 1e-9
                assert np.abs(s @ s.conj().T - np.eye(1 << n)).max() < 1e-9
                for i in range(1 << n):
                    vec = psi.copy()
                    for q in range(1, n + 1):
                        if i & (1 << (n - q)):
                            idx = np.arange(1 << n)
                            vec = vec * np.where((idx >> (n - q)) & 1, -1.0, 1.0)
                    i_k = (i >> (n - k)) & 1
                    assert np.abs(s @ vec - (-1.0) ** i_k * vec).max() < 1e-9

    def test_out_of_range(self):
        with pytest.raises(lme.LmeError):
            lme.generalized_stabilizer(lme.pi_phase_spec(), 4)


def sigma_z_pattern(state, bits):
    out = state
    for q, bit in enumerate(bits, start=1):
        if bit:
            out = qsim.apply_pauli(out, q, 3)
    return out


class TestExtractBit:
    def test_zero_pattern_extracts_zero(self, rng):
        spec = lme.pi_phase_spec()
        st = lme.build_lmes(spec)
        for j in (1, 2, 3):
            assert lme.extract_bit(st, spec, j, rng) == 0

    def test_pi_phase_random_patterns(self, rng):
        spec = lme.pi_phase_spec()
        base = lme.build_lmes(spec)
        for _ in range(50):
            bits = [int(rng.integers(2)) for _ in range(3)]
            st = sigma_z_pattern(base, bits)
            j = int(rng.integers(1, 4))
            assert lme.extract_bit(st, spec, j, rng) == bits[j - 1]

    def test_path_graph_middle_bit(self, rng):
        path = Graph.from_edges(3, [(1, 2), (2, 3)])
        spec = lme.graph_state_spec(path)
        base = lme.build_lmes(spec)
        for bits in itertools.product((0, 1), repeat=3):
            st = sigma_z_pattern(base, bits)
            assert lme.extract_bit(st, spec, 2, rng) == bits[1]

    def test_non_pi_spec_rejected(self, rng):
        spec = lme.LmesSpec(2, [((1, 2), 0.3)])
        st = lme.build_lmes(spec)
        with pytest.raises(lme.LmeError):
            lme.extract_bit(st, spec, 1, rng)


class TestExtractIndependentSet:
    def test_path_ends_from_one_copy(self, rng):
        path = Graph.from_edges(3, [(1, 2), (2, 3)])
        spec = lme.graph_state_spec(path)
        base = lme.build_lmes(spec)
        for bits in itertools.product((0, 1), repeat=3):
            st = sigma_z_pattern(base, bits)
            got = lme.extract_independent_set(st, spec, [1, 3], rng)
            assert got == {1: bits[0], 3: bits[2]}

    def test_pi_phase_singletons(self, rng):
        # every pair interacts, so color classes are singletons
        spec = lme.pi_phase_spec()
        base = lme.build_lmes(spec)
        bits = [1, 0, 1]
        st = sigma_z_pattern(base, bits)
        for j in (1, 2, 3):
            got = lme.extract_independent_set(st, spec, [j], rng)
            assert got == {j: bits[j - 1]}

    def test_empty_set(self, rng):
        spec = lme.pi_phase_spec()
        st = lme.build_lmes(spec)
        assert lme.extract_independent_set(st, spec, [], rng) == {}

    def test_dependent_set_rejected(self, rng):
        spec = lme.pi_phase_spec()
        st = lme.build_lmes(spec)
        with pytest.raises(lme.LmeError):
            lme.extract_independent_set(st, spec, [1, 2], rng)


class TestLemma1BruteForce:
    def test_pair_and_triple_supports(self):
        # all pi-LME states with supports among {12, 13, 23, 123} on the
        # quarter-pi angle grid: the local expectation identity holds for
        # every eigenbasis element, every qubit, and every admissible
        # projective completion with non-vanishing overlap
        supports = [(1, 2), (1, 3), (2, 3), (1, 2, 3)]
        grid = [k * math.pi / 4 for k in range(8)]
        checked = 0
        plus = np.array([1.0, 1.0]) / math.sqrt(2)
        minus = np.array([1.0, -1.0]) / math.sqrt(2)
        for angles in itertools.product(grid, repeat=4):
            spec = lme.LmesSpec(3, list(zip(supports, angles)))
            if not spec.is_pi_lmes():
                continue
            base = lme.build_lmes(spec)
            for j in (1, 2, 3):
                s_j = lme.generalized_stabilizer(spec, j)
                for i_bits in itertools.product((0, 1), repeat=3):
                    psi = sigma_z_pattern(base, i_bits).amps
                    expect = float(np.real(psi.conj() @ s_j @ psi))
                    for lx in (plus, minus):
                        for kk in itertools.product((0, 1), repeat=2):
                            vecs = []
                            ki = iter(kk)
                            for q in (1, 2, 3):
                                if q == j:
                                    vecs.append(lx)
                                else:
                                    b = next(ki)
                                    vecs.append(np.array([1.0 - b, float(b)]))
                            probe = kron_all([v.reshape(2, 1) for v in vecs]).ravel()
                            if abs(np.vdot(probe, psi)) < 1e-12:
                                continue
                            local = float(np.real(probe.conj() @ s_j @ probe))
                            assert abs(local - expect) < 1e-9
                            checked += 1
        assert checked > 1000  # the family is non-trivial


class TestClassicalChannel:
    def test_all_zero_payload(self, rng):
        path = Graph.from_edges(3, [(1, 2), (2, 3)])
        spec = lme.graph_state_spec(path)
        run = lme.classical_channel_demo(spec, [0, 0], rng)
        assert run.received == run.payload == [0, 0]

    def test_random_payloads_path_graph(self, rng):
        path = Graph.from_edges(3, [(1, 2), (2, 3)])
        spec = lme.graph_state_spec(path)
        for _ in range(50):
            payload = [int(rng.integers(2)), int(rng.integers(2))]
            run = lme.classical_channel_demo(spec, payload, rng)
            assert run.received == run.payload

    def test_frame_is_sigma_z_only_exhaustive(self, rng):
        # every compiled byproduct of a phase-gate-only circuit is Z-type,
        # for every outcome pattern
        from repkit import compiler
        path = Graph.from_edges(2, [(1, 2)])
        spec = lme.graph_state_spec(path)
        cp = compiler.compile_sequence(spec.gate_sequence())
        for pattern in itertools.product((0, 1), repeat=len(cp.schedule)):
            res = compiler.run_schedule(cp, rng=rng, forced=list(pattern))
            for w in range(1, spec.n + 1):
                assert res.frame.letter(w) in (0, 3)

    def test_payload_too_long(self, rng):
        spec = lme.graph_state_spec(Graph.from_edges(2, [(1, 2)]))
        with pytest.raises(lme.LmeError):
            lme.classical_channel_demo(spec, [1, 0, 1], rng)
