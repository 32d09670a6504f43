"""Tableaus, graphs, LC orbits, coloring, entanglement rank."""

import numpy as np
import pytest

from repkit import qsim, graphstab
from repkit.graphstab import (Graph, local_complement,
                              two_coloring, chromatic_info, lc_orbit,
                              is_lc_equivalent, are_isomorphic,
                              singleton_third_color_coloring,
                              bipartite_lc_representative, tableau_from_circuit,
                              builtin_graph, REP8_EDGES)
from repkit.qsim import Gate, StateVector

from conftest import graph_state_amps, fidelity_amps


def eq4_circuit_gates():
    """The 8-qubit resource circuit: CZ couplings plus local Cliffords."""
    gates = [Gate.clifford("CZ", a, b) for a, b in REP8_EDGES]
    gates += [Gate.clifford("H", 8), Gate.clifford("RZ+", 8),
              Gate.clifford("H", 6), Gate.clifford("RZ-", 7),
              Gate.clifford("RZ+", 2)]
    return gates


class TestTableau:
    def test_single_edge_graph_state(self):
        gates = [Gate.clifford("CZ", 1, 2)]
        tab = tableau_from_circuit(2, gates, {1, 2})
        g = tab.to_graph()
        assert g.edges() == [(1, 2)]
        state = tab.statevector()
        want = graph_state_amps(Graph.from_edges(2, [(1, 2)]))
        assert fidelity_amps(state.amps, want) > 1 - 1e-9

    def test_tableau_statevector_matches_qsim(self, rng):
        # random Clifford circuits on 4 qubits
        for _ in range(10):
            gates = []
            for _ in range(12):
                roll = int(rng.integers(0, 3))
                if roll == 0:
                    gates.append(Gate.clifford(
                        str(rng.choice(["H", "RZ+", "RZ-", "RX+", "RX-"])),
                        int(rng.integers(1, 5))))
                else:
                    a, b = rng.choice(np.arange(1, 5), size=2, replace=False)
                    gates.append(Gate.clifford("CNOT" if roll == 1 else "CZ",
                                               int(a), int(b)))
            plus = {1, 2}
            tab = tableau_from_circuit(4, gates, plus)
            start = StateVector.plus(2).tensor(
                StateVector.computational(2, 0))
            want = qsim.apply_circuit(start, gates)
            assert qsim.fidelity(tab.statevector(), want) > 1 - 1e-9

    def test_eq4_tableau_and_statevector(self):
        gates = eq4_circuit_gates()
        tab = tableau_from_circuit(8, gates, set(range(1, 9)))
        state = tab.statevector()
        want = qsim.apply_circuit(StateVector.plus(8), gates)
        assert qsim.fidelity(state, want) > 1 - 1e-9
        # the CZ pattern alone is the edge set; the extracted graph of the
        # full circuit stays in its LC class
        g = tab.to_graph()
        assert is_lc_equivalent(g, Graph.from_edges(8, REP8_EDGES))

    def test_eq4_entropy_is_three_ebits(self):
        gates = eq4_circuit_gates()
        state = qsim.apply_circuit(StateVector.plus(8), gates)
        assert abs(qsim.entanglement_entropy(state, [1, 2, 3, 4, 5]) - 3.0) < 1e-9
        tab = tableau_from_circuit(8, gates, set(range(1, 9)))
        assert tab.entanglement([1, 2, 3, 4, 5]) == 3

    def test_non_clifford_rejected(self):
        with pytest.raises(graphstab.GraphError):
            tableau_from_circuit(2, [Gate.phase((1,), 0.3)], {1, 2})

    def test_ghz_entanglement(self):
        gates = [Gate.clifford("CNOT", 1, 2), Gate.clifford("CNOT", 1, 3)]
        tab = tableau_from_circuit(3, gates, {1})
        assert graphstab.stabilizer_entanglement(tab, [1]) == 1
        assert graphstab.stabilizer_entanglement(tab, [2, 3]) == 1  # complement symmetry

    def test_entanglement_matches_statevector_entropy(self, rng):
        for _ in range(5):
            gates = []
            for _ in range(15):
                roll = int(rng.integers(0, 3))
                if roll == 0:
                    gates.append(Gate.clifford(
                        str(rng.choice(["H", "RZ+", "RX-"])),
                        int(rng.integers(1, 6))))
                else:
                    a, b = rng.choice(np.arange(1, 6), size=2, replace=False)
                    gates.append(Gate.clifford("CNOT" if roll == 1 else "CZ",
                                               int(a), int(b)))
            tab = tableau_from_circuit(5, gates, set(range(1, 6)))
            state = qsim.apply_circuit(StateVector.plus(5), gates)
            for part in ([1], [1, 3], [2, 4, 5]):
                got = tab.entanglement(part)
                want = qsim.entanglement_entropy(state, part)
                assert abs(got - want) < 1e-9

    def test_trivial_cut_rejected(self):
        tab = tableau_from_circuit(2, [], {1, 2})
        with pytest.raises(graphstab.GraphError):
            tab.entanglement([])


class TestLocalComplement:
    def test_triangle_becomes_path(self):
        tri = Graph.from_edges(3, [(1, 2), (2, 3), (1, 3)])
        out = local_complement(tri, 1)
        assert out.degree_sequence() == (1, 1, 2)  # star K_{1,2} = path

    def test_involution(self, rng):
        g = builtin_graph("rep8")
        for v in range(1, 9):
            assert local_complement(local_complement(g, v), v).key() == g.key()

    def test_vertex_out_of_range(self):
        with pytest.raises(graphstab.GraphError):
            local_complement(builtin_graph("rep8"), 9)

    def test_orbit_invariant_under_lc(self):
        tri = Graph.from_edges(3, [(1, 2), (2, 3), (1, 3)])
        o1 = lc_orbit(tri)
        o2 = lc_orbit(local_complement(tri, 2))
        assert len(o1) == len(o2)
        for r in o2.representatives:
            assert o1.contains_isomorph(r)


class TestLcOrbit:
    def test_single_edge_orbit(self):
        k2 = Graph.from_edges(2, [(1, 2)])
        assert len(lc_orbit(k2)) == 1

    def test_triangle_star_equivalent(self):
        tri = Graph.from_edges(3, [(1, 2), (2, 3), (1, 3)])
        star = Graph.from_edges(3, [(1, 2), (1, 3)])
        assert is_lc_equivalent(tri, star)
        assert len(lc_orbit(tri)) == 2  # triangle and path classes

    def test_graph_vs_itself(self):
        g = builtin_graph("mes6")
        assert is_lc_equivalent(g, g)

    def test_mes6_orbit_contains_bipartite(self):
        orbit = lc_orbit(builtin_graph("mes6"))
        assert orbit.complete
        assert orbit.bipartite_members()

    def test_labeled_bipartite_representative(self):
        g = builtin_graph("mes6")
        bip = bipartite_lc_representative(g)
        assert bip is not None
        assert two_coloring(bip) is not None
        assert is_lc_equivalent(g, bip)

    def test_orbit_size_limit_reported(self):
        g = builtin_graph("rep8")
        orbit = lc_orbit(g, max_size=3)
        assert not orbit.complete
        assert len(orbit) > 3

    def test_lc_equivalence_raises_when_undecided(self):
        g = builtin_graph("rep8")
        other = Graph.from_edges(8, [(1, 2)])
        with pytest.raises(graphstab.GraphError):
            is_lc_equivalent(g, other, max_size=3)


class TestIsomorphism:
    def test_relabeled_graphs_isomorphic(self, rng):
        g = builtin_graph("rep8")
        perm = rng.permutation(8)
        adj = g.adj[np.ix_(perm, perm)]
        assert are_isomorphic(g, Graph(8, adj))

    def test_different_graphs_not_isomorphic(self):
        a = Graph.from_edges(3, [(1, 2), (2, 3)])
        b = Graph.from_edges(3, [(1, 2), (2, 3), (1, 3)])
        assert not are_isomorphic(a, b)


class TestColoring:
    def test_even_cycle_is_two_colorable(self):
        g = Graph.from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)])
        chi, col = chromatic_info(g)
        assert chi == 2

    def test_empty_graph(self):
        g = Graph.from_edges(3, [])
        chi, col = chromatic_info(g)
        assert chi == 1

    def test_rep8_is_three_colorable(self):
        g = builtin_graph("rep8")
        chi, col = chromatic_info(g)
        assert chi == 3
        # triangle {2, 3, 7} forces the third color
        assert len({col[1], col[2], col[6]}) == 3

    def test_rep8_singleton_third_color_avoiding_receiver(self):
        g = builtin_graph("rep8")
        a, b, c = singleton_third_color_coloring(g, excluded=(6, 7, 8))
        (v,) = c
        assert v in (1, 2, 3, 4, 5)
        # proper coloring check
        col = {}
        for cls, idx in ((a, 0), (b, 1), (c, 2)):
            for q in cls:
                col[q] = idx
        for (x, y) in g.edges():
            assert col[x] != col[y]

    def test_coloring_is_proper_on_random_graphs(self, rng):
        for _ in range(5):
            n = 7
            adj = np.zeros((n, n), dtype=np.uint8)
            for i in range(n):
                for j in range(i + 1, n):
                    if rng.random() < 0.4:
                        adj[i, j] = adj[j, i] = 1
            g = Graph(n, adj)
            chi, col = chromatic_info(g)
            for (x, y) in g.edges():
                assert col[x - 1] != col[y - 1]


class TestGraphJson:
    def test_round_trip(self):
        g = builtin_graph("rep8")
        assert Graph.from_json(g.to_json()).key() == g.key()

    def test_bad_edge_rejected(self):
        with pytest.raises(graphstab.GraphError):
            Graph.from_edges(2, [(1, 3)])
