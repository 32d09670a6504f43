"""GF(2) machinery: stabilizer tableaus, graph states, local complementation,
LC orbits, exact coloring, and bipartite entanglement rank.

Graphs are simple and undirected with 1-based vertex labels matching the
qubit convention.  LC-orbit enumeration walks isomorphism classes (local
complementation commutes with relabeling, so expanding any representative
covers every neighbouring class); isomorphism is decided exactly by
color-refinement plus backtracking, which is comfortable for the <= 8 vertex
graphs this package cares about.
"""

import json
from collections import deque

import numpy as np

from . import qsim


class GraphError(Exception):
    pass


class Graph:
    """Symmetric adjacency matrix over GF(2), zero diagonal."""

    __slots__ = ("n", "adj")

    def __init__(self, n, adj):
        adj = np.asarray(adj, dtype=np.uint8) % 2
        if adj.shape != (n, n):
            raise GraphError("adjacency has wrong shape")
        if (adj != adj.T).any():
            raise GraphError("adjacency must be symmetric")
        if adj.trace() != 0:
            raise GraphError("self-loops are not allowed")
        self.n = n
        self.adj = adj

    @classmethod
    def from_edges(cls, n, edges):
        adj = np.zeros((n, n), dtype=np.uint8)
        for a, b in edges:
            if not (1 <= a <= n and 1 <= b <= n) or a == b:
                raise GraphError(f"bad edge ({a}, {b})")
            adj[a - 1, b - 1] = adj[b - 1, a - 1] = 1
        return cls(n, adj)

    def edges(self):
        return [(i + 1, j + 1) for i in range(self.n)
                for j in range(i + 1, self.n) if self.adj[i, j]]

    def neighbors(self, v):
        return [j + 1 for j in np.flatnonzero(self.adj[v - 1])]

    def degree_sequence(self):
        return tuple(sorted(int(d) for d in self.adj.sum(axis=0)))

    def key(self):
        """Exact labeled identity key."""
        return self.adj.tobytes()

    def copy(self):
        return Graph(self.n, self.adj.copy())

    def to_json(self):
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges()]},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls.from_edges(d["n"], [tuple(e) for e in d["edges"]])

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"


def local_complement(g, v):
    """Complement the subgraph induced by the neighbourhood of v."""
    if not 1 <= v <= g.n:
        raise GraphError(f"vertex {v} out of range")
    nb = np.flatnonzero(g.adj[v - 1])
    adj = g.adj.copy()
    if len(nb) > 1:
        block = adj[np.ix_(nb, nb)]
        block ^= 1
        np.fill_diagonal(block, 0)
        adj[np.ix_(nb, nb)] = block
    return Graph(g.n, adj)


def two_coloring(g):
    """(class_a, class_b) as 1-based sets, or None if not bipartite.

    Deterministic: BFS from the lowest unvisited vertex; class_a is the side
    containing vertex 1.
    """
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] != -1:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in np.flatnonzero(g.adj[u]):
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(int(v))
                elif color[v] == color[u]:
                    return None
    a = {i + 1 for i in range(g.n) if color[i] == 0}
    b = {i + 1 for i in range(g.n) if color[i] == 1}
    return (a, b) if 1 in a else (b, a)


def is_bipartite(g):
    return two_coloring(g) is not None


# ---------------------------------------------------------------------------
# exact coloring


def _greedy_coloring(g):
    order = sorted(range(g.n), key=lambda v: -int(g.adj[v].sum()))
    colors = {}
    for v in order:
        used = {colors[u] for u in np.flatnonzero(g.adj[v]) if u in colors}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return [colors[v] for v in range(g.n)]


def _clique_lower_bound(g):
    best = 1 if g.n else 0
    order = sorted(range(g.n), key=lambda v: -int(g.adj[v].sum()))
    for start in order:
        clique = [start]
        cand = set(np.flatnonzero(g.adj[start]))
        while cand:
            v = max(cand, key=lambda u: int(g.adj[u].sum()))
            clique.append(v)
            cand &= set(np.flatnonzero(g.adj[v]))
        best = max(best, len(clique))
    return best


def _try_k_coloring(g, k):
    order = sorted(range(g.n), key=lambda v: -int(g.adj[v].sum()))
    coloring = [-1] * g.n

    def backtrack(i, used):
        if i == g.n:
            return True
        v = order[i]
        forbidden = {coloring[u] for u in np.flatnonzero(g.adj[v])}
        for c in range(min(used + 1, k)):
            if c in forbidden:
                continue
            coloring[v] = c
            if backtrack(i + 1, max(used, c + 1)):
                return True
        coloring[v] = -1
        return False

    if backtrack(0, 0):
        return list(coloring)
    return None


def chromatic_info(g):
    """Exact chromatic number (branch and bound) and one optimal coloring.

    Returns (chi, coloring) with coloring[v-1] in 0..chi-1.
    """
    if g.n == 0:
        return 0, []
    if not g.adj.any():
        return 1, [0] * g.n
    lb = max(2, _clique_lower_bound(g))
    ub = max(_greedy_coloring(g)) + 1
    for k in range(lb, ub + 1):
        col = _try_k_coloring(g, k)
        if col is not None:
            assert _is_proper(g, col)
            return k, col
    raise GraphError("coloring search failed")  # pragma: no cover


def _is_proper(g, coloring):
    for i in range(g.n):
        for j in np.flatnonzero(g.adj[i]):
            if j > i and coloring[i] == coloring[int(j)]:
                return False
    return True


def singleton_third_color_coloring(g, excluded=()):
    """A proper 3-coloring whose third class is one vertex outside ``excluded``.

    Scans vertices in order and returns ({a...}, {b...}, {v}) for the first v
    whose removal leaves a bipartite graph; None if no such coloring exists.
    """
    excluded = set(excluded)
    for v in range(1, g.n + 1):
        if v in excluded:
            continue
        keep = [u for u in range(g.n) if u != v - 1]
        sub = Graph(g.n - 1, g.adj[np.ix_(keep, keep)])
        tc = two_coloring(sub)
        if tc is None:
            continue
        back = {i + 1: u + 1 for i, u in enumerate(keep)}
        a = {back[x] for x in tc[0]}
        b = {back[x] for x in tc[1]}
        return a, b, {v}
    return None


# ---------------------------------------------------------------------------
# isomorphism and LC orbits


def _wl_colors(adj):
    """One-dimensional Weisfeiler-Lehman color refinement."""
    n = adj.shape[0]
    colors = tuple(int(d) for d in adj.sum(axis=0))
    for _ in range(n):
        sigs = []
        for i in range(n):
            nb = tuple(sorted(colors[j] for j in np.flatnonzero(adj[i])))
            sigs.append((colors[i], nb))
        remap = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = tuple(remap[s] for s in sigs)
        if new == colors:
            return colors
        colors = new
    return colors


def _iso_signature(g):
    return tuple(sorted(_wl_colors(g.adj)))


def are_isomorphic(g1, g2):
    """Exact isomorphism test (refinement-guided backtracking)."""
    if g1.n != g2.n:
        return False
    c1 = _wl_colors(g1.adj)
    c2 = _wl_colors(g2.adj)
    if tuple(sorted(c1)) != tuple(sorted(c2)):
        return False
    n = g1.n
    order = sorted(range(n), key=lambda v: (c1.count(c1[v]), c1[v]))
    cands = [[j for j in range(n) if c2[j] == c1[i]] for i in range(n)]
    mapping = [-1] * n
    used = [False] * n

    def backtrack(k):
        if k == n:
            return True
        v = order[k]
        for w in cands[v]:
            if used[w]:
                continue
            ok = True
            for k2 in range(k):
                u = order[k2]
                if g1.adj[v, u] != g2.adj[w, mapping[u]]:
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used[w] = True
                if backtrack(k + 1):
                    return True
                used[w] = False
        mapping[v] = -1
        return False

    return backtrack(0)


class OrbitResult:
    """Orbit of a graph under local complementation, up to isomorphism."""

    __slots__ = ("representatives", "complete")

    def __init__(self, representatives, complete):
        self.representatives = representatives
        self.complete = complete

    def __len__(self):
        return len(self.representatives)

    def contains_isomorph(self, g):
        sig = _iso_signature(g)
        return any(_iso_signature(r) == sig and are_isomorphic(r, g)
                   for r in self.representatives)

    def bipartite_members(self):
        return [r for r in self.representatives if is_bipartite(r)]


def lc_orbit(g, max_size=100000, stop_when=None):
    """BFS closure of the LC orbit, deduplicated by exact isomorphism.

    Stops early (complete=False) if more than max_size classes appear, or as
    soon as ``stop_when(representative)`` returns True.
    """
    buckets = {}

    def register(h):
        sig = _iso_signature(h)
        bucket = buckets.setdefault(sig, [])
        for r in bucket:
            if are_isomorphic(r, h):
                return None
        bucket.append(h)
        return h

    reps = []
    queue = deque()
    first = register(g)
    reps.append(first)
    queue.append(first)
    if stop_when is not None and stop_when(first):
        return OrbitResult(reps, False)
    while queue:
        cur = queue.popleft()
        for v in range(1, g.n + 1):
            h = local_complement(cur, v)
            added = register(h)
            if added is None:
                continue
            reps.append(added)
            if len(reps) > max_size:
                return OrbitResult(reps, False)
            if stop_when is not None and stop_when(added):
                return OrbitResult(reps, False)
            queue.append(added)
    return OrbitResult(reps, True)


def is_lc_equivalent(g1, g2, max_size=100000):
    """Whether g2 lies in the LC orbit of g1, up to isomorphism.

    Raises GraphError if the orbit search hits max_size undecided.
    """
    sig2 = _iso_signature(g2)

    def hit(rep):
        return _iso_signature(rep) == sig2 and are_isomorphic(rep, g2)

    res = lc_orbit(g1, max_size=max_size, stop_when=hit)
    if not res.complete:
        if hit(res.representatives[-1]):
            return True
        raise GraphError("LC orbit exceeded max_size before deciding")
    return any(hit(r) for r in res.representatives)


def bipartite_lc_representative(g, max_size=100000):
    """First 2-colorable labeled graph reachable from g by LC moves.

    Walks labeled graphs breadth-first (vertex identities preserved), so the
    result can be used directly with noise supports defined on g's qubits.
    """
    seen = {g.key()}
    queue = deque([g])
    while queue:
        cur = queue.popleft()
        if is_bipartite(cur):
            return cur
        for v in range(1, g.n + 1):
            h = local_complement(cur, v)
            k = h.key()
            if k not in seen:
                seen.add(k)
                if len(seen) > max_size:
                    raise GraphError("labeled LC orbit exceeded max_size")
                queue.append(h)
    return None


# ---------------------------------------------------------------------------
# stabilizer tableaus


class StabilizerTableau:
    """n commuting stabilizer generators in the (x|z) binary representation.

    Row i encodes (-1)^sign[i] * prod_j W_j with W_j = I/X/Y/Z selected by
    the bit pair (x[i,j], z[i,j]) ((1,1) meaning Y).
    """

    __slots__ = ("n", "x", "z", "sign")

    def __init__(self, n, x, z, sign):
        self.n = n
        self.x = np.asarray(x, dtype=np.uint8)
        self.z = np.asarray(z, dtype=np.uint8)
        self.sign = np.asarray(sign, dtype=np.uint8)

    @classmethod
    def initial(cls, n, plus_qubits):
        """|+> on the listed qubits, |0> on the rest."""
        x = np.zeros((n, n), dtype=np.uint8)
        z = np.zeros((n, n), dtype=np.uint8)
        for i in range(n):
            if (i + 1) in plus_qubits:
                x[i, i] = 1
            else:
                z[i, i] = 1
        return cls(n, x, z, np.zeros(n, dtype=np.uint8))

    def copy(self):
        return StabilizerTableau(self.n, self.x.copy(), self.z.copy(),
                                 self.sign.copy())

    # gate updates (columns are qubits; rules follow the Y=(1,1) convention)

    def _h(self, q):
        c = q - 1
        self.sign ^= self.x[:, c] & self.z[:, c]
        self.x[:, c], self.z[:, c] = self.z[:, c].copy(), self.x[:, c].copy()

    def _rz_minus(self, q):  # Z(-pi/4) ~ S: X -> Y, Y -> -X
        c = q - 1
        self.sign ^= self.x[:, c] & self.z[:, c]
        self.z[:, c] ^= self.x[:, c]

    def _rz_plus(self, q):  # Z(+pi/4) ~ Sdg: X -> -Y, Y -> X
        c = q - 1
        self.sign ^= self.x[:, c] & (self.z[:, c] ^ 1)
        self.z[:, c] ^= self.x[:, c]

    def _rx_plus(self, q):  # exp(+i pi/4 X): Z -> Y, Y -> -Z
        c = q - 1
        self.sign ^= self.z[:, c] & self.x[:, c]
        self.x[:, c] ^= self.z[:, c]

    def _rx_minus(self, q):  # exp(-i pi/4 X): Z -> -Y, Y -> Z
        c = q - 1
        self.sign ^= self.z[:, c] & (self.x[:, c] ^ 1)
        self.x[:, c] ^= self.z[:, c]

    def _cnot(self, ctrl, tgt):
        a, b = ctrl - 1, tgt - 1
        self.sign ^= self.x[:, a] & self.z[:, b] & (self.x[:, b] ^ self.z[:, a] ^ 1)
        self.x[:, b] ^= self.x[:, a]
        self.z[:, a] ^= self.z[:, b]

    def apply(self, gate):
        if gate.kind == "H":
            self._h(gate.qubits[0])
        elif gate.kind == "RZ-":
            self._rz_minus(gate.qubits[0])
        elif gate.kind == "RZ+":
            self._rz_plus(gate.qubits[0])
        elif gate.kind == "RX+":
            self._rx_plus(gate.qubits[0])
        elif gate.kind == "RX-":
            self._rx_minus(gate.qubits[0])
        elif gate.kind == "CNOT":
            self._cnot(*gate.qubits)
        elif gate.kind == "CZ":
            a, b = gate.qubits
            self._h(b)
            self._cnot(a, b)
            self._h(b)
        else:
            raise GraphError(f"non-Clifford gate in tableau path: {gate.kind!r}")
        return self

    @classmethod
    def from_circuit(cls, n, gates, plus_qubits):
        t = cls.initial(n, plus_qubits)
        for g in gates:
            t.apply(g)
        return t

    # conversions

    def _row_action(self, i, vec):
        """Apply generator i to a dense state vector."""
        n = self.n
        xmask = 0
        zmask = 0
        ny = 0
        for j in range(n):
            bit = 1 << (n - 1 - j)
            if self.x[i, j]:
                xmask |= bit
            if self.z[i, j]:
                zmask |= bit
            if self.x[i, j] and self.z[i, j]:
                ny += 1
        idx = np.arange(1 << n)
        par = np.zeros(1 << n, dtype=np.int64)
        t = idx & zmask
        while True:
            par ^= t & 1
            t >>= 1
            if not t.any():
                break
        phase = (1j) ** (ny % 4) * (-1.0) ** int(self.sign[i])
        out = np.zeros_like(vec)
        out[idx ^ xmask] = phase * np.where(par, -1.0, 1.0) * vec
        return out

    def statevector(self):
        """Dense unit vector stabilized by all generators (<= ~12 qubits)."""
        size = 1 << self.n
        for start in range(size):
            vec = np.zeros(size, dtype=complex)
            vec[start] = 1.0
            for i in range(self.n):
                vec = 0.5 * (vec + self._row_action(i, vec))
            norm = float(np.vdot(vec, vec).real)
            if norm > 1e-9:
                return qsim.StateVector(self.n, vec / np.sqrt(norm))
        raise GraphError("projector collapsed every basis vector")  # pragma: no cover

    def to_graph(self):
        """The graph whose graph state is local-Clifford equivalent to this
        tableau's state (standard X-block reduction; signs become local
        Paulis and are dropped)."""
        n = self.n
        x = self.x.copy().astype(np.uint8)
        z = self.z.copy().astype(np.uint8)

        def gauss_rank(m):
            m = m.copy()
            r = 0
            for c in range(n):
                piv = None
                for i in range(r, n):
                    if m[i, c]:
                        piv = i
                        break
                if piv is None:
                    continue
                m[[r, piv]] = m[[piv, r]]
                for i in range(n):
                    if i != r and m[i, c]:
                        m[i] ^= m[r]
                r += 1
            return r

        guard = 0
        while gauss_rank(x) < n:
            guard += 1
            if guard > 2 * n:
                raise GraphError("X block cannot be completed")  # pragma: no cover
            # row reduce a copy to find a pure-Z row, then Hadamard a support qubit
            xc, zc = x.copy(), z.copy()
            r = 0
            for c in range(n):
                piv = None
                for i in range(r, n):
                    if xc[i, c]:
                        piv = i
                        break
                if piv is None:
                    continue
                xc[[r, piv]] = xc[[piv, r]]
                zc[[r, piv]] = zc[[piv, r]]
                for i in range(n):
                    if i != r and xc[i, c]:
                        xc[i] ^= xc[r]
                        zc[i] ^= zc[r]
                r += 1
            done = False
            for i in range(r, n):
                support = np.flatnonzero(zc[i])
                if len(support):
                    q = int(support[0])
                    x[:, q], z[:, q] = z[:, q].copy(), x[:, q].copy()
                    done = True
                    break
            if not done:
                raise GraphError("rank-deficient tableau")  # pragma: no cover
        # solve X * A = Z  =>  A = X^-1 Z over GF(2), via joint elimination
        aug = np.concatenate([x, z], axis=1)
        r = 0
        for c in range(n):
            piv = None
            for i in range(r, n):
                if aug[i, c]:
                    piv = i
                    break
            aug[[r, piv]] = aug[[piv, r]]
            for i in range(n):
                if i != r and aug[i, c]:
                    aug[i] ^= aug[r]
            r += 1
        adj = aug[:, n:].copy()
        np.fill_diagonal(adj, 0)  # diagonal entries are local S corrections
        return Graph(n, adj)

    def entanglement(self, part):
        """Bipartite entanglement in ebits across part | complement,
        via the GF(2) rank of the generators restricted to the complement."""
        part = sorted(set(part))
        if not part or len(part) == self.n:
            raise GraphError("cut must be proper and non-empty")
        rest = [q for q in range(1, self.n + 1) if q not in part]
        cols = [q - 1 for q in rest]
        m = np.concatenate([self.x[:, cols], self.z[:, cols]], axis=1).copy()
        rank = 0
        rows, width = m.shape
        for c in range(width):
            piv = None
            for i in range(rank, rows):
                if m[i, c]:
                    piv = i
                    break
            if piv is None:
                continue
            m[[rank, piv]] = m[[piv, rank]]
            for i in range(rows):
                if i != rank and m[i, c]:
                    m[i] ^= m[rank]
            rank += 1
        return len(part) - self.n + rank


def tableau_from_circuit(n, gates, plus_qubits):
    """Stabilizer tableau of a Clifford construction circuit.

    Raises on any non-Clifford gate.
    """
    return StabilizerTableau.from_circuit(n, gates, plus_qubits)


def stabilizer_entanglement(tableau, cut):
    """Bipartite entanglement (ebits) of a stabilizer state across a cut,
    from the GF(2) rank of the restricted generator matrix."""
    return tableau.entanglement(cut)


# ---------------------------------------------------------------------------
# built-in graphs

REP8_EDGES = ((1, 2), (2, 3), (3, 7), (2, 4), (2, 5), (2, 7),
              (4, 6), (4, 8), (5, 8), (6, 7), (7, 8))
REP8_BOB_QUBITS = (6, 7, 8)
MES6_BOB_QUBITS = (1, 2, 3)

_BUILTIN_CACHE = {}


def builtin_graph(name):
    """Built-in graphs: 'rep8' (the 8-qubit resource-state graph) and 'mes6'
    (the graph extracted from the compiled 6-qubit resource)."""
    if name in _BUILTIN_CACHE:
        return _BUILTIN_CACHE[name].copy()
    if name == "rep8":
        g = Graph.from_edges(8, REP8_EDGES)
    elif name == "mes6":
        from . import compiler
        from .canonical_form import cf_circuit
        cp = compiler.compile_sequence(cf_circuit(3, mes=True))
        g = compiler.resource_tableau(cp).to_graph()
    else:
        raise GraphError(f"unknown built-in graph {name!r}")
    _BUILTIN_CACHE[name] = g
    return g.copy()
