"""Graph-diagonal noise modeling, multiparty purification recurrences, and
threshold bisection.

States are diagonal in the graph basis {sigma_z^mu |G>}: a probability vector
over 2^n labels (bit j of a label, counted with qubit 1 as MSB, flags a
z-type flip on qubit j).  Local depolarizing noise keeps this family closed:
a z error on qubit j flips bit j, an x error flips j's neighbourhood, a y
error flips both.

The two-copy sub-protocol for a color class C keeps one copy, coincidence-
filters the C bits and XOR-combines the remaining bits:

    out[g] = K^-1 * sum over pairs (mu, nu) with mu_C = nu_C = g_C
             and mu_rest ^ nu_rest = g_rest of  in[mu] * in[nu]

with the success probability K = sum over pairs with mu_C = nu_C.  For a
2-colorable graph and a proper color class this is exactly the bilateral
CNOT + syndrome measurement recurrence; for denser graphs the same map is
adopted as the per-class round (the dense test oracle realizes it with a
compensating diagonal layer).  Published threshold anchors are reproduced
for the 2-color scenarios; multi-color round scheduling is a free choice
that moves thresholds substantially, so those scenarios may deviate and the
search reports trajectory diagnostics instead of hiding the mismatch.
"""

import itertools
import logging
import math
import time

import numpy as np

from . import qsim, graphstab, kernels

logger = logging.getLogger(__name__)

# Documented comparison constants for protocols this package does not
# implement: best-known local depolarizing thresholds for purifying the
# 3-qubit W state and the 3-qubit pi-phase locally maximally entanglable
# state, plus the bipartite teleportation route.
REFERENCE_THRESHOLDS = {
    "w_state_protocol": 0.69,
    "lme_protocol": 0.81,
    "bipartite_teleport": 1.0 / 3.0,
}


class PurificationError(Exception):
    pass


class NoiseSpec:
    """Per-qubit depolarizing survival parameters (1.0 = noiseless)."""

    __slots__ = ("survival",)

    def __init__(self, survival):
        arr = np.asarray(survival, dtype=float)
        if ((arr < 0.0) | (arr > 1.0)).any():
            raise PurificationError("survival parameters must lie in [0, 1]")
        self.survival = arr

    @classmethod
    def uniform(cls, n, transmitted, p, q=1.0):
        """p on the transmitted qubits, q on the kept ones."""
        s = np.full(n, float(q))
        for j in transmitted:
            s[j - 1] = p
        return cls(s)


class GraphDiagonalState:
    """Probability vector over the 2^n graph-basis labels of a graph."""

    __slots__ = ("graph", "probs")

    def __init__(self, graph, probs):
        probs = np.asarray(probs, dtype=float)
        if probs.shape != (1 << graph.n,):
            raise PurificationError("population vector has wrong length")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise PurificationError("populations must sum to 1")
        if probs.min() < -1e-14:
            raise PurificationError("negative population")
        if probs.min() < 0.0:
            logger.warning("clamping tiny negative populations (min %.3e)",
                           probs.min())
            probs = np.clip(probs, 0.0, None)
            probs = probs / probs.sum()
        self.graph = graph
        self.probs = probs

    @classmethod
    def pure(cls, graph):
        probs = np.zeros(1 << graph.n)
        probs[0] = 1.0
        return cls(graph, probs)

    @property
    def fidelity(self):
        return float(self.probs[0])


def _neighborhood_mask(g, j):
    m = 0
    for k in g.neighbors(j):
        m |= 1 << (g.n - k)
    return m


def noisy_graph_state(graph, noise):
    """Graph-diagonal populations of the graph state after local depolarizing
    noise with the given per-qubit survival parameters."""
    if noise.survival.shape != (graph.n,):
        raise PurificationError("noise spec has wrong qubit count")
    probs = np.zeros(1 << graph.n)
    probs[0] = 1.0
    for j in range(1, graph.n + 1):
        s = float(noise.survival[j - 1])
        if s >= 1.0:
            continue
        w_keep = s + (1.0 - s) / 4.0
        w_flip = (1.0 - s) / 4.0
        mask_z = 1 << (graph.n - j)
        mask_x = _neighborhood_mask(graph, j)
        probs = kernels.depolarize_step(probs, mask_z, mask_x, w_keep, w_flip)
    return GraphDiagonalState(graph, probs)


_PERM_CACHE = {}


def _class_permutation(n, class_mask):
    """Index permutation grouping labels as (class bits, rest bits)."""
    key = (n, class_mask)
    if key not in _PERM_CACHE:
        cbits = [b for b in range(n - 1, -1, -1) if (class_mask >> b) & 1]
        rbits = [b for b in range(n - 1, -1, -1) if not (class_mask >> b) & 1]
        perm = np.empty(1 << n, dtype=np.int64)
        for mu in range(1 << n):
            c = 0
            for b in cbits:
                c = (c << 1) | ((mu >> b) & 1)
            r = 0
            for b in rbits:
                r = (r << 1) | ((mu >> b) & 1)
            perm[(c << len(rbits)) | r] = mu
        _PERM_CACHE[key] = (perm, len(cbits), len(rbits))
    return _PERM_CACHE[key]


def _mask_of(n, qubits):
    m = 0
    for q in qubits:
        m |= 1 << (n - q)
    return m


def subprotocol(state, color_class):
    """One two-copy purification round for a color class.

    Returns (new_state, success_probability).  The class must be an
    independent set of the state's graph.
    """
    g = state.graph
    cls = sorted(set(color_class))
    for a, b in itertools.combinations(cls, 2):
        if g.adj[a - 1, b - 1]:
            raise PurificationError(f"class {cls} is not independent ({a}-{b})")
    perm, nc, nr = _class_permutation(g.n, _mask_of(g.n, cls))
    blocks = state.probs[perm].reshape(1 << nc, 1 << nr)
    out, K = kernels.xor_pair_square(np.ascontiguousarray(blocks))
    if K <= 1e-300:
        raise PurificationError("success probability vanished")
    probs = np.empty_like(state.probs)
    probs[perm] = (out / K).ravel()
    return GraphDiagonalState(g, probs), float(K)


class PurifyResult:
    __slots__ = ("converged", "iterations", "trajectory", "final_state")

    def __init__(self, converged, iterations, trajectory, final_state):
        self.converged = converged
        self.iterations = iterations
        self.trajectory = trajectory
        self.final_state = final_state


def purify_iterate(initial, color_cycle, max_iter=500, target=1.0 - 1e-6,
                   fail_after=50):
    """Apply sub-protocol rounds cyclically over the color classes.

    Succeeds when the fidelity reaches ``target``; fails after ``max_iter``
    rounds or once the fidelity has sat below its initial value for
    ``fail_after`` consecutive rounds.
    """
    state = initial
    f0 = state.fidelity
    trajectory = [f0]
    if f0 >= target:
        return PurifyResult(True, 0, trajectory, state)
    below = 0
    for it in range(1, max_iter + 1):
        state, _ = subprotocol(state, color_cycle[(it - 1) % len(color_cycle)])
        f = state.fidelity
        trajectory.append(f)
        if f >= target:
            return PurifyResult(True, it, trajectory, state)
        if f < f0:
            below += 1
            if below >= fail_after:
                return PurifyResult(False, it, trajectory, state)
        else:
            below = 0
    return PurifyResult(False, max_iter, trajectory, state)


def candidate_color_cycles(graph, coloring, noisy_qubits):
    """Cycle candidates: every class containing a noisy qubit is required;
    classes touched only through neighbours of noisy qubits are optional.

    A neighbour-only class picks up label errors solely through correlations,
    which the required rounds may already filter (that is what reduces the
    8-qubit three-coloring to a two-class cycle when the kept qubits are
    noiseless), but skipping it can also strand those errors, so the search
    tries both and keeps whichever purifies at lower noise.
    """
    noisy = set(noisy_qubits)
    contaminated = set(noisy)
    for j in noisy:
        contaminated.update(graph.neighbors(j))
    required = [set(c) for c in coloring if set(c) & noisy]
    optional = [set(c) for c in coloring
                if not (set(c) & noisy) and (set(c) & contaminated)]
    if not required:
        raise PurificationError("no color class carries noise")
    candidates = []
    for r in range(len(optional) + 1):
        for extra in itertools.combinations(optional, r):
            candidates.append(required + list(extra))
    return candidates


class ThresholdResult:
    __slots__ = ("p_star", "order", "samples", "monotone",
                 "iterations_at_threshold", "seconds", "trajectory_at_ref")

    def __init__(self, p_star, order, samples, monotone,
                 iterations_at_threshold, seconds):
        self.p_star = p_star
        self.order = order
        self.samples = samples
        self.monotone = monotone
        self.iterations_at_threshold = iterations_at_threshold
        self.seconds = seconds
        self.trajectory_at_ref = None

    def to_dict(self):
        return {"p_star": self.p_star,
                "order": [sorted(c) for c in self.order],
                "monotone": self.monotone,
                "iterations_at_threshold": self.iterations_at_threshold,
                "seconds": self.seconds}


def _bisect_cycle(graph, cycle, transmitted, q, tol, max_iter, target):
    samples = []

    def converges(p):
        noise = NoiseSpec.uniform(graph.n, transmitted, p, q)
        res = purify_iterate(noisy_graph_state(graph, noise), cycle,
                             max_iter=max_iter, target=target)
        samples.append((p, res.converged, res.iterations))
        return res

    top = converges(1.0)
    if not top.converged:
        return math.nan, samples, 0
    lo, hi = 0.0, 1.0
    it_at = top.iterations
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        res = converges(mid)
        if res.converged:
            hi = mid
            it_at = res.iterations
        else:
            lo = mid
    return 0.5 * (lo + hi), samples, it_at


def threshold_search(graph, coloring, transmitted, q, tol=1e-3,
                     max_iter=500, target=1.0 - 1e-6):
    """Bisect the transmitted-noise level at which purification starts to
    succeed (p on ``transmitted``, q elsewhere).

    Every candidate class set (see :func:`candidate_color_cycles`) and every
    cyclic order of it is bisected; the best (lowest) threshold is returned
    with its order.  Monotonicity of the converged/failed predicate is
    assumed by bisection and spot-checked around the returned threshold; a
    violation is reported in the result and logged, never silently ignored.
    """
    if tol <= 0:
        raise PurificationError("tolerance must be positive")
    t0 = time.perf_counter()
    noisy = transmitted if q >= 1.0 else range(1, graph.n + 1)
    best = None
    for classes in candidate_color_cycles(graph, coloring, noisy):
        for perm in itertools.permutations(classes):
            p_star, samples, it_at = _bisect_cycle(graph, list(perm),
                                                   transmitted, q, tol,
                                                   max_iter, target)
            if math.isnan(p_star):
                continue
            if best is None or p_star < best[0]:
                best = (p_star, list(perm), samples, it_at)
    if best is None:
        raise PurificationError("purification never converges, even at p = 1")
    p_star, order, samples, it_at = best

    def converged_at(p):
        noise = NoiseSpec.uniform(graph.n, transmitted, p, q)
        return purify_iterate(noisy_graph_state(graph, noise), order,
                              max_iter=max_iter, target=target).converged

    monotone = True
    hi_probe = min(1.0, p_star + 0.05)
    lo_probe = max(0.0, p_star - 0.05)
    if not converged_at(hi_probe) or (lo_probe < p_star - tol
                                      and converged_at(lo_probe)):
        monotone = False
        logger.warning("threshold predicate not monotone around p*=%.4f", p_star)
    result = ThresholdResult(p_star, order, samples, monotone, it_at,
                             time.perf_counter() - t0)
    return result


def attach_reference_trajectory(result, graph, coloring, transmitted, q,
                                p_ref, max_iter=500, target=1.0 - 1e-6):
    """Record the fidelity trajectory at a reference noise level (diagnostics
    for threshold anchors that the cyclic schedule does not reproduce)."""
    noise = NoiseSpec.uniform(graph.n, transmitted, p_ref, q)
    res = purify_iterate(noisy_graph_state(graph, noise), result.order,
                         max_iter=max_iter, target=target)
    result.trajectory_at_ref = res.trajectory
    return result


# ---------------------------------------------------------------------------
# scenario builders for the two built-in resources


def rep8_scenario():
    """(graph, coloring) for the 8-qubit resource graph: a proper 3-coloring
    whose third class is a single vertex held by the sender."""
    g = graphstab.builtin_graph("rep8")
    col = graphstab.singleton_third_color_coloring(
        g, excluded=graphstab.REP8_BOB_QUBITS)
    if col is None:
        raise PurificationError("no singleton third-color coloring found")
    return g, [set(c) for c in col]


def mes6_scenario():
    """(graph, coloring) for the 6-qubit resource: its first 2-colorable
    local-complementation image (labels preserved, so noise supports carry
    over) with the bipartition as coloring."""
    g = graphstab.builtin_graph("mes6")
    bip = graphstab.bipartite_lc_representative(g)
    if bip is None:
        raise PurificationError("no bipartite LC image found")
    a, b = graphstab.two_coloring(bip)
    return bip, [a, b]


def scenario(name):
    if name == "rep8":
        return rep8_scenario()
    if name == "mes6":
        return mes6_scenario()
    raise PurificationError(f"unknown scenario {name!r}")


def variant_thresholds(tol=1e-3):
    """Two-transmitted-qubit scenarios: every choice of retained receiver
    qubit is computed and reported (which qubit the co-located party keeps is
    a free choice of the setup)."""
    rows = []
    g8, col8 = rep8_scenario()
    for q in (0.99, 0.97):
        for keep in graphstab.REP8_BOB_QUBITS:
            transmitted = tuple(x for x in graphstab.REP8_BOB_QUBITS if x != keep)
            res = threshold_search(g8, col8, transmitted, q, tol=tol)
            rows.append({"graph": "rep8", "q": q, "transmitted": transmitted,
                         "kept_receiver_qubit": keep, "p_star": res.p_star,
                         "iterations_at_threshold": res.iterations_at_threshold,
                         "seconds": res.seconds})
    g6, col6 = mes6_scenario()
    for keep in graphstab.MES6_BOB_QUBITS:
        transmitted = tuple(x for x in graphstab.MES6_BOB_QUBITS if x != keep)
        res = threshold_search(g6, col6, transmitted, 1.0, tol=tol)
        rows.append({"graph": "mes6", "q": 1.0, "transmitted": transmitted,
                     "kept_receiver_qubit": keep, "p_star": res.p_star,
                     "iterations_at_threshold": res.iterations_at_threshold,
                     "seconds": res.seconds})
    return rows


# ---------------------------------------------------------------------------
# comparison computations


def one_sided_bell_fidelity(p):
    """Fidelity of a Bell pair after one-sided depolarizing: p + (1 - p)/4."""
    return p + (1.0 - p) / 4.0


def bipartite_teleport_threshold():
    """Noise level where the one-sided depolarized Bell fidelity crosses 1/2.

    Solving p + (1 - p)/4 = 1/2 gives exactly 1/3; the numeric confirmation
    lives in the test suite's density-matrix oracle.
    """
    return 1.0 / 3.0


def w_ppt_boundary(tol=1e-3):
    """Depolarizing survival level where the three-qubit W state output stops
    being negative under partial transposition (any single-qubit cut)."""
    w = qsim.DensityMatrix.from_statevector(qsim.StateVector.w(3))

    def min_eig(p):
        rho = w
        for j in (1, 2, 3):
            rho = qsim.depolarize(rho, j, p)
        return qsim.ppt_min_eigenvalue(rho, [1])

    if min_eig(1.0) >= 0 or min_eig(0.0) < -1e-12:
        raise PurificationError("unexpected PPT structure at the endpoints")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if min_eig(mid) < 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
