"""Backend cross-checks for the hot kernels."""

import os
import subprocess
import sys

import numpy as np
import pytest

from repkit.kernels import _numpy as knp

try:
    from repkit.kernels import _numba as knb
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def brute_xor_pair_square(w):
    nb, size = w.shape
    out = np.zeros_like(w)
    for c in range(nb):
        for i in range(size):
            for j in range(size):
                out[c, i ^ j] += w[c, i] * w[c, j]
    k = float((w.sum(axis=1) ** 2).sum())
    return out, k


def test_numpy_kernel_matches_brute_force(rng):
    for shape in ((2, 8), (4, 16), (1, 32)):
        w = rng.random(shape)
        got, k_got = knp.xor_pair_square(w)
        want, k_want = brute_xor_pair_square(w)
        assert np.abs(got - want).max() < 1e-12
        assert abs(k_got - k_want) < 1e-12


@pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")
def test_backends_agree_on_xor_pair_square(rng):
    for shape in ((2, 8), (8, 32), (1, 128)):
        w = rng.random(shape)
        a, ka = knp.xor_pair_square(w)
        b, kb = knb.xor_pair_square(w)
        assert np.abs(a - b).max() / np.abs(a).max() < 1e-12
        assert abs(ka - kb) / ka < 1e-12


def test_numpy_depolarize_step_matches_manual(rng):
    pops = rng.random(16)
    pops /= pops.sum()
    mz, mx = 0b0100, 0b0011
    w0, wf = 0.85, 0.05
    got = knp.depolarize_step(pops, mz, mx, w0, wf)
    want = np.empty_like(pops)
    for i in range(16):
        want[i] = (w0 * pops[i] + wf * (pops[i ^ mz] + pops[i ^ mx]
                                        + pops[i ^ mz ^ mx]))
    assert np.abs(got - want).max() < 1e-15


@pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")
def test_backends_agree_on_depolarize_step(rng):
    pops = rng.random(256)
    pops /= pops.sum()
    a = knp.depolarize_step(pops, 0b10, 0b110, 0.9, 0.025)
    b = knb.depolarize_step(pops, 0b10, 0b110, 0.9, 0.025)
    assert np.abs(a - b).max() < 1e-15


def test_env_flag_selects_numpy_backend():
    code = ("import repkit.kernels as k; "
            "print(k.BACKEND)")
    env = dict(os.environ, REPKIT_KERNELS="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_env_flag_rejects_garbage():
    code = "import repkit.kernels"
    env = dict(os.environ, REPKIT_KERNELS="cuda")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.returncode != 0


def test_thresholds_agree_across_backends():
    # the mes6 two-color threshold computed by each backend in a subprocess
    code = (
        "from repkit import purification as pu\n"
        "g, col = pu.mes6_scenario()\n"
        "r = pu.threshold_search(g, col, (1, 2, 3), 1.0, tol=2e-3)\n"
        "print(f'{r.p_star:.4f}')\n"
    )
    values = {}
    for backend in ("numpy", "numba"):
        env = dict(os.environ, REPKIT_KERNELS=backend)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        if out.returncode != 0 and backend == "numba":
            pytest.skip("numba unavailable in subprocess")
        assert out.returncode == 0, out.stderr
        values[backend] = float(out.stdout.strip())
    assert abs(values["numpy"] - values["numba"]) < 5e-3
