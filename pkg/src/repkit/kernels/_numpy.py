"""Pure-numpy implementations of the hot kernels.

The XOR self-convolution uses a fast Walsh-Hadamard transform instead of the
pairwise loop; results agree with the numba path to floating-point noise.
"""

import numpy as np


def _fwht(a):
    """Walsh-Hadamard transform along the last axis (length must be 2**k)."""
    a = a.copy()
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        a = a.reshape(-1, size // (2 * h), 2, h)
        x = a[:, :, 0, :].copy()
        y = a[:, :, 1, :].copy()
        a[:, :, 0, :] = x + y
        a[:, :, 1, :] = x - y
        a = a.reshape(*lead, size)
        h *= 2
    return a


def xor_pair_square(w):
    """Blockwise XOR self-convolution; see the numba twin for the contract."""
    size = w.shape[-1]
    sums = w.sum(axis=1)
    K = float((sums * sums).sum())
    t = _fwht(w)
    out = _fwht(t * t) / size
    return out, K


def depolarize_step(pops, mask_z, mask_x, w_keep, w_flip):
    """One qubit's depolarizing action on graph-basis populations."""
    idx = np.arange(pops.shape[0])
    return (w_keep * pops
            + w_flip * (pops[idx ^ mask_z] + pops[idx ^ mask_x]
                        + pops[idx ^ (mask_z ^ mask_x)]))
