"""Numba implementations of the hot kernels."""

import numpy as np
from numba import njit


@njit(cache=True)
def xor_pair_square(w):
    """Blockwise XOR self-convolution of population blocks.

    w has shape (n_blocks, block_len).  Returns (out, K) where
    out[c, g] = sum_{i ^ j == g} w[c, i] * w[c, j] and
    K = sum_c (sum_i w[c, i])**2.
    """
    nb, size = w.shape
    out = np.zeros_like(w)
    K = 0.0
    for c in range(nb):
        s = 0.0
        for i in range(size):
            s += w[c, i]
        K += s * s
        for i in range(size):
            wi = w[c, i]
            if wi == 0.0:
                continue
            for j in range(size):
                out[c, i ^ j] += wi * w[c, j]
    return out, K


@njit(cache=True)
def depolarize_step(pops, mask_z, mask_x, w_keep, w_flip):
    """One qubit's depolarizing action on graph-basis populations.

    mask_z / mask_x are the index flips induced by a z / x error on the
    qubit (the y flip is their XOR); w_keep weights the unflipped branch
    and w_flip each of the three flipped branches.
    """
    size = pops.shape[0]
    mask_y = mask_z ^ mask_x
    out = np.empty_like(pops)
    for i in range(size):
        out[i] = (w_keep * pops[i]
                  + w_flip * (pops[i ^ mask_z] + pops[i ^ mask_x] + pops[i ^ mask_y]))
    return out
