"""Compiled inner loops for the Lambda double sum.

Inputs are split into real and imaginary float arrays so the zeta loop
vectorizes. The reduction is reassociated for SIMD, but its order is fixed
by the compiled code, so a row's value does not depend on how rows are split
across threads and repeated runs agree bit for bit.
"""
import numpy as np
from numba import njit

# reassociation lets the row sum vectorize; no finite-math or NaN assumptions
_FASTMATH = {"reassoc", "contract", "nsz", "arcp"}


@njit(cache=True, nogil=True, fastmath=_FASTMATH)
def quotient_rows_circulant(fzr, fzi, fer, fei, inv2, k0, k1):
    # equal grid sizes: 1/|zeta_j - eta_k| = inv2[j - k + M]
    M = fzr.size
    out = np.empty(k1 - k0)
    for k in range(k0, k1):
        ar = fer[k]
        ai = fei[k]
        base = M - k
        s = 0.0
        for j in range(M):
            dr = fzr[j] - ar
            di = fzi[j] - ai
            s += np.sqrt(dr * dr + di * di) * inv2[j + base]
        out[k - k0] = s / M
    return out


@njit(cache=True, nogil=True, fastmath=_FASTMATH)
def quotient_rows_general(fzr, fzi, fer, fei, zr, zi, er, ei, k0, k1):
    M = fzr.size
    out = np.empty(k1 - k0)
    for k in range(k0, k1):
        ar = fer[k]
        ai = fei[k]
        br = er[k]
        bi = ei[k]
        s = 0.0
        for j in range(M):
            dr = fzr[j] - ar
            di = fzi[j] - ai
            xr = zr[j] - br
            xi = zi[j] - bi
            s += np.sqrt((dr * dr + di * di) / (xr * xr + xi * xi))
        out[k - k0] = s / M
    return out
