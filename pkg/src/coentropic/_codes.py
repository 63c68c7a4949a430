"""Compiled helpers for graphs packed into integer codes.

A code stores the upper-triangle adjacency bits in graph6 order (column by
column: x01, x02, x12, x03, ...), first bit most significant.  For
``n <= 11`` a code fits in an int64.
"""

import numpy as np
from numba import njit

MAX_CODE_N = 11


@njit(cache=True)
def code_to_masks(code, n, masks):
    nbits = n * (n - 1) // 2
    for v in range(n):
        masks[v] = 0
    k = nbits - 1
    for j in range(1, n):
        for i in range(j):
            if (code >> k) & 1:
                masks[i] |= np.int64(1) << j
                masks[j] |= np.int64(1) << i
            k -= 1


@njit(cache=True)
def masks_to_code(masks, n):
    code = np.int64(0)
    for j in range(1, n):
        for i in range(j):
            code = (code << 1) | ((masks[j] >> i) & 1)
    return code


@njit(cache=True)
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def is_connected_masks(masks, n):
    if n <= 1:
        return True
    seen = np.int64(1)
    frontier = np.int64(1)
    full = (np.int64(1) << n) - 1
    while frontier:
        nxt = np.int64(0)
        for v in range(n):
            if (frontier >> v) & 1:
                nxt |= masks[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == full
