"""Pure-numpy Walsh-Hadamard butterfly, unnormalized.

Stage order ascending, index order ascending within each stage: each
output element is a single add/subtract of two stage inputs, so the
result is bit-identical to the compiled kernel.
"""

import numpy as np


def wht_inplace(a: np.ndarray) -> None:
    n = a.size
    h = 1
    while h < n:
        b = a.reshape(-1, 2 * h)
        lo = b[:, :h].copy()
        hi = b[:, h:].copy()
        b[:, :h] = lo + hi
        b[:, h:] = lo - hi
        h *= 2
