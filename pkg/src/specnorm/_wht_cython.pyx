# cython: boundscheck=False, wraparound=False, cdivision=True
"""In-place Walsh-Hadamard butterfly, unnormalized.

Same stage/index order as the pure-python kernel so both backends
produce bit-identical output.
"""


def wht_inplace(double[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef double x, y
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h *= 2
