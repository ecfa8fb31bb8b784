# cython: boundscheck=False, wraparound=False
"""C kernel for the edit-distance inner loop.

The Python fallback in :mod:`tunegram.metrics` computes exactly the
same DP; this exists only because corpus experiments call levenshtein
tens of thousands of times on tunes hundreds of notes long.
"""

from libc.stdlib cimport free, malloc


def levenshtein_ints(a, b):
    """Unit-cost edit distance between two int sequences."""
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(b)
    if m == 0:
        return n
    if n == 0:
        return m
    cdef long long *va = <long long *> malloc(m * sizeof(long long))
    cdef long long *vb = <long long *> malloc(n * sizeof(long long))
    cdef Py_ssize_t *row = <Py_ssize_t *> malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, j, above, left, diag, cur
    cdef long long x
    if va == NULL or vb == NULL or row == NULL:
        free(va)
        free(vb)
        free(row)
        raise MemoryError()
    try:
        for i in range(m):
            va[i] = a[i]
        for j in range(n):
            vb[j] = b[j]
        for j in range(n + 1):
            row[j] = j
        for i in range(m):
            diag = row[0]
            row[0] = i + 1
            x = va[i]
            for j in range(1, n + 1):
                above = row[j]
                cur = above + 1
                left = row[j - 1] + 1
                if left < cur:
                    cur = left
                if x != vb[j - 1]:
                    diag += 1
                if diag < cur:
                    cur = diag
                diag = above
                row[j] = cur
        return row[n]
    finally:
        free(va)
        free(vb)
        free(row)
