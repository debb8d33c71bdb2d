# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-enumeration kernel.

Same contract as qreliab._purecount; used for brute-force model counting
where the 2**n loop dominates.
"""

from libc.stdlib cimport free, malloc

from qreliab._purecount import minimize_masks


def count_containing_any(int nbits, masks):
    """Number of x in [0, 2**nbits) such that x is a superset of some mask."""
    if nbits < 0 or nbits > 62:
        raise ValueError("nbits out of range for the compiled kernel")
    kept = minimize_masks(masks)
    if not kept:
        return 0
    if kept[0] == 0:
        return 1 << nbits

    cdef Py_ssize_t k = len(kept)
    cdef unsigned long long *marr = <unsigned long long *> malloc(
        k * sizeof(unsigned long long))
    if marr == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(k):
        marr[i] = kept[i]

    cdef unsigned long long total = 1ULL << nbits
    cdef unsigned long long x, m, count = 0
    cdef Py_ssize_t j
    try:
        for x in range(total):
            for j in range(k):
                m = marr[j]
                if (x & m) == m:
                    count += 1
                    break
    finally:
        free(marr)
    return count
