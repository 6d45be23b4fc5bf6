# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring wuglabels._fallback bit for bit."""

from cpython.mem cimport PyMem_Free, PyMem_Malloc

cdef unsigned long long FNV_OFFSET = 0xCBF29CE484222325ULL
cdef unsigned long long FNV_PRIME = 0x100000001B3ULL


def lcs_length(a, b):
    """Length of the longest common subsequence of two int sequences."""
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0 or lb == 0:
        return 0
    if lb > la:  # roll over the shorter side
        a, b = b, a
        la, lb = lb, la
    cdef long long *aa = <long long *> PyMem_Malloc(la * sizeof(long long))
    cdef long long *bb = <long long *> PyMem_Malloc(lb * sizeof(long long))
    cdef long long *prev = <long long *> PyMem_Malloc((lb + 1) * sizeof(long long))
    cdef long long *cur = <long long *> PyMem_Malloc((lb + 1) * sizeof(long long))
    if aa == NULL or bb == NULL or prev == NULL or cur == NULL:
        PyMem_Free(aa); PyMem_Free(bb); PyMem_Free(prev); PyMem_Free(cur)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef long long ai, pj, cj, out
    cdef long long *tmp
    try:
        for i in range(la):
            aa[i] = a[i]
        for j in range(lb):
            bb[j] = b[j]
        for j in range(lb + 1):
            prev[j] = 0
            cur[j] = 0
        for i in range(la):
            ai = aa[i]
            for j in range(lb):
                if ai == bb[j]:
                    cur[j + 1] = prev[j] + 1
                else:
                    pj = prev[j + 1]
                    cj = cur[j]
                    cur[j + 1] = pj if pj >= cj else cj
            tmp = prev; prev = cur; cur = tmp
        out = prev[lb]
    finally:
        PyMem_Free(aa); PyMem_Free(bb); PyMem_Free(prev); PyMem_Free(cur)
    return out


cdef inline unsigned long long _fnv1a_span(Py_UCS4 *cps, Py_ssize_t start,
                                           Py_ssize_t length,
                                           unsigned long long seed):
    cdef unsigned long long h = FNV_OFFSET ^ seed
    cdef Py_ssize_t i
    cdef unsigned long long cp
    cdef int shift
    for i in range(start, start + length):
        cp = <unsigned long long> cps[i]
        for shift in range(0, 32, 8):
            h ^= (cp >> shift) & 0xFFULL
            h *= FNV_PRIME
    return h


def hash_ngram_counts(unicode text, Py_ssize_t dim, Py_ssize_t ngram,
                      unsigned long long seed):
    """Fold character n-gram counts of `text` into `dim` hash buckets."""
    counts = [0.0] * dim
    cdef Py_ssize_t n = len(text)
    if n == 0:
        return counts
    cdef Py_UCS4 *cps = <Py_UCS4 *> PyMem_Malloc(n * sizeof(Py_UCS4))
    if cps == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef unsigned long long h
    try:
        for i in range(n):
            cps[i] = text[i]
        if n < ngram:
            h = _fnv1a_span(cps, 0, n, seed)
            counts[<Py_ssize_t> (h % <unsigned long long> dim)] += 1.0
        else:
            for i in range(n - ngram + 1):
                h = _fnv1a_span(cps, i, ngram, seed)
                counts[<Py_ssize_t> (h % <unsigned long long> dim)] += 1.0
    finally:
        PyMem_Free(cps)
    return counts
