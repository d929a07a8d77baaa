# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Same signatures and results as :mod:`hamspec._pykernels`."""

import numpy as np

from libc.stdint cimport int64_t, uint64_t


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


BACKEND = "cython"


def fwht(a):
    """Unnormalized Walsh-Hadamard transform, out[alpha] = sum_x a[x] (-1)^{<alpha,x>}."""
    out = np.array(a, dtype=np.float64, copy=True, order="C")
    cdef double[::1] v = out
    cdef Py_ssize_t size = v.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef double x, y
    with nogil:
        while h < size:
            i = 0
            while i < size:
                for j in range(i, i + h):
                    x = v[j]
                    y = v[j + h]
                    v[j] = x + y
                    v[j + h] = x - y
                i += 2 * h
            h *= 2
    return out


def distance_histogram(words, int n):
    """Counts of unordered pairs i < j by Hamming distance, length n + 1."""
    cdef const uint64_t[::1] w = np.ascontiguousarray(words, dtype=np.uint64)
    hist = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] h = hist
    cdef Py_ssize_t size = w.shape[0], a, b
    cdef uint64_t wa
    with nogil:
        for a in range(size):
            wa = w[a]
            for b in range(a + 1, size):
                h[__builtin_popcountll(wa ^ w[b])] += 1
    return hist


def distance_matrix(words):
    """Symmetric matrix of pairwise Hamming distances (uint8)."""
    cdef const uint64_t[::1] w = np.ascontiguousarray(words, dtype=np.uint64)
    cdef Py_ssize_t size = w.shape[0], a, b
    out = np.zeros((size, size), dtype=np.uint8)
    cdef unsigned char[:, ::1] m = out
    cdef unsigned char dist
    with nogil:
        for a in range(size):
            for b in range(a + 1, size):
                dist = <unsigned char>__builtin_popcountll(w[a] ^ w[b])
                m[a, b] = dist
                m[b, a] = dist
    return out


def close_pair_mask(words, int radius):
    """mask[a] is True iff some other entry of the list lies within distance radius of words[a]."""
    cdef const uint64_t[::1] w = np.ascontiguousarray(words, dtype=np.uint64)
    cdef Py_ssize_t size = w.shape[0], a, b
    out = np.zeros(size, dtype=np.bool_)
    cdef unsigned char[::1] m = out.view(np.uint8)
    with nogil:
        for a in range(size):
            for b in range(a + 1, size):
                if __builtin_popcountll(w[a] ^ w[b]) <= radius:
                    m[a] = 1
                    m[b] = 1
    return out


def common_neighbor_stats(words, int dist):
    """Degrees, sum over (x, y) of M_{x,y}^2 and max over x != y of M_{x,y}.

    M_{x,y} is the number of z with |x - z| = |y - z| = dist, so the second
    value is the trace of the fourth power of the distance-``dist`` adjacency
    matrix. Memory stays linear in the number of words.
    """
    cdef const uint64_t[::1] w = np.ascontiguousarray(words, dtype=np.uint64)
    cdef Py_ssize_t size = w.shape[0], a, b, k, t, z, y, ntouched
    deg_arr = np.zeros(size, dtype=np.int64)
    cdef int64_t[::1] deg = deg_arr
    with nogil:
        for a in range(size):
            for b in range(a + 1, size):
                if __builtin_popcountll(w[a] ^ w[b]) == dist:
                    deg[a] += 1
                    deg[b] += 1
    offsets_arr = np.zeros(size + 1, dtype=np.int64)
    cdef int64_t[::1] off = offsets_arr
    for a in range(size):
        off[a + 1] = off[a] + deg[a]
    nbr_arr = np.zeros(off[size], dtype=np.int64)
    fill_arr = np.array(offsets_arr[:-1], copy=True)
    cdef int64_t[::1] nbr = nbr_arr
    cdef int64_t[::1] fill = fill_arr
    cnt_arr = np.zeros(size, dtype=np.int64)
    touched_arr = np.zeros(size, dtype=np.int64)
    cdef int64_t[::1] cnt = cnt_arr
    cdef int64_t[::1] touched = touched_arr
    cdef int64_t tr4 = 0, best = 0, c
    with nogil:
        for a in range(size):
            for b in range(a + 1, size):
                if __builtin_popcountll(w[a] ^ w[b]) == dist:
                    nbr[fill[a]] = b
                    fill[a] += 1
                    nbr[fill[b]] = a
                    fill[b] += 1
        for a in range(size):
            ntouched = 0
            for k in range(off[a], off[a + 1]):
                z = nbr[k]
                for t in range(off[z], off[z + 1]):
                    y = nbr[t]
                    if cnt[y] == 0:
                        touched[ntouched] = y
                        ntouched += 1
                    cnt[y] += 1
            for k in range(ntouched):
                y = touched[k]
                c = cnt[y]
                tr4 += c * c
                if y != a and c > best:
                    best = c
                cnt[y] = 0
    return deg_arr, int(tr4), int(best)
