# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. ``_fallback.py`` mirrors every function here bit for bit."""

import numpy as np
cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t

cnp.import_array()


cdef inline Py_ssize_t _find(cnp.int64_t* parent, Py_ssize_t x) noexcept nogil:
    cdef Py_ssize_t root = x
    cdef Py_ssize_t nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def component_labels(Py_ssize_t n, const cnp.int64_t[::1] src, const cnp.int64_t[::1] dst):
    """Union-find over an edge list; each node is labelled with the smallest id in its component."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] parent = np.arange(n, dtype=np.int64)
    cdef cnp.int64_t* p = <cnp.int64_t*> parent.data
    cdef Py_ssize_t i, a, b, e = src.shape[0]
    if dst.shape[0] != e:
        raise ValueError("src and dst differ in length")
    with nogil:
        for i in range(e):
            a = _find(p, src[i])
            b = _find(p, dst[i])
            if a < b:
                p[b] = a
            elif b < a:
                p[a] = b
        for i in range(n):
            p[i] = _find(p, i)
    return parent


def ba_edges(Py_ssize_t n, Py_ssize_t m_attach, Py_ssize_t seed_size, rng):
    """Preferential-attachment edge list, drawing one double per endpoint sample from ``rng``."""
    cdef Py_ssize_t seed_edges = seed_size * (seed_size - 1) // 2
    cdef Py_ssize_t total = seed_edges + (n - seed_size) * m_attach
    cdef cnp.ndarray[cnp.int64_t, ndim=1] src = np.empty(total, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dst = np.empty(total, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ends = np.empty(2 * total + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] chosen = np.empty(max(m_attach, 1), dtype=np.int64)
    cdef Py_ssize_t i, j, t, k = 0, n_ends = 0, n_chosen, idx, pool
    cdef cnp.int64_t x
    cdef bint dup
    cdef double u
    cdef bitgen_t* bitgen = <bitgen_t*> PyCapsule_GetPointer(rng.bit_generator.capsule, "BitGenerator")

    for i in range(seed_size):
        for j in range(i + 1, seed_size):
            src[k] = i
            dst[k] = j
            ends[n_ends] = i
            ends[n_ends + 1] = j
            n_ends += 2
            k += 1

    with rng.bit_generator.lock, nogil:
        for t in range(seed_size, n):
            n_chosen = 0
            pool = n_ends if n_ends > 0 else t
            while n_chosen < m_attach:
                u = bitgen.next_double(bitgen.state)
                idx = <Py_ssize_t> (u * pool)
                if idx >= pool:
                    idx = pool - 1
                x = ends[idx] if n_ends > 0 else idx
                dup = False
                for j in range(n_chosen):
                    if chosen[j] == x:
                        dup = True
                        break
                if not dup:
                    chosen[n_chosen] = x
                    n_chosen += 1
            for j in range(n_chosen):
                src[k] = t
                dst[k] = chosen[j]
                ends[n_ends] = t
                ends[n_ends + 1] = chosen[j]
                n_ends += 2
                k += 1
    return src, dst
