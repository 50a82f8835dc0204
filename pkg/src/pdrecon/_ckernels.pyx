# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bit-parallel kernels; API mirrors ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.stdlib cimport malloc, free
from libcpp.vector cimport vector

cnp.import_array()

cdef enum:
    K_DOM = 0
    K_PD = 1
    K_ZF = 2

DOM, PD, ZF = K_DOM, K_PD, K_ZF


cdef extern from *:
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil


cdef inline uint64_t _full(int n) nogil:
    if n >= 64:
        return <uint64_t>0xFFFFFFFFFFFFFFFF
    return (<uint64_t>1 << n) - 1


cdef inline uint64_t _closure(const uint64_t* adj, int n, uint64_t start, int kind) nogil:
    cdef uint64_t full = _full(n)
    cdef uint64_t obs = start, m, new, un
    cdef int v
    if kind != K_ZF:
        m = start
        while m:
            v = ctz64(m)
            m &= m - 1
            obs |= adj[v]
        if kind == K_DOM:
            return obs
    while obs != full:
        new = 0
        m = obs
        while m:
            v = ctz64(m)
            m &= m - 1
            un = adj[v] & ~obs
            if un and not (un & (un - 1)):
                new |= un
        if not new:
            break
        obs |= new
    return obs


cdef cnp.ndarray _as_adj(adj):
    return np.ascontiguousarray(adj, dtype=np.uint64)


def closure(adj, int n, start, int kind):
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] a = _as_adj(adj)
    return int(_closure(<uint64_t*>a.data, n, <uint64_t>start, kind))


def closure_many(adj, int n, masks, int kind):
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] a = _as_adj(adj)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] ms = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef Py_ssize_t i, m = ms.shape[0]
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] out = np.empty(m, dtype=np.uint64)
    cdef uint64_t* ap = <uint64_t*>a.data
    with nogil:
        for i in range(m):
            out[i] = _closure(ap, n, ms[i], kind)
    return out


def xset_table(adj, int n, int kind):
    if n > 30:
        raise ValueError("xset_table supports n <= 30")
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] a = _as_adj(adj)
    cdef uint64_t size = <uint64_t>1 << n
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.empty(size, dtype=np.uint8)
    cdef uint64_t s, full = _full(n)
    cdef uint64_t* ap = <uint64_t*>a.data
    with nogil:
        for s in range(size):
            out[s] = _closure(ap, n, s, kind) == full
    return out.view(np.bool_)


def xsets_of_size(adj, int n, int kind, int c, avoid):
    """All c-subsets that contain no mask of ``avoid`` and are X-sets."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] a = _as_adj(adj)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] av = np.ascontiguousarray(avoid, dtype=np.uint64)
    cdef uint64_t* ap = <uint64_t*>a.data
    cdef uint64_t* avp = <uint64_t*>av.data
    cdef Py_ssize_t na = av.shape[0], j
    cdef uint64_t full = _full(n), mask
    cdef vector[uint64_t] found
    cdef int i, skip
    cdef int* idx
    if c < 0 or c > n:
        return np.zeros(0, dtype=np.uint64)
    idx = <int*>malloc((c + 1) * sizeof(int))
    try:
        with nogil:
            for i in range(c):
                idx[i] = i
            while True:
                mask = 0
                for i in range(c):
                    mask |= (<uint64_t>1) << idx[i]
                skip = 0
                for j in range(na):
                    if (mask & avp[j]) == avp[j]:
                        skip = 1
                        break
                if not skip and _closure(ap, n, mask, kind) == full:
                    found.push_back(mask)
                # next combination in lexicographic order
                i = c - 1
                while i >= 0 and idx[i] == n - c + i:
                    i -= 1
                if i < 0:
                    break
                idx[i] += 1
                i += 1
                while i < c:
                    idx[i] = idx[i - 1] + 1
                    i += 1
    finally:
        free(idx)
    out = np.empty(found.size(), dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] o = out
    cdef Py_ssize_t k
    for k in range(<Py_ssize_t>found.size()):
        o[k] = found[k]
    out.sort()
    return out


cdef inline int64_t _root(int64_t* parent, int64_t x) nogil:
    cdef int64_t r = x, nxt
    while parent[r] != r:
        r = parent[r]
    while parent[x] != r:
        nxt = parent[x]
        parent[x] = r
        x = nxt
    return r


cdef inline int64_t _search(const uint64_t* verts, int64_t m, uint64_t key) nogil:
    cdef int64_t lo = 0, hi = m, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if verts[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < m and verts[lo] == key:
        return lo
    return -1


def tar_connectivity(verts, int n):
    """Incremental union-find over the k-TAR graphs, k = 0..n."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] vs = np.ascontiguousarray(verts, dtype=np.uint64)
    cdef int64_t m = vs.shape[0], i, p, q, rp, rq, comps = 0, included = 0
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(n + 1, dtype=np.uint8)
    if m == 0:
        return out.view(np.bool_)
    cdef uint64_t* vp = <uint64_t*>vs.data
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order = np.argsort(
        np.bitwise_count(vs), kind="stable").astype(np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] parent_arr = np.arange(m, dtype=np.int64)
    cdef int64_t* parent = <int64_t*>parent_arr.data
    cdef int64_t* op = <int64_t*>order.data
    cdef int k, size
    cdef uint64_t s, rest, low
    i = 0
    with nogil:
        for k in range(n + 1):
            while i < m and popcount64(vp[op[i]]) == k:
                p = op[i]
                s = vp[p]
                comps += 1
                included += 1
                rest = s
                while rest:
                    low = rest & (~rest + 1)
                    rest ^= low
                    q = _search(vp, m, s ^ low)
                    if q >= 0:
                        rp = _root(parent, p)
                        rq = _root(parent, q)
                        if rp != rq:
                            parent[rp] = rq
                            comps -= 1
                i += 1
            out[k] = included > 0 and comps == 1
    return out.view(np.bool_)
