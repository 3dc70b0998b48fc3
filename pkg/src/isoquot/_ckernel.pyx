# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled F_p matrix kernels; same contract as _kernel_py."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.string cimport memcmp

from ._kernel_py import BoundExceeded

cnp.import_array()


cdef inline uint64_t _hash_row(const int64_t* row, int n) nogil:
    cdef uint64_t h = 1469598103934665603ULL
    cdef int i
    for i in range(n):
        h ^= <uint64_t>row[i]
        h *= 1099511628211ULL
        h ^= h >> 29
    return h


cdef inline void _mul(const int64_t* a, const int64_t* b, int64_t* out,
                      int D, int64_t p) nogil:
    cdef int i, j, k
    cdef int64_t acc
    for i in range(D):
        for j in range(D):
            acc = 0
            for k in range(D):
                acc += a[i * D + k] * b[k * D + j]
            out[i * D + j] = acc % p


def closure(gens, int D, int64_t p, Py_ssize_t max_order):
    cdef cnp.ndarray[int64_t, ndim=2, mode="c"] G = np.ascontiguousarray(
        np.asarray(gens, dtype=np.int64).reshape(-1, D * D))
    cdef int ng = G.shape[0]
    cdef int DD = D * D
    cdef Py_ssize_t cap = 64
    while cap < 2 * (max_order + 1):
        cap *= 2
    cdef cnp.ndarray[int64_t, ndim=2, mode="c"] E = np.zeros((max_order + 2, DD), dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] table = np.full(cap, -1, dtype=np.int64)
    cdef cnp.ndarray[int, ndim=1] parent = np.full(max_order + 2, -1, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1] via = np.full(max_order + 2, -1, dtype=np.intc)
    cdef cnp.ndarray[int64_t, ndim=1] tmp = np.zeros(DD, dtype=np.int64)
    cdef Py_ssize_t n = 1, head = 0, slot, idx
    cdef uint64_t mask = cap - 1
    cdef int gi, i
    for i in range(D):
        E[0, i * D + i] = 1
    slot = _hash_row(&E[0, 0], DD) & mask
    table[slot] = 0
    while head < n:
        for gi in range(ng):
            _mul(&E[head, 0], &G[gi, 0], &tmp[0], D, p)
            slot = _hash_row(&tmp[0], DD) & mask
            while True:
                idx = table[slot]
                if idx < 0:
                    break
                if memcmp(&E[idx, 0], &tmp[0], DD * sizeof(int64_t)) == 0:
                    break
                slot = (slot + 1) & mask
            if idx >= 0:
                continue
            if n >= max_order:
                raise BoundExceeded(f"closure exceeded {max_order} elements")
            for i in range(DD):
                E[n, i] = tmp[i]
            parent[n] = head
            via[n] = gi
            table[slot] = n
            n += 1
        head += 1
    return E[:n].copy(), parent[:n].astype(np.int32), via[:n].astype(np.int32)


def eval_tree(gens, parent, via, int D, int64_t p):
    cdef cnp.ndarray[int64_t, ndim=2, mode="c"] G = np.ascontiguousarray(
        np.asarray(gens, dtype=np.int64).reshape(-1, D * D))
    cdef int[:] par = np.ascontiguousarray(parent, dtype=np.intc)
    cdef int[:] vi = np.ascontiguousarray(via, dtype=np.intc)
    cdef Py_ssize_t N = par.shape[0], i
    cdef cnp.ndarray[int64_t, ndim=2, mode="c"] out = np.zeros((N, D * D), dtype=np.int64)
    for i in range(D):
        out[0, i * D + i] = 1
    for i in range(1, N):
        _mul(&out[par[i], 0], &G[vi[i], 0], &out[i, 0], D, p)
    return out


cdef int64_t _powmod(int64_t b, int64_t e, int64_t p) nogil:
    cdef int64_t r = 1
    b %= p
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


cdef void _det_rank(int64_t* m, int D, int64_t p, int64_t* det_out, int* rank_out) nogil:
    cdef int r = 0, col, i, j, piv
    cdef int64_t det = 1, pv, inv, f, t
    for col in range(D):
        piv = -1
        for i in range(r, D):
            if m[i * D + col] != 0:
                piv = i
                break
        if piv < 0:
            det = 0
            continue
        if piv != r:
            for j in range(D):
                t = m[r * D + j]
                m[r * D + j] = m[piv * D + j]
                m[piv * D + j] = t
            det = (p - det) % p
        pv = m[r * D + col]
        det = det * pv % p
        inv = _powmod(pv, p - 2, p)
        for i in range(r + 1, D):
            f = m[i * D + col] * inv % p
            if f:
                for j in range(D):
                    m[i * D + j] = (m[i * D + j] - f * m[r * D + j]) % p
                    if m[i * D + j] < 0:
                        m[i * D + j] += p
        r += 1
    det_out[0] = det
    rank_out[0] = r


def _shifted(elems, int D, int64_t p):
    a = np.array(elems, dtype=np.int64, order="C").reshape(-1, D * D)
    a[:, :: D + 1] = (a[:, :: D + 1] - 1) % p
    return a


def det_minus_identity(elems, int D, int64_t p):
    cdef cnp.ndarray[int64_t, ndim=2, mode="c"] a = _shifted(elems, D, p)
    cdef Py_ssize_t N = a.shape[0], i
    cdef cnp.ndarray[int64_t, ndim=1] out = np.zeros(N, dtype=np.int64)
    cdef int rk
    for i in range(N):
        _det_rank(&a[i, 0], D, p, &out[i], &rk)
    return out


def rank_minus_identity(elems, int D, int64_t p):
    cdef cnp.ndarray[int64_t, ndim=2, mode="c"] a = _shifted(elems, D, p)
    cdef Py_ssize_t N = a.shape[0], i
    cdef cnp.ndarray[int, ndim=1] out = np.zeros(N, dtype=np.intc)
    cdef int64_t d
    for i in range(N):
        _det_rank(&a[i, 0], D, p, &d, &out[i])
    return out.astype(np.int32)


def power_traces(elems, int D, int64_t p, int L):
    cdef cnp.ndarray[int64_t, ndim=2, mode="c"] a = np.ascontiguousarray(
        np.asarray(elems, dtype=np.int64).reshape(-1, D * D))
    cdef Py_ssize_t N = a.shape[0], i
    cdef int j, k
    cdef cnp.ndarray[int64_t, ndim=2, mode="c"] out = np.zeros((N, L), dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] buf = np.zeros(2 * D * D, dtype=np.int64)
    cdef int64_t* cur
    cdef int64_t* nxt
    cdef int64_t* tmp
    cdef int64_t t
    with nogil:
        for i in range(N):
            cur = &buf[0]
            nxt = &buf[D * D]
            for k in range(D * D):
                cur[k] = 0
            for k in range(D):
                cur[k * D + k] = 1
            for j in range(L):
                t = 0
                for k in range(D):
                    t += cur[k * D + k]
                out[i, j] = t % p
                if j + 1 < L:
                    _mul(cur, &a[i, 0], nxt, D, p)
                    tmp = cur
                    cur = nxt
                    nxt = tmp
    return out
