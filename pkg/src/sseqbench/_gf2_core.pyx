# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) elimination on bit-packed uint64 rows.

Same contracts as ``_gf2_py``; rows travel in and out as Python ints and are
packed into a C-contiguous (nrows, nwords) uint64 array for the elimination.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _lowbit(uint64_t w) noexcept nogil:
    return __builtin_ctzll(w)


def _pack(list rows, Py_ssize_t nbits):
    cdef Py_ssize_t nwords = (nbits + 63) >> 6
    if nwords == 0:
        nwords = 1
    cdef Py_ssize_t nbytes = nwords * 8
    buf = b"".join([(<object>r).to_bytes(nbytes, "little") for r in rows])
    arr = np.frombuffer(buf, dtype="<u8").reshape(len(rows), nwords).copy()
    return arr


def _unpack(cnp.ndarray arr):
    cdef Py_ssize_t i
    out = []
    for i in range(arr.shape[0]):
        out.append(int.from_bytes(arr[i].tobytes(), "little"))
    return out


cdef Py_ssize_t _eliminate(uint64_t[:, ::1] m, Py_ssize_t ncols_words, Py_ssize_t[::1] pivot_of_row) noexcept nogil:
    """Forward elimination restricted to the first ``ncols_words`` words.

    Rows are processed in order; a row whose restricted part reduces to zero
    gets pivot -1.  Returns the rank.  Pivot rows are stored per column in a
    lookup so each incoming row is reduced in one sweep over its set bits.
    """
    cdef Py_ssize_t nrows = m.shape[0], nwords = m.shape[1]
    cdef Py_ssize_t i, j, w, p, r, rank = 0
    cdef Py_ssize_t ncols = ncols_words << 6
    cdef Py_ssize_t *owner
    owner = <Py_ssize_t *> malloc(ncols * sizeof(Py_ssize_t))
    for j in range(ncols):
        owner[j] = -1
    for i in range(nrows):
        pivot_of_row[i] = -1
        w = 0
        while w < ncols_words:
            if m[i, w] == 0:
                w += 1
                continue
            p = (w << 6) + _lowbit(m[i, w])
            r = owner[p]
            if r < 0:
                owner[p] = i
                pivot_of_row[i] = p
                rank += 1
                break
            for j in range(w, nwords):
                m[i, j] ^= m[r, j]
    free(owner)
    return rank


cdef void _back_substitute(uint64_t[:, ::1] m, Py_ssize_t[::1] order, Py_ssize_t[::1] pivots) noexcept nogil:
    """Clear every pivot column from the other pivot rows.

    ``order`` lists pivot rows by increasing pivot; ``pivots`` gives their pivots.
    """
    cdef Py_ssize_t a, b, j, w, ra, rb, p
    cdef Py_ssize_t k = order.shape[0], nwords = m.shape[1]
    cdef uint64_t bit
    for a in range(k - 1, -1, -1):
        ra = order[a]
        p = pivots[a]
        w = p >> 6
        bit = (<uint64_t>1) << (p & 63)
        for b in range(a):
            rb = order[b]
            if m[rb, w] & bit:
                for j in range(w, nwords):
                    m[rb, j] ^= m[ra, j]


def _rref(arr, Py_ssize_t ncols_words):
    """Reduced echelon form of the first ``ncols_words`` words; returns (rows, pivots) as arrays."""
    cdef uint64_t[:, ::1] m = arr
    piv = np.empty(arr.shape[0], dtype=np.intp)
    cdef Py_ssize_t[::1] pv = piv
    _eliminate(m, ncols_words, pv)
    keep = np.flatnonzero(piv >= 0)
    keep = keep[np.argsort(piv[keep], kind="stable")]
    order = np.ascontiguousarray(keep, dtype=np.intp)
    pivots = np.ascontiguousarray(piv[keep], dtype=np.intp)
    _back_substitute(m, order, pivots)
    return arr[order], pivots, piv


def echelonize(list rows):
    if not rows:
        return [], []
    cdef Py_ssize_t nbits = max([(<object>r).bit_length() for r in rows])
    if nbits == 0:
        return [], []
    arr = _pack(rows, nbits)
    out, pivots, _ = _rref(arr, arr.shape[1])
    return _unpack(out), [int(p) for p in pivots]


def rank(list rows):
    if not rows:
        return 0
    cdef Py_ssize_t nbits = max([(<object>r).bit_length() for r in rows])
    if nbits == 0:
        return 0
    arr = _pack(rows, nbits)
    cdef uint64_t[:, ::1] m = arr
    piv = np.empty(len(rows), dtype=np.intp)
    cdef Py_ssize_t[::1] pv = piv
    return _eliminate(m, m.shape[1], pv)


def kernel(list rows, Py_ssize_t ncols):
    """Kernel basis of the row map, as ints over len(rows) bits (reduced echelon)."""
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return []
    cdef Py_ssize_t left_words = (ncols + 63) >> 6
    if left_words == 0:
        left_words = 1
    cdef Py_ssize_t shift = left_words << 6
    cdef object oshift = shift
    shifted = [r | (1 << (oshift + k)) for k, r in enumerate(rows)]
    arr = _pack(shifted, shift + n)
    cdef uint64_t[:, ::1] m = arr
    piv = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] pv = piv
    _eliminate(m, left_words, pv)
    ker = [r >> shift for r, p in zip(_unpack(arr), piv) if p < 0]
    basis, _ = echelonize(ker)
    return basis


def image_and_kernel(list rows, Py_ssize_t ncols):
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return [], [], []
    cdef Py_ssize_t left_words = (ncols + 63) >> 6
    if left_words == 0:
        left_words = 1
    cdef Py_ssize_t shift = left_words << 6
    cdef object oshift = shift
    shifted = [r | (1 << (oshift + k)) for k, r in enumerate(rows)]
    arr = _pack(shifted, shift + n)
    cdef uint64_t[:, ::1] m = arr
    piv = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] pv = piv
    _eliminate(m, left_words, pv)
    mask = (1 << <object>shift) - 1
    img_rows = []
    ker = []
    for r, p in zip(_unpack(arr), piv):
        if p < 0:
            ker.append(r >> shift)
        else:
            img_rows.append(r & mask)
    img, pivots = echelonize(img_rows)
    kb, _ = echelonize(ker)
    return img, pivots, kb


def reduce(vec, list basis, list pivots):
    from . import _gf2_py
    return _gf2_py.reduce(vec, basis, pivots)
