# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration / dedup / cover kernels (int64).

Callers certify via commtile.kernels that all intermediate values fit in
int64; anything bigger is routed to the pure backend instead.
"""

from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memcpy

BACKEND = "c"

ctypedef long long i64
ctypedef unsigned long long u64


cdef inline u64 _hash_row(i64 *row, Py_ssize_t k) noexcept nogil:
    cdef u64 h = 0x811c9dc5u
    cdef Py_ssize_t i
    for i in range(k):
        h ^= (<u64> row[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)
    return h


cdef i64 *_copy_cols(object cols, Py_ssize_t m, Py_ssize_t d) except NULL:
    cdef i64 *buf = <i64 *> malloc(m * d * sizeof(i64))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t j, i
    for j in range(m):
        col = cols[j]
        for i in range(d):
            buf[j * d + i] = col[i]
    return buf


def enumerate_points(cols, counts):
    """Mirror of _pykern.enumerate_points (list of tuples out)."""
    cdef Py_ssize_t m = len(cols)
    if m == 0:
        return [()]
    cdef Py_ssize_t d = len(cols[0])
    cdef Py_ssize_t total = 1
    for c in counts:
        total *= c
    cdef i64 *cbuf = _copy_cols(cols, m, d)
    cdef i64 *cnt = <i64 *> malloc(m * sizeof(i64))
    cdef i64 *digits = <i64 *> calloc(m, sizeof(i64))
    cdef i64 *cur = <i64 *> calloc(d, sizeof(i64))
    if cnt == NULL or digits == NULL or cur == NULL:
        raise MemoryError()
    cdef Py_ssize_t j, i, n
    for j in range(m):
        cnt[j] = counts[j]
    out = []
    try:
        for n in range(total):
            out.append(tuple([cur[i] for i in range(d)]))
            j = m - 1
            while j >= 0:
                digits[j] += 1
                if digits[j] < cnt[j]:
                    for i in range(d):
                        cur[i] += cbuf[j * d + i]
                    break
                digits[j] -= 1
                for i in range(d):
                    cur[i] -= digits[j] * cbuf[j * d + i]
                digits[j] = 0
                j -= 1
            if j < 0:
                break
    finally:
        free(cbuf)
        free(cnt)
        free(digits)
        free(cur)
    return out


def count_images(cols, counts, map_rows):
    """Mirror of _pykern.count_images: distinct projected points of the box."""
    cdef Py_ssize_t m = len(cols)
    cdef Py_ssize_t k = len(map_rows)
    if m == 0:
        return 1
    cdef Py_ssize_t d = len(cols[0])
    cdef Py_ssize_t total = 1
    for c in counts:
        total *= c

    # projected generator columns: pc[j] = map * cols[j]
    cdef i64 *pc = <i64 *> malloc(m * k * sizeof(i64))
    cdef i64 *cnt = <i64 *> malloc(m * sizeof(i64))
    cdef i64 *digits = <i64 *> calloc(m, sizeof(i64))
    cdef i64 *cur = <i64 *> calloc(k if k > 0 else 1, sizeof(i64))
    if pc == NULL or cnt == NULL or digits == NULL or cur == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, r
    cdef i64 acc
    for j in range(m):
        col = cols[j]
        for r in range(k):
            row = map_rows[r]
            acc = 0
            for i in range(d):
                acc += (<i64> row[i]) * (<i64> col[i])
            pc[j * k + r] = acc
        cnt[j] = counts[j]

    # open-addressing hash set over rows of length k
    cdef Py_ssize_t cap = 64
    while cap < 2 * total and cap < (1 << 24):
        cap <<= 1
    cdef Py_ssize_t mask = cap - 1
    cdef Py_ssize_t *slots = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    cdef Py_ssize_t store_cap = 1024
    cdef Py_ssize_t store_len = 0
    cdef i64 *store = <i64 *> malloc(store_cap * (k if k > 0 else 1) * sizeof(i64))
    if slots == NULL or store == NULL:
        raise MemoryError()
    for i in range(cap):
        slots[i] = -1

    cdef Py_ssize_t n, pos, idx
    cdef u64 h
    cdef bint same
    cdef i64 *tmp
    cdef Py_ssize_t kk = k if k > 0 else 1
    try:
        for n in range(total):
            h = _hash_row(cur, k)
            pos = <Py_ssize_t> (h & <u64> mask)
            while True:
                idx = slots[pos]
                if idx < 0:
                    if store_len == store_cap:
                        store_cap <<= 1
                        tmp = <i64 *> malloc(store_cap * kk * sizeof(i64))
                        if tmp == NULL:
                            raise MemoryError()
                        memcpy(tmp, store, store_len * kk * sizeof(i64))
                        free(store)
                        store = tmp
                    memcpy(store + store_len * kk, cur, k * sizeof(i64))
                    slots[pos] = store_len
                    store_len += 1
                    break
                same = True
                for i in range(k):
                    if store[idx * kk + i] != cur[i]:
                        same = False
                        break
                if same:
                    break
                pos = (pos + 1) & mask
            # odometer step
            j = m - 1
            while j >= 0:
                digits[j] += 1
                if digits[j] < cnt[j]:
                    for i in range(k):
                        cur[i] += pc[j * k + i]
                    break
                digits[j] -= 1
                for i in range(k):
                    cur[i] -= digits[j] * pc[j * k + i]
                digits[j] = 0
                j -= 1
            if j < 0:
                break
    finally:
        free(pc)
        free(cnt)
        free(digits)
        free(cur)
        free(slots)
        free(store)
    return store_len


def cover_multiplicity(translates, tile_points, radius):
    """Mirror of _pykern.cover_multiplicity."""
    cdef Py_ssize_t ns = len(tile_points)
    if ns == 0:
        return (0, 0)
    cdef Py_ssize_t d = len(tile_points[0])
    cdef Py_ssize_t nt = len(translates)
    cdef i64 R = radius
    cdef i64 width = 2 * R + 1
    cdef Py_ssize_t size = 1
    cdef Py_ssize_t i
    for i in range(d):
        size *= width
    cdef i64 *tbuf = _copy_cols(translates, nt, d) if nt else <i64 *> malloc(sizeof(i64))
    cdef i64 *sbuf = _copy_cols(tile_points, ns, d)
    cdef long *counts = <long *> calloc(size, sizeof(long))
    if tbuf == NULL or sbuf == NULL or counts == NULL:
        raise MemoryError()
    cdef Py_ssize_t a, b, idx
    cdef i64 x
    cdef bint ok
    cdef long mn, mx
    try:
        with nogil:
            for a in range(nt):
                for b in range(ns):
                    idx = 0
                    ok = True
                    for i in range(d):
                        x = tbuf[a * d + i] + sbuf[b * d + i]
                        if x < -R or x > R:
                            ok = False
                            break
                        idx = idx * width + <Py_ssize_t> (x + R)
                    if ok:
                        counts[idx] += 1
            mn = counts[0]
            mx = counts[0]
            for idx in range(size):
                if counts[idx] < mn:
                    mn = counts[idx]
                if counts[idx] > mx:
                    mx = counts[idx]
    finally:
        free(tbuf)
        free(sbuf)
        free(counts)
    return (mn, mx)
