# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels; the pure-Python twin is pure.py.

Masks are limited to 64 bits here, which covers every carrier the
exhaustive bounds admit; callers fall back to the pure kernels beyond.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"

MASK_BITS = 64


cdef int _popcount(unsigned long long v) noexcept:
    cdef int c = 0
    while v:
        v &= v - 1
        c += 1
    return c


cdef list _minimize(unsigned long long * buf, Py_ssize_t n):
    # insertion by ascending popcount, keeping inclusion-minimal masks
    cdef Py_ssize_t i, j
    cdef unsigned long long cand
    cdef bint dominated
    order = sorted(set([buf[i] for i in range(n)]),
                   key=lambda m: (_popcount(m), m))
    out = []
    for cand_obj in order:
        cand = <unsigned long long> cand_obj
        dominated = False
        for kept_obj in out:
            if (<unsigned long long> kept_obj) & cand == <unsigned long long> kept_obj:
                dominated = True
                break
        if not dominated:
            out.append(cand_obj)
    out.sort()
    return out


def minimize_family(masks):
    """Inclusion-minimal members of the family, deduplicated and sorted."""
    cdef list items = [int(m) for m in masks]
    cdef Py_ssize_t n = len(items)
    if n == 0:
        return ()
    cdef unsigned long long * buf = <unsigned long long *> malloc(
        n * sizeof(unsigned long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    try:
        for i in range(n):
            buf[i] = <unsigned long long> items[i]
        return tuple(_minimize(buf, n))
    finally:
        free(buf)


def minimal_transversals(masks, nbits):
    """Minimal hitting sets of the family (incremental antichain update)."""
    if nbits > MASK_BITS:
        raise ValueError(f"compiled kernels support at most {MASK_BITS} bits")
    edges = sorted(set(int(m) for m in masks))
    cdef list trs = [0]
    cdef unsigned long long edge, t, e, bit
    cdef Py_ssize_t i, cap, cnt
    cdef unsigned long long * buf
    for edge_obj in edges:
        edge = <unsigned long long> edge_obj
        if edge == 0:
            return ()
        cap = len(trs) * (_popcount(edge) + 1)
        buf = <unsigned long long *> malloc(cap * sizeof(unsigned long long))
        if buf == NULL:
            raise MemoryError()
        cnt = 0
        try:
            for t_obj in trs:
                t = <unsigned long long> t_obj
                if t & edge:
                    buf[cnt] = t
                    cnt += 1
                else:
                    e = edge
                    while e:
                        bit = e & (e - 1)
                        bit ^= e  # lowest set bit
                        e &= e - 1
                        buf[cnt] = t | bit
                        cnt += 1
            trs = _minimize(buf, cnt)
        finally:
            free(buf)
    return tuple(trs)


def phase_orthogonal(table, n, pole_mask, x_mask):
    """{ y | forall i in x: product(i, y) in pole }, all sets as bitmasks."""
    cdef Py_ssize_t size = int(n)
    if size > MASK_BITS:
        raise ValueError(f"compiled kernels support at most {MASK_BITS} bits")
    cdef unsigned long long pole = <unsigned long long> int(pole_mask)
    cdef unsigned long long xm = <unsigned long long> int(x_mask)
    cdef unsigned long long res = 0, m
    cdef Py_ssize_t y, i, cnt = size * size
    cdef int * tab = <int *> malloc(cnt * sizeof(int))
    if tab == NULL:
        raise MemoryError()
    cdef bint ok
    try:
        for i in range(cnt):
            tab[i] = int(table[i])
        for y in range(size):
            ok = True
            m = xm
            while m:
                i = _popcount((m & (~m + 1)) - 1)  # index of lowest bit
                m &= m - 1
                if not (pole >> tab[i * size + y]) & 1:
                    ok = False
                    break
            if ok:
                res |= <unsigned long long> 1 << y
    finally:
        free(tab)
    return int(res)


def is_antichain(masks):
    items = [int(m) for m in masks]
    cdef Py_ssize_t i, j, n = len(items)
    cdef unsigned long long a, b
    for i in range(n):
        a = <unsigned long long> items[i]
        for j in range(n):
            if i == j:
                continue
            b = <unsigned long long> items[j]
            if a & b == a:
                return False
    return True
