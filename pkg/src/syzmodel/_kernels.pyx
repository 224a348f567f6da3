# distutils: language = c++
"""Compiled kernels: sparse column reduction and planar distance queries."""

from libc.math cimport sqrt
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from libcpp.pair cimport pair
from libcpp.algorithm cimport sort

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64
ctypedef pair[i64, i64] entry  # (row, value)

cdef i64 LIMIT = (<i64>1) << 40


class KernelOverflow(ArithmeticError):
    pass


cdef inline i64 low_row(vector[entry]& c):
    return c.back().first


cdef inline i64 igcd(i64 a, i64 b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef void divide_content(vector[entry]& c):
    cdef i64 g = 0
    cdef size_t i
    for i in range(c.size()):
        g = igcd(g, c[i].second)
    if g > 1:
        for i in range(c.size()):
            c[i].second = c[i].second // g


cdef bint axpy(vector[entry]& c, vector[entry]& o, i64 m, i64 scale, vector[entry]& tmp):
    """c <- scale*c - m*o on row-sorted sparse vectors; False on overflow."""
    cdef size_t i = 0, j = 0
    cdef i64 v
    tmp.clear()
    while i < c.size() or j < o.size():
        if j >= o.size() or (i < c.size() and c[i].first < o[j].first):
            v = scale * c[i].second
            if v != 0:
                tmp.push_back(entry(c[i].first, v))
            i += 1
        elif i >= c.size() or o[j].first < c[i].first:
            v = -m * o[j].second
            tmp.push_back(entry(o[j].first, v))
            j += 1
        else:
            v = scale * c[i].second - m * o[j].second
            if v != 0:
                tmp.push_back(entry(c[i].first, v))
            i += 1
            j += 1
        if v > LIMIT or v < -LIMIT:
            return False
    c.swap(tmp)
    return True


def reduce_columns(cols):
    """Rank and unit-pivot flag of a sparse integer matrix; see the Python fallback."""
    cdef vector[vector[entry]] store
    cdef unordered_map[i64, size_t] owner
    cdef vector[entry] c, tmp
    cdef i64 a, b, low
    cdef Py_ssize_t rank = 0
    cdef bint unit = True
    for col in cols:
        c.clear()
        for r, v in col:
            if v:
                c.push_back(entry(<i64>r, <i64>v))
        sort(c.begin(), c.end())
        while c.size() > 0:
            low = low_row(c)
            it = owner.find(low)
            if it == owner.end():
                break
            a = c.back().second
            b = store[owner[low]].back().second
            if a % b == 0:
                ok = axpy(c, store[owner[low]], a // b, 1, tmp)
            else:
                unit = False
                ok = axpy(c, store[owner[low]], a, b, tmp)
                divide_content(c)
            if not ok:
                raise KernelOverflow("coefficient growth beyond int64 headroom")
        if c.size() > 0:
            if c.back().second != 1 and c.back().second != -1:
                unit = False
            owner[low_row(c)] = store.size()
            store.push_back(c)
            rank += 1
    return rank, unit


def point_segment_distances(points, segments, chunk=None):
    cdef const double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[:, ::1] S = np.ascontiguousarray(segments, dtype=np.float64)
    cdef Py_ssize_t n = P.shape[0], m = S.shape[0], i, k
    out = np.empty(n)
    cdef double[::1] O = out
    cdef double px, py, ax, ay, bx, by, dx, dy, t, den, ex, ey, best, d2
    with nogil:
        for i in range(n):
            px = P[i, 0]
            py = P[i, 1]
            best = 1e300
            for k in range(m):
                ax = S[k, 0]
                ay = S[k, 1]
                dx = S[k, 2] - ax
                dy = S[k, 3] - ay
                den = dx * dx + dy * dy
                t = 0.0
                if den > 0:
                    t = ((px - ax) * dx + (py - ay) * dy) / den
                    if t < 0:
                        t = 0.0
                    elif t > 1:
                        t = 1.0
                ex = px - ax - t * dx
                ey = py - ay - t * dy
                d2 = ex * ex + ey * ey
                if d2 < best:
                    best = d2
            O[i] = sqrt(best)
    return out


def point_cloud_distances(points, cloud, chunk=None):
    cdef const double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[:, ::1] C = np.ascontiguousarray(cloud, dtype=np.float64)
    cdef Py_ssize_t n = P.shape[0], m = C.shape[0], i, k
    out = np.empty(n)
    cdef double[::1] O = out
    cdef double ex, ey, best, d2
    with nogil:
        for i in range(n):
            best = 1e300
            for k in range(m):
                ex = P[i, 0] - C[k, 0]
                ey = P[i, 1] - C[k, 1]
                d2 = ex * ex + ey * ey
                if d2 < best:
                    best = d2
            O[i] = sqrt(best)
    return out
