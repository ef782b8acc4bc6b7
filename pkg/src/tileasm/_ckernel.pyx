# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled sampling kernel; same algorithm and option order as ``_pykernel``."""

from libc.stdint cimport int64_t, uint32_t
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set


cdef inline int64_t pack(int64_t x, int64_t y) nogil:
    return (x << 32) | <int64_t>(<uint32_t>y)


cdef inline int64_t unpack_x(int64_t k) nogil:
    return k >> 32


cdef inline int64_t unpack_y(int64_t k) nogil:
    return <int64_t>(<int>(<uint32_t>k))


cdef class _State:
    cdef unordered_set[int64_t] occ
    cdef vector[int64_t] opt_pt
    cdef vector[int] opt_t
    cdef unordered_map[int64_t, vector[int]] slots
    cdef vector[int] side_glue
    cdef vector[int] fit_start
    cdef vector[int] fit_list
    cdef int nglues
    cdef list xs, ys, ts

    cdef void place(self, int64_t x, int64_t y, int t):
        cdef int64_t p = pack(x, y)
        cdef int64_t q, moved
        cdef int d, g, k, lo, hi, j, u, i, last, n, m
        cdef bint dup
        cdef vector[int] mine
        cdef vector[int]* lst
        self.occ.insert(p)
        self.xs.append(x)
        self.ys.append(y)
        self.ts.append(t)
        if self.slots.count(p):
            mine = self.slots[p]
            self.slots.erase(p)
            while mine.size() > 0:
                i = mine.back()
                mine.pop_back()
                last = <int>self.opt_pt.size() - 1
                if i != last:
                    moved = self.opt_pt[last]
                    self.opt_pt[i] = moved
                    self.opt_t[i] = self.opt_t[last]
                    if moved == p:
                        lst = &mine
                    else:
                        lst = &self.slots[moved]
                    n = <int>lst[0].size()
                    for m in range(n):
                        if lst[0][m] == last:
                            lst[0][m] = i
                            break
                self.opt_pt.pop_back()
                self.opt_t.pop_back()
        for d in range(4):
            g = self.side_glue[4 * t + d]
            if g == 0:
                continue
            if d == 0:
                q = pack(x, y + 1)
            elif d == 1:
                q = pack(x + 1, y)
            elif d == 2:
                q = pack(x, y - 1)
            else:
                q = pack(x - 1, y)
            if self.occ.count(q):
                continue
            k = d * self.nglues + g
            lo = self.fit_start[k]
            hi = self.fit_start[k + 1]
            if lo == hi:
                continue
            lst = &self.slots[q]
            for j in range(lo, hi):
                u = self.fit_list[j]
                dup = False
                n = <int>lst[0].size()
                for m in range(n):
                    if self.opt_t[lst[0][m]] == u:
                        dup = True
                        break
                if not dup:
                    lst[0].push_back(<int>self.opt_pt.size())
                    self.opt_pt.push_back(q)
                    self.opt_t.push_back(u)


def run(side_glue, fit_start, fit_list, int nglues, long long seed_x, long long seed_y,
        int seed_t, rng, long long cap):
    """Sample one producing sequence; see ``_pykernel.run``."""
    cdef _State s = _State()
    cdef long long steps = 0
    cdef Py_ssize_t i
    cdef int64_t p
    randrange = rng.randrange
    s.side_glue = side_glue
    s.fit_start = fit_start
    s.fit_list = fit_list
    s.nglues = nglues
    s.xs = []
    s.ys = []
    s.ts = []
    s.place(seed_x, seed_y, seed_t)
    while s.opt_pt.size() > 0:
        if steps >= cap:
            return s.xs, s.ys, s.ts, False
        i = randrange(<Py_ssize_t>s.opt_pt.size())
        p = s.opt_pt[i]
        s.place(unpack_x(p), unpack_y(p), s.opt_t[i])
        steps += 1
    return s.xs, s.ys, s.ts, True
