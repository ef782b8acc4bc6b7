"""Pure-Python sampling kernel.

Mirrors ``_ckernel.pyx`` step for step, so both produce identical traces for
the same random source. Options live in a flat list with swap-removal and a
per-point slot index, which keeps each attachment O(neighborhood).
"""

from __future__ import annotations


def run(side_glue, fit_start, fit_list, nglues, seed_x, seed_y, seed_t, rng, cap):
    """Sample one producing sequence.

    Returns ``(xs, ys, ts, terminal)`` with placements in attachment order,
    the seed first.
    """
    randrange = rng.randrange
    occ = {}
    opt_pt = []
    opt_t = []
    slots = {}
    xs = []
    ys = []
    ts = []

    def place(x, y, t):
        p = (x, y)
        occ[p] = t
        xs.append(x)
        ys.append(y)
        ts.append(t)
        mine = slots.pop(p, None)
        if mine:
            while mine:
                i = mine.pop()
                last = len(opt_pt) - 1
                if i != last:
                    moved = opt_pt[last]
                    opt_pt[i] = moved
                    opt_t[i] = opt_t[last]
                    lst = mine if moved == p else slots[moved]
                    lst[lst.index(last)] = i
                opt_pt.pop()
                opt_t.pop()
        base = 4 * t
        for d in range(4):
            g = side_glue[base + d]
            if g == 0:
                continue
            if d == 0:
                q = (x, y + 1)
            elif d == 1:
                q = (x + 1, y)
            elif d == 2:
                q = (x, y - 1)
            else:
                q = (x - 1, y)
            if q in occ:
                continue
            k = d * nglues + g
            lo = fit_start[k]
            hi = fit_start[k + 1]
            if lo == hi:
                continue
            lst = slots.get(q)
            if lst is None:
                lst = slots[q] = []
            for j in range(lo, hi):
                u = fit_list[j]
                for i in lst:
                    if opt_t[i] == u:
                        break
                else:
                    lst.append(len(opt_pt))
                    opt_pt.append(q)
                    opt_t.append(u)

    place(seed_x, seed_y, seed_t)
    steps = 0
    while opt_pt:
        if steps >= cap:
            return xs, ys, ts, False
        i = randrange(len(opt_pt))
        (x, y), t = opt_pt[i], opt_t[i]
        place(x, y, t)
        steps += 1
    return xs, ys, ts, True
