# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Semantics are identical to ``_pykernels``.

Every routine that takes ``lo, hi`` works on a slice of vertices (or
splitters) and releases the GIL, so the driver can fan slices out to
threads.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, int8_t, uint8_t

cnp.import_array()

cdef extern from *:
    """
    static inline long long psi_xchg(long long *slot, long long value) {
        return __atomic_exchange_n(slot, value, __ATOMIC_ACQ_REL);
    }
    """
    long long psi_xchg(long long *slot, long long value) nogil

cdef enum:
    END = -1
    EMPTY = -2


cdef inline int _cmp(const int64_t[:, ::1] c, const uint8_t[::1] top,
                     Py_ssize_t a, Py_ssize_t b, const int8_t[::1] psign) noexcept nogil:
    cdef Py_ssize_t k
    cdef int64_t x, y
    if top[a]:
        return 0 if top[b] else 1
    if top[b]:
        return -1
    for k in range(c.shape[1] - 1, -1, -1):
        x = c[a, k]
        y = c[b, k]
        if x != y:
            if psign[k] > 0:
                return 1 if x > y else -1
            return 1 if x < y else -1
    return 0


def odd_trap(const int64_t[::1] ptr, const int64_t[::1] succ, const int8_t[::1] owner):
    cdef Py_ssize_t n = owner.shape[0], v, u, e, i, qh = 0, qt = 0
    out = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] inset = out
    cdef int64_t[::1] cnt = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] rptr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] rfill
    cdef int64_t[::1] rsrc = np.empty(succ.shape[0], dtype=np.int64)
    cdef int64_t[::1] queue = np.empty(n, dtype=np.int64)
    with nogil:
        for v in range(n):
            if owner[v] == 1:
                inset[v] = 1
        for v in range(n):
            for e in range(ptr[v], ptr[v + 1]):
                rptr[succ[e] + 1] += 1
                if inset[v] and inset[succ[e]]:
                    cnt[v] += 1
        for v in range(n):
            rptr[v + 1] += rptr[v]
    rfill = np.array(rptr[:n], dtype=np.int64)
    with nogil:
        for v in range(n):
            for e in range(ptr[v], ptr[v + 1]):
                u = succ[e]
                rsrc[rfill[u]] = v
                rfill[u] += 1
        for v in range(n):
            if inset[v] and cnt[v] == 0:
                inset[v] = 0
                queue[qt] = v
                qt += 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            for i in range(rptr[u], rptr[u + 1]):
                v = rsrc[i]
                if inset[v]:
                    cnt[v] -= 1
                    if cnt[v] == 0:
                        inset[v] = 0
                        queue[qt] = v
                        qt += 1
    return out


def valuation_seq(const int64_t[::1] choice, const int64_t[::1] pri_idx, Py_ssize_t d):
    """Walk the strategy tree backwards from the sink (the last vertex)."""
    cdef Py_ssize_t N = choice.shape[0], sink = N - 1, v, p, i, k, qh = 0, qt = 0
    counts_arr = np.zeros((N, d), dtype=np.int64)
    top_arr = np.ones(N, dtype=np.uint8)
    cdef int64_t[:, ::1] counts = counts_arr
    cdef uint8_t[::1] top = top_arr
    cdef int64_t[::1] cptr = np.zeros(N + 1, dtype=np.int64)
    cdef int64_t[::1] child = np.empty(max(N - 1, 0), dtype=np.int64)
    cdef int64_t[::1] queue = np.empty(N, dtype=np.int64)
    with nogil:
        for v in range(sink):
            cptr[choice[v] + 1] += 1
        for v in range(N):
            cptr[v + 1] += cptr[v]
        for v in range(sink):
            p = choice[v]
            child[cptr[p]] = v
            cptr[p] += 1
        # cptr[p] now marks the end of p's children; shift back to starts
        for v in range(N, 0, -1):
            cptr[v] = cptr[v - 1]
        cptr[0] = 0
        top[sink] = 0
        queue[qt] = sink
        qt += 1
        while qh < qt:
            p = queue[qh]
            qh += 1
            for i in range(cptr[p], cptr[p + 1]):
                v = child[i]
                for k in range(d):
                    counts[v, k] = counts[p, k]
                counts[v, pri_idx[v]] += 1
                top[v] = 0
                queue[qt] = v
                qt += 1
    return counts_arr, top_arr


def euler_splice(const int64_t[::1] choice, int64_t[::1] start, int64_t[::1] suc,
                 int64_t[::1] head, Py_ssize_t lo, Py_ssize_t hi):
    """Splice the tour of every vertex in [lo, hi) into its parent's chain.

    up(v) = v, down(v) = v + n. ``start[u]`` is exchanged atomically so
    concurrent splices into one parent serialise without locks.
    """
    cdef Py_ssize_t n = choice.shape[0] - 1, v
    cdef long long old
    with nogil:
        for v in range(lo, hi):
            old = psi_xchg(<long long *>&start[choice[v]], v)
            if old == EMPTY:
                head[0] = v + n
            else:
                suc[old] = v + n


def euler_join(int64_t[::1] start, int64_t[::1] suc, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t v
    with nogil:
        for v in range(lo, hi):
            suc[start[v]] = v


def rank_walk(const int64_t[::1] suc, const int64_t[::1] w_idx, const int8_t[::1] w_sign,
              const int64_t[::1] sid, const int64_t[::1] splitters, Py_ssize_t lo, Py_ssize_t hi,
              int64_t[:, ::1] local, int64_t[::1] owner, int64_t[:, ::1] sub_total,
              int64_t[::1] sub_next, uint8_t[::1] sub_cyclic):
    """Rank the sublists that start at splitters[lo:hi] (exclusive local prefixes)."""
    cdef Py_ssize_t m = suc.shape[0], d = local.shape[1], i, k, steps
    cdef int64_t e, nxt
    cdef int64_t[::1] acc = np.zeros(max(d, 1), dtype=np.int64)
    with nogil:
        for i in range(lo, hi):
            e = splitters[i]
            for k in range(d):
                acc[k] = 0
                local[e, k] = 0
            owner[e] = i
            acc[w_idx[e]] += w_sign[e]
            nxt = suc[e]
            steps = 0
            sub_cyclic[i] = 0
            while nxt != END and sid[nxt] < 0:
                if steps >= m:
                    sub_cyclic[i] = 1
                    break
                for k in range(d):
                    local[nxt, k] = acc[k]
                owner[nxt] = i
                acc[w_idx[nxt]] += w_sign[nxt]
                nxt = suc[nxt]
                steps += 1
            for k in range(d):
                sub_total[i, k] = acc[k]
            if sub_cyclic[i] or nxt == END:
                sub_next[i] = END
            else:
                sub_next[i] = sid[nxt]
                if sid[nxt] == i:
                    sub_cyclic[i] = 1


def rank_reduced(const int64_t[:, ::1] sub_total, const int64_t[::1] sub_next,
                 const uint8_t[::1] sub_cyclic, int64_t[:, ::1] red_rank, uint8_t[::1] red_top):
    """Sequentially rank the reduced list from splitter 0 (the head)."""
    cdef Py_ssize_t s = sub_next.shape[0], d = sub_total.shape[1], cur, nxt, k, steps = 0
    if s == 0:
        return
    with nogil:
        for cur in range(s):
            red_top[cur] = 1
        cur = 0
        red_top[0] = 0
        for k in range(d):
            red_rank[0, k] = 0
        while not sub_cyclic[cur] and sub_next[cur] != END and steps < s:
            nxt = sub_next[cur]
            if not red_top[nxt]:
                break
            red_top[nxt] = 0
            for k in range(d):
                red_rank[nxt, k] = red_rank[cur, k] + sub_total[cur, k]
            cur = nxt
            steps += 1
        if sub_cyclic[cur] or sub_next[cur] != END:
            # the head's chain never terminates
            for cur in range(s):
                red_top[cur] = 1


def rank_combine(const int64_t[::1] owner, const int64_t[:, ::1] local,
                 const int64_t[:, ::1] red_rank, const uint8_t[::1] red_top,
                 Py_ssize_t lo, Py_ssize_t hi, int64_t[:, ::1] out, uint8_t[::1] out_top):
    cdef Py_ssize_t e, k, d = local.shape[1]
    cdef int64_t o
    with nogil:
        for e in range(lo, hi):
            o = owner[e]
            if o < 0 or red_top[o]:
                out_top[e] = 1
                continue
            out_top[e] = 0
            for k in range(d):
                out[e, k] = red_rank[o, k] + local[e, k]


def switch_targets(const int64_t[::1] ptr, const int64_t[::1] succ, const int8_t[::1] owner,
                   int player, const int64_t[::1] choice, const int64_t[:, ::1] counts,
                   const uint8_t[::1] top, const int8_t[::1] psign, int64_t[::1] out,
                   Py_ssize_t lo, Py_ssize_t hi):
    """Greedy all-switches targets for ``player``'s vertices in [lo, hi).

    Even maximises, Odd minimises; ties go to the smallest vertex id. ``out[v]``
    is the new target, or -1 when no successor is strictly better than the
    current choice.
    """
    cdef Py_ssize_t v, e, u, best
    cdef int dirn = 1 if player == 0 else -1, c
    with nogil:
        for v in range(lo, hi):
            if owner[v] != player:
                continue
            best = succ[ptr[v]]
            for e in range(ptr[v] + 1, ptr[v + 1]):
                u = succ[e]
                c = _cmp(counts, top, u, best, psign) * dirn
                if c > 0 or (c == 0 and u < best):
                    best = u
            if _cmp(counts, top, best, choice[v], psign) * dirn > 0:
                out[v] = best
            else:
                out[v] = -1


def bf_pass(const int64_t[::1] ptr, const int64_t[::1] succ, const int8_t[::1] owner,
            const int64_t[::1] pri_idx, int64_t[::1] choice, int64_t[:, ::1] counts,
            uint8_t[::1] top, const int8_t[::1] psign):
    """One ascending Gauss-Seidel sweep; returns True if any valuation changed."""
    cdef Py_ssize_t n = owner.shape[0] - 1, d = counts.shape[1], v, e, u, best, k
    cdef bint changed = False, diff
    cdef int c
    with nogil:
        for v in range(n):
            if owner[v] == 0:
                best = choice[v]
            else:
                best = succ[ptr[v]]
                for e in range(ptr[v] + 1, ptr[v + 1]):
                    u = succ[e]
                    c = _cmp(counts, top, u, best, psign)
                    if c < 0 or (c == 0 and u < best):
                        best = u
                choice[v] = best
            if top[best]:
                if not top[v]:
                    top[v] = 1
                    changed = True
                continue
            diff = top[v]
            for k in range(d):
                if counts[v, k] != counts[best, k] + (1 if k == pri_idx[v] else 0):
                    diff = True
                    counts[v, k] = counts[best, k] + (1 if k == pri_idx[v] else 0)
            if diff:
                top[v] = 0
                changed = True
    return changed
