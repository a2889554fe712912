"""Pure-Python fallback for the compiled kernels in ``_ckernels.pyx``.

Signatures and results match the compiled versions exactly. Inputs are
converted to lists up front because element access on numpy arrays is far
slower than on lists in interpreted loops.
"""

import threading
from collections import deque

import numpy as np

END = -1
EMPTY = -2

# Stands in for the hardware exchange instruction used by the compiled splice.
_xchg_lock = threading.Lock()


def _cmp(c, top, a, b, psign):
    if top[a]:
        return 0 if top[b] else 1
    if top[b]:
        return -1
    ca, cb = c[a], c[b]
    for k in range(len(psign) - 1, -1, -1):
        x, y = ca[k], cb[k]
        if x != y:
            if psign[k] > 0:
                return 1 if x > y else -1
            return 1 if x < y else -1
    return 0


def odd_trap(ptr, succ, owner):
    n = len(owner)
    ptr, succ = ptr.tolist(), succ.tolist()
    inset = [o == 1 for o in owner.tolist()]
    preds = [[] for _ in range(n)]
    cnt = [0] * n
    for v in range(n):
        for u in succ[ptr[v]:ptr[v + 1]]:
            preds[u].append(v)
            if inset[v] and inset[u]:
                cnt[v] += 1
    queue = deque(v for v in range(n) if inset[v] and cnt[v] == 0)
    for v in queue:
        inset[v] = False
    while queue:
        u = queue.popleft()
        for v in preds[u]:
            if inset[v]:
                cnt[v] -= 1
                if cnt[v] == 0:
                    inset[v] = False
                    queue.append(v)
    return np.array(inset, dtype=np.uint8)


def valuation_seq(choice, pri_idx, d):
    N = len(choice)
    sink = N - 1
    choice = choice.tolist()
    pri_idx = pri_idx.tolist()
    children = [[] for _ in range(N)]
    for v in range(sink):
        children[choice[v]].append(v)
    rows = [None] * N
    rows[sink] = [0] * d
    queue = deque([sink])
    while queue:
        p = queue.popleft()
        for v in children[p]:
            row = list(rows[p])
            row[pri_idx[v]] += 1
            rows[v] = row
            queue.append(v)
    counts = np.zeros((N, d), dtype=np.int64)
    top = np.ones(N, dtype=np.uint8)
    for v, row in enumerate(rows):
        if row is not None:
            counts[v] = row
            top[v] = 0
    return counts, top


def euler_splice(choice, start, suc, head, lo, hi):
    n = len(choice) - 1
    for v in range(lo, hi):
        u = int(choice[v])
        with _xchg_lock:
            old = int(start[u])
            start[u] = v
        if old == EMPTY:
            head[0] = v + n
        else:
            suc[old] = v + n


def euler_join(start, suc, lo, hi):
    for v in range(lo, hi):
        suc[start[v]] = v


def rank_walk(suc, w_idx, w_sign, sid, splitters, lo, hi, local, owner, sub_total, sub_next, sub_cyclic):
    m = len(suc)
    d = local.shape[1]
    suc_l = suc.tolist()
    widx = w_idx.tolist()
    wsign = w_sign.tolist()
    sid_l = sid.tolist()
    for i in range(lo, hi):
        e = int(splitters[i])
        acc = [0] * d
        local[e] = 0
        owner[e] = i
        acc[widx[e]] += wsign[e]
        nxt = suc_l[e]
        steps = 0
        cyclic = False
        while nxt != END and sid_l[nxt] < 0:
            if steps >= m:
                cyclic = True
                break
            local[nxt] = acc
            owner[nxt] = i
            acc[widx[nxt]] += wsign[nxt]
            nxt = suc_l[nxt]
            steps += 1
        sub_total[i] = acc
        if cyclic or nxt == END:
            sub_next[i] = END
        else:
            sub_next[i] = sid_l[nxt]
            cyclic = sid_l[nxt] == i
        sub_cyclic[i] = cyclic


def rank_reduced(sub_total, sub_next, sub_cyclic, red_rank, red_top):
    s = len(sub_next)
    red_top[:] = 1
    if s == 0:
        return
    red_top[0] = 0
    red_rank[0] = 0
    cur, steps = 0, 0
    while not sub_cyclic[cur] and sub_next[cur] != END and steps < s:
        nxt = int(sub_next[cur])
        if not red_top[nxt]:
            break
        red_top[nxt] = 0
        red_rank[nxt] = red_rank[cur] + sub_total[cur]
        cur = nxt
        steps += 1
    if sub_cyclic[cur] or sub_next[cur] != END:
        # the head's chain never terminates
        red_top[:] = 1


def rank_combine(owner, local, red_rank, red_top, lo, hi, out, out_top):
    own = owner[lo:hi]
    ok = own >= 0
    ok[ok] = red_top[own[ok]] == 0
    out_top[lo:hi] = ~ok
    idx = np.flatnonzero(ok) + lo
    out[idx] = red_rank[owner[idx]] + local[idx]


def switch_targets(ptr, succ, owner, player, choice, counts, top, psign, out, lo, hi):
    dirn = 1 if player == 0 else -1
    ptr_l, succ_l = ptr.tolist(), succ.tolist()
    own = owner.tolist()
    c = counts.tolist()
    tp = top.tolist()
    ps = psign.tolist()
    for v in range(lo, hi):
        if own[v] != player:
            continue
        best = succ_l[ptr_l[v]]
        for u in succ_l[ptr_l[v] + 1:ptr_l[v + 1]]:
            r = _cmp(c, tp, u, best, ps) * dirn
            if r > 0 or (r == 0 and u < best):
                best = u
        out[v] = best if _cmp(c, tp, best, int(choice[v]), ps) * dirn > 0 else -1


def bf_pass(ptr, succ, owner, pri_idx, choice, counts, top, psign):
    n = len(owner) - 1
    d = counts.shape[1]
    ptr_l, succ_l = ptr.tolist(), succ.tolist()
    own = owner.tolist()
    pidx = pri_idx.tolist()
    ps = psign.tolist()
    c = counts.tolist()
    tp = top.tolist()
    ch = choice.tolist()
    changed = False
    for v in range(n):
        if own[v] == 0:
            best = ch[v]
        else:
            best = succ_l[ptr_l[v]]
            for u in succ_l[ptr_l[v] + 1:ptr_l[v + 1]]:
                r = _cmp(c, tp, u, best, ps)
                if r < 0 or (r == 0 and u < best):
                    best = u
            ch[v] = best
        if tp[best]:
            if not tp[v]:
                tp[v] = 1
                changed = True
            continue
        row = list(c[best])
        row[pidx[v]] += 1
        if tp[v] or row != c[v]:
            c[v] = row
            tp[v] = 0
            changed = True
    if d:
        counts[:] = c
    top[:] = tp
    choice[:] = ch
    return changed
