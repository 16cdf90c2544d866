# cython: language_level=3
"""Compiled enumeration kernels, 64-bit masks.

Mirrors _kernels_pure exactly: same arguments, same results, same output
order.  finord.kernels routes calls here only when n <= 64.
"""

from finord.errors import BudgetError

IMPL = "compiled"

ctypedef unsigned long long u64


cdef int _popcount(u64 x):
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef int _lowbit_index(u64 x):
    cdef int i = 0
    while not (x & 1):
        x >>= 1
        i += 1
    return i


cdef struct ACState:
    int n
    int min_size
    long long limit          # -1 means unlimited
    bint hit_limit


cdef int _ac_extend(ACState *st, u64 comp[64], u64 mask, int size, int start,
                    u64 blocked, list out) except -1:
    cdef int j
    cdef u64 bit
    if size >= st.min_size:
        if st.limit >= 0 and len(out) >= st.limit:
            st.hit_limit = True
            return 1
        out.append(mask)
    for j in range(start, st.n):
        bit = (<u64>1) << j
        if not (blocked & bit):
            if _ac_extend(st, comp, mask | bit, size + 1, j + 1,
                          blocked | comp[j], out):
                return 1
    return 0


def antichains(int n, comp, int min_size=0, limit=None):
    """See _kernels_pure.antichains; identical contract, n <= 64 only."""
    if n > 64:
        raise ValueError("compiled kernel limited to 64 elements")
    cdef u64 comp_arr[64]
    cdef int i
    for i in range(n):
        comp_arr[i] = comp[i]
    cdef ACState st
    st.n = n
    st.min_size = min_size
    st.limit = -1 if limit is None else <long long>limit
    st.hit_limit = False
    out = []
    _ac_extend(&st, comp_arr, 0, 0, 0, 0, out)
    return out, st.hit_limit


cdef struct MapState:
    int n_p
    int n_q
    long long nodes
    long long node_budget
    bint over_budget
    u64 p_down[64]
    u64 p_up[64]
    u64 q_down[64]
    u64 q_up[64]
    u64 cand[64]
    int order[64]
    int f[64]
    int check_start[65]
    int check_elem[64]
    bint require_open


cdef u64 _down_image(MapState *st, int w):
    cdef u64 img = 0
    cdef u64 m = st.p_down[w]
    cdef int z
    while m:
        z = _lowbit_index(m)
        m &= m - 1
        img |= (<u64>1) << st.f[z]
    return img


cdef int _map_backtrack(MapState *st, int k, list out) except -1:
    cdef int x, v, z, i, w, n_undo
    cdef u64 m, bit, old, new
    cdef u64 undo_mask[64]
    cdef int undo_z[64]
    cdef bint ok
    if k == st.n_p:
        out.append(tuple([st.f[i] for i in range(st.n_p)]))
        return 0
    x = st.order[k]
    m = st.cand[x]
    while m:
        bit = m & (m - 1)
        bit ^= m          # lowest set bit of m
        m &= m - 1
        v = _lowbit_index(bit)
        st.nodes += 1
        if st.nodes > st.node_budget:
            st.over_budget = True
            return 1
        st.f[x] = v
        n_undo = 0
        ok = True
        for i in range(k + 1, st.n_p):
            z = st.order[i]
            old = st.cand[z]
            new = old
            if (st.p_up[x] >> z) & 1:
                new &= st.q_up[v]
            if (st.p_down[x] >> z) & 1:
                new &= st.q_down[v]
            if new != old:
                st.cand[z] = new
                undo_z[n_undo] = z
                undo_mask[n_undo] = old
                n_undo += 1
                if new == 0:
                    ok = False
                    break
        if ok and st.require_open:
            for i in range(st.check_start[k], st.check_start[k + 1]):
                w = st.check_elem[i]
                if _down_image(st, w) != st.q_down[st.f[w]]:
                    ok = False
                    break
        if ok:
            if _map_backtrack(st, k + 1, out):
                return 1
        for i in range(n_undo):
            st.cand[undo_z[i]] = undo_mask[i]
    st.f[x] = -1
    return 0


def enumerate_maps(int n_p, int n_q, p_down, p_up, q_down, q_up, allowed,
                   bint require_open, long long node_budget=10_000_000):
    """See _kernels_pure.enumerate_maps; identical contract, sizes <= 64."""
    if n_p > 64 or n_q > 64:
        raise ValueError("compiled kernel limited to 64 elements")
    if n_p == 0:
        return [()], 0

    cdef MapState st
    cdef int i, k, w, last, p
    cdef u64 full_q = ((<u64>1) << n_q) - 1 if n_q < 64 else <u64>0 - 1
    st.n_p = n_p
    st.n_q = n_q
    st.nodes = 0
    st.node_budget = node_budget
    st.over_budget = False
    st.require_open = require_open
    for i in range(n_p):
        st.p_down[i] = p_down[i]
        st.p_up[i] = p_up[i]
        st.cand[i] = allowed[i] & full_q
        st.f[i] = -1
    for i in range(n_q):
        st.q_down[i] = q_down[i]
        st.q_up[i] = q_up[i]

    order = sorted(range(n_p), key=lambda j: (_popcount(p_down[j]), j))
    cdef int pos[64]
    for k in range(n_p):
        st.order[k] = order[k]
        pos[order[k]] = k

    # CSR layout of the per-level openness checks
    counts = [0] * n_p
    lasts = [0] * n_p
    if require_open:
        for w in range(n_p):
            last = 0
            for p in range(n_p):
                if (st.p_down[w] >> p) & 1 and pos[p] > last:
                    last = pos[p]
            lasts[w] = last
            counts[last] += 1
    st.check_start[0] = 0
    for k in range(n_p):
        st.check_start[k + 1] = st.check_start[k] + counts[k]
    fill = [st.check_start[k] for k in range(n_p)]
    if require_open:
        for w in range(n_p):
            st.check_elem[fill[lasts[w]]] = w
            fill[lasts[w]] += 1

    out = []
    _map_backtrack(&st, 0, out)
    if st.over_budget:
        raise BudgetError("map search exceeded node budget",
                          used=st.nodes, budget=node_budget)
    return out, st.nodes
