"""Compiled SCL core shared by every variant.

Per-path memories are rows of (L, N) arrays. Level t of the LLR tree
(2**t values) lives at ``alpha[s, 2**t : 2**(t+1)]`` and the left-child
partial sums of level t at the same slice of ``beta``; level n is the
channel LLR vector itself. Path slots are recycled through a free list and
``active`` holds the live slots in list order.
"""
import numpy as np
from numba import njit

PLAIN, CK, CR, CS = 0, 1, 2, 3
FROZEN, MESSAGE, CRC_BIT = 0, 1, 2

ST_OK, ST_ET, ST_NOVALID = 0, 1, 2


@njit(cache=True, inline="always")
def _penalty(lam, bit):
    if (lam < 0.0 and bit == 0) or (lam > 0.0 and bit == 1):
        return abs(lam)
    return 0.0


@njit(cache=True)
def _f_level(dst, src, h):
    for j in range(h):
        a = src[j]
        b = src[j + h]
        m = min(abs(a), abs(b))
        s = np.sign(a) * np.sign(b)
        dst[j] = s * m


@njit(cache=True)
def _update_alpha(al, bl, llr, i, n):
    if i == 0:
        t0 = n - 1
        h = 1 << t0
        _f_level(al[h:2 * h], llr, h)
    else:
        t0 = 0
        while not (i >> t0) & 1:
            t0 += 1
        h = 1 << t0
        if t0 + 1 == n:
            parent = llr
        else:
            parent = al[2 * h:4 * h]
        for j in range(h):
            al[h + j] = parent[j + h] + (1.0 - 2.0 * bl[h + j]) * parent[j]
    for t in range(t0 - 1, -1, -1):
        h = 1 << t
        _f_level(al[h:2 * h], al[2 * h:4 * h], h)


@njit(cache=True)
def _update_beta(bl, scratch, bit, i, n):
    scratch[0] = bit
    t = 0
    while t < n and (i >> t) & 1:
        h = 1 << t
        for j in range(h):
            scratch[h + j] = scratch[j]
            scratch[j] ^= bl[h + j]
        t += 1
    if t < n:
        h = 1 << t
        for j in range(h):
            bl[h + j] = scratch[j]


@njit(cache=True)
def _copy_tree(al_src, bl_src, al_dst, bl_dst, i, n):
    # only levels that can still be read after bit i: LLRs of nodes with
    # leaves left to decode, partial sums of completed left siblings
    for t in range(n):
        h = 1 << t
        low = i & (h - 1)
        if low != h - 1:
            for j in range(h):
                al_dst[h + j] = al_src[h + j]
        if (i >> t) & 1:
            for j in range(h):
                bl_dst[h + j] = bl_src[h + j]


@njit(cache=True)
def _parity_from_history(u_row, role, ref, row_masks, upto, p):
    acc = np.uint64(0)
    for k in range(upto):
        if role[k] == MESSAGE and u_row[k] == 1:
            acc ^= row_masks[ref[k]]
    return (acc >> np.uint64(p)) & np.uint64(1)


@njit(cache=True)
def scl_kernel(llr, role, ref, crc_order, row_masks, L, variant, select_valid, trace, live_trace):
    """Run one list decode.

    Returns ``(status, et_order, best, nlive, active, u, pm, ok, violations)``
    where ``best`` is the slot of the selected path (-1 if none) and
    ``violations`` counts, in trace mode, CR survivors whose decided CRC bit
    disagrees with a parity recomputed from their full bit history.
    """
    N = llr.shape[0]
    n = 0
    while (1 << n) < N:
        n += 1
    alpha = np.zeros((L, N))
    beta = np.zeros((L, N), dtype=np.uint8)
    u = np.zeros((L, N), dtype=np.uint8)
    pm = np.zeros(L)
    acc = np.zeros(L, dtype=np.uint64)
    ok = np.ones(L, dtype=np.bool_)
    active = np.zeros(L, dtype=np.int64)
    new_active = np.zeros(L, dtype=np.int64)
    free = np.zeros(L, dtype=np.int64)
    nfree = 0
    for s in range(L - 1, 0, -1):
        free[nfree] = s
        nfree += 1
    nlive = 1
    cand = np.zeros(2 * L)
    keep = np.zeros(2 * L, dtype=np.bool_)
    valid = np.zeros(L, dtype=np.bool_)
    scratch = np.zeros(N, dtype=np.uint8)
    status = ST_OK
    et_order = 0
    violations = 0

    for i in range(N):
        for a in range(nlive):
            s = active[a]
            _update_alpha(alpha[s], beta[s], llr, i, n)
        kind = role[i]

        if kind == FROZEN or (kind == CRC_BIT and variant == CS):
            p = ref[i]
            for a in range(nlive):
                s = active[a]
                bit = 0
                if kind == CRC_BIT:
                    bit = np.uint8((acc[s] >> np.uint64(p)) & np.uint64(1))
                pm[s] += _penalty(alpha[s, 1], bit)
                u[s, i] = bit
        else:
            ncand = 2 * nlive
            for a in range(nlive):
                s = active[a]
                lam = alpha[s, 1]
                cand[2 * a] = pm[s] + _penalty(lam, 0)
                cand[2 * a + 1] = pm[s] + _penalty(lam, 1)
            if ncand <= L:
                for c in range(ncand):
                    keep[c] = True
            else:
                for c in range(ncand):
                    keep[c] = False
                order = np.argsort(cand[:ncand], kind="mergesort")
                for c in range(L):
                    keep[order[c]] = True
            for a in range(nlive):
                if not keep[2 * a] and not keep[2 * a + 1]:
                    free[nfree] = active[a]
                    nfree += 1
            m = 0
            for a in range(nlive):
                s = active[a]
                k0 = keep[2 * a]
                k1 = keep[2 * a + 1]
                if k0 and k1:
                    nfree -= 1
                    t = free[nfree]
                    _copy_tree(alpha[s], beta[s], alpha[t], beta[t], i, n)
                    u[t, :i] = u[s, :i]
                    acc[t] = acc[s]
                    ok[t] = ok[s]
                    pm[s] = cand[2 * a]
                    u[s, i] = 0
                    pm[t] = cand[2 * a + 1]
                    u[t, i] = 1
                    new_active[m] = s
                    new_active[m + 1] = t
                    m += 2
                elif k0:
                    pm[s] = cand[2 * a]
                    u[s, i] = 0
                    new_active[m] = s
                    m += 1
                elif k1:
                    pm[s] = cand[2 * a + 1]
                    u[s, i] = 1
                    new_active[m] = s
                    m += 1
            nlive = m
            for a in range(nlive):
                active[a] = new_active[a]

            if kind == MESSAGE:
                row = row_masks[ref[i]]
                for a in range(nlive):
                    s = active[a]
                    if u[s, i] == 1:
                        acc[s] ^= row
            elif kind == CRC_BIT:
                p = ref[i]
                nvalid = 0
                for a in range(nlive):
                    s = active[a]
                    exp = np.uint8((acc[s] >> np.uint64(p)) & np.uint64(1))
                    valid[a] = u[s, i] == exp
                    if valid[a]:
                        nvalid += 1
                    else:
                        ok[s] = False
                if (variant == CK or variant == CR) and nvalid == 0:
                    status = ST_ET
                    et_order = crc_order[i]
                    if trace:
                        live_trace[i] = nlive
                    break
                if variant == CR and nvalid < nlive:
                    m = 0
                    for a in range(nlive):
                        s = active[a]
                        if valid[a]:
                            new_active[m] = s
                            m += 1
                        else:
                            free[nfree] = s
                            nfree += 1
                    nlive = m
                    for a in range(nlive):
                        active[a] = new_active[a]
                if trace and variant == CR:
                    for a in range(nlive):
                        s = active[a]
                        if _parity_from_history(u[s], role, ref, row_masks, i, p) != u[s, i]:
                            violations += 1

        if trace:
            live_trace[i] = nlive
        for a in range(nlive):
            s = active[a]
            _update_beta(beta[s], scratch, u[s, i], i, n)

    best = -1
    if status == ST_OK:
        best_pm = np.inf
        for a in range(nlive):
            s = active[a]
            if select_valid and not ok[s]:
                continue
            if pm[s] < best_pm:
                best_pm = pm[s]
                best = s
        if best < 0:
            status = ST_NOVALID
    return status, et_order, best, nlive, active, u, pm, ok, violations
