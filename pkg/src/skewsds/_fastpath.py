"""Compiled enumeration kernels for the classification pipeline.

Masks are uint64, so these kernels serve moduli v <= 63; the pure-Python
generators in search.py cover the rest and double as the reference
implementation the kernels are tested against.  All kernels are two-pass
(count, then fill an exactly-sized output) and release the GIL so that
partitioned runs can share a thread pool.
"""

import numpy as np
from numba import njit

_FNV_OFFSET = np.uint64(0xCBF29CE484222325)
_FNV_PRIME = np.uint64(0x100000001B3)
_U1 = np.uint64(1)

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, nogil=True, inline="always")
def _popcount64(x):
    x = x - ((x >> _U1) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(cache=True, nogil=True)
def profiles_for_masks(masks, v):
    """Difference profile of every mask: out[t, i-1] = P_X(i)."""
    n = masks.shape[0]
    out = np.zeros((n, v - 1), np.uint8)
    full = ((_U1 << np.uint64(v)) - _U1) if v < 64 else ~np.uint64(0)
    for t in range(n):
        m = masks[t]
        for i in range(1, v):
            r = ((m >> np.uint64(i)) | (m << np.uint64(v - i))) & full
            out[t, i - 1] = _popcount64(m & r)
    return out


@njit(cache=True, nogil=True)
def skew_dfs(v, lam, prefix, prefix_len, out):
    """Enumerate skew half-set completions with all difference counts <= lam.

    Level j (0-based) decides whether element j+1 or v-j-1 joins the set;
    when j < prefix_len the choice is pinned to bit (prefix_len-1-j) of
    prefix, which partitions the 2^((v-1)/2) space without reordering it.
    Returns the number of surviving sets and fills `out` when it has room.
    """
    h = (v - 1) // 2
    cnt = np.zeros(v, np.int16)
    elems = np.empty(h, np.int16)
    choice = np.empty(h, np.int8)
    n_out = 0
    cap = out.shape[0]
    j = 0
    c = 0
    while True:
        if j == h:
            if n_out < cap:
                m = np.uint64(0)
                for t in range(h):
                    m |= _U1 << np.uint64(elems[t])
                out[n_out] = m
            n_out += 1
            j -= 1
            e = elems[j]
            for t in range(j):
                d = e - elems[t]
                if d < 0:
                    d += v
                cnt[d] -= 1
                cnt[v - d] -= 1
            c = choice[j] + 1
            continue
        forced = j < prefix_len
        if forced:
            want = (prefix >> (prefix_len - 1 - j)) & 1
        else:
            want = -1
        if c >= 2 or (forced and c > want):
            if j == 0:
                break
            j -= 1
            e = elems[j]
            for t in range(j):
                d = e - elems[t]
                if d < 0:
                    d += v
                cnt[d] -= 1
                cnt[v - d] -= 1
            c = choice[j] + 1
            continue
        if forced and c < want:
            c = want
        e = (j + 1) if c == 0 else (v - j - 1)
        bad = False
        for t in range(j):
            d = e - elems[t]
            if d < 0:
                d += v
            cnt[d] += 1
            cnt[v - d] += 1
            if cnt[d] > lam or cnt[v - d] > lam:
                bad = True
        if bad:
            for t in range(j):
                d = e - elems[t]
                if d < 0:
                    d += v
                cnt[d] -= 1
                cnt[v - d] -= 1
            c += 1
            continue
        elems[j] = e
        choice[j] = c
        j += 1
        c = 0
    return n_out


@njit(cache=True, nogil=True, inline="always")
def _hash_in(h, table):
    lo = 0
    hi = table.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if table[mid] < h:
            lo = mid + 1
        else:
            hi = mid
    return lo < table.shape[0] and table[lo] == h


@njit(cache=True, nogil=True)
def canon_b_dfs(v, k, lam, b2_lo, b2_hi, key_hashes, out):
    """Enumerate translate-minimal k-subsets of Z_v with counts <= lam.

    Subsets are built as 0 = e_0 < e_1 < ... < e_{k-1} with e_1 (the first
    circular gap) restricted to [b2_lo, b2_hi] for partitioning.  Minimality
    of the set among its v translates equals minimality of the circular gap
    word among its rotations, so gaps smaller than the first gap are never
    extended and ties get a full rotation comparison at the leaf.

    When key_hashes is nonempty only leaves whose profile FNV hash occurs in
    it are emitted (exact re-matching happens on the caller's side).
    Requires k >= 2.  Returns the emitted count; fills `out` when sized.
    """
    cnt = np.zeros(v, np.int16)
    elems = np.empty(k, np.int16)
    nxt = np.empty(k + 1, np.int32)
    gaps = np.empty(k, np.int16)
    elems[0] = 0
    n_out = 0
    cap = out.shape[0]
    filtered = key_hashes.shape[0] > 0
    m = 1
    nxt[1] = b2_lo if b2_lo > 0 else 1
    while True:
        if m == k:
            g1 = elems[1]
            ok = v - elems[k - 1] >= g1
            if ok:
                for t in range(k - 1):
                    gaps[t] = elems[t + 1] - elems[t]
                gaps[k - 1] = v - elems[k - 1]
                for t in range(1, k):
                    if gaps[t] != g1:
                        continue
                    for o in range(1, k):
                        x = gaps[(t + o) % k]
                        y = gaps[o % k]
                        if x < y:
                            ok = False
                            break
                        if x > y:
                            break
                    if not ok:
                        break
            if ok and filtered:
                hsh = _FNV_OFFSET
                for i in range(1, v):
                    hsh = (hsh ^ np.uint64(cnt[i])) * _FNV_PRIME
                ok = _hash_in(hsh, key_hashes)
            if ok:
                if n_out < cap:
                    mk = np.uint64(0)
                    for t in range(k):
                        mk |= _U1 << np.uint64(elems[t])
                    out[n_out] = mk
                n_out += 1
            m -= 1
            e = elems[m]
            for t in range(m):
                d = e - elems[t]
                if d < 0:
                    d += v
                cnt[d] -= 1
                cnt[v - d] -= 1
            nxt[m] = e + 1
            continue
        lo = nxt[m]
        if m >= 2:
            jump = elems[m - 1] + elems[1]
            if lo < jump:
                lo = jump
        hi = v - (k - m)
        if m == 1:
            if hi > b2_hi:
                hi = b2_hi
            if k == 2 and hi > v // 2:
                hi = v // 2
        elif m == k - 1:
            wrap = v - elems[1]
            if hi > wrap:
                hi = wrap
        advanced = False
        for e in range(lo, hi + 1):
            bad = False
            for t in range(m):
                d = e - elems[t]
                if d < 0:
                    d += v
                cnt[d] += 1
                cnt[v - d] += 1
                if cnt[d] > lam or cnt[v - d] > lam:
                    bad = True
            if bad:
                for t in range(m):
                    d = e - elems[t]
                    if d < 0:
                        d += v
                    cnt[d] -= 1
                    cnt[v - d] -= 1
                continue
            elems[m] = e
            nxt[m] = e + 1
            m += 1
            nxt[m] = e + 1
            advanced = True
            break
        if not advanced:
            m -= 1
            if m == 0:
                break
            e = elems[m]
            for t in range(m):
                d = e - elems[t]
                if d < 0:
                    d += v
                cnt[d] -= 1
                cnt[v - d] -= 1
            nxt[m] = e + 1
    return n_out


def fnv1a64(data: bytes) -> int:
    """Python twin of the in-kernel profile hash (FNV-1a over key bytes)."""
    h = 0xCBF29CE484222325
    for byte in data:
        h = ((h ^ byte) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h
