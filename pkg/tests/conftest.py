"""Independent brute-force oracles the library is checked against.

Everything here recomputes from first principles (ordered-pair scans,
explicit orbit enumeration, cofactor expansion) and deliberately avoids
the library's own code paths.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import gcd


def brute_profile(v: int, elements) -> tuple[int, ...]:
    """Difference counts by scanning all ordered pairs."""
    counts = [0] * v
    elems = list(elements)
    for x in elems:
        for y in elems:
            if x != y:
                counts[(y - x) % v] += 1
    return tuple(counts[1:])


def brute_is_sds(v: int, a, b, lam: int) -> bool:
    pa = brute_profile(v, a)
    pb = brute_profile(v, b)
    return all(x + y == lam for x, y in zip(pa, pb))


def brute_is_skew(v: int, a) -> bool:
    s = set(a)
    return 0 not in s and all((v - x) % v not in s for x in s)


def all_skew_half_sets(v: int) -> list[tuple[int, ...]]:
    """Every A = A' union {v-j : j not in A'} over subsets A' of {1..(v-1)/2}."""
    h = (v - 1) // 2
    out = []
    for bits in range(1 << h):
        a = [
            (j + 1) if (bits >> j) & 1 else (v - j - 1)
            for j in range(h)
        ]
        out.append(tuple(sorted(a)))
    return out


def brute_canonical_b(v: int, k: int, lam: int) -> list[tuple[int, ...]]:
    """Translate-minimal k-subsets with all counts <= lam, by definition."""
    out = []
    for comb in itertools.combinations(range(v), k):
        translates = [
            tuple(sorted((x + b) % v for x in comb)) for b in range(v)
        ]
        if tuple(comb) != min(translates):
            continue
        if all(c <= lam for c in brute_profile(v, comb)):
            out.append(tuple(comb))
    return out


def brute_units(v: int) -> list[int]:
    return [d for d in range(1, v) if gcd(d, v) == 1]


def brute_orbit_min(v: int, a, b) -> tuple:
    """Least pair over all (±dA+t, ±dB+u), scanning the whole group."""
    best = None
    for d in brute_units(v):
        for sa in (1, -1):
            for sb in (1, -1):
                for t in range(v):
                    ia = tuple(sorted((sa * d * x + t) % v for x in a))
                    for u in range(v):
                        ib = tuple(sorted((sb * d * x + u) % v for x in b))
                        cand = (ia, ib)
                        if best is None or cand < best:
                            best = cand
    return best


def brute_class_count(v: int, k: int, lam: int) -> int:
    """Classification count by full scan: every skew A against every
    k-subset B, then orbit reduction by brute minimum."""
    matched = []
    for a in all_skew_half_sets(v):
        pa = brute_profile(v, a)
        if any(c > lam for c in pa):
            continue
        for b in itertools.combinations(range(v), k):
            if all(x + y == lam for x, y in zip(pa, brute_profile(v, b))):
                matched.append((a, b))
    classes = {brute_orbit_min(v, a, b) for a, b in matched}
    return len(classes)


def cofactor_det(matrix) -> int:
    """Expansion by minors down the rows, memoized on the column set."""
    rows = [list(map(int, row)) for row in matrix]
    n = len(rows)

    @lru_cache(maxsize=None)
    def minor(i: int, cols: int) -> int:
        if cols == 0:
            return 1
        total = 0
        sign = 1
        rest = cols
        while rest:
            low = rest & -rest
            j = low.bit_length() - 1
            entry = rows[i][j]
            if entry:
                total += sign * entry * minor(i + 1, cols ^ low)
            sign = -sign
            rest ^= low
        return total

    return minor(0, (1 << n) - 1)


def exhaustive_two_square_decompositions(m: int) -> list[tuple[int, int]]:
    out = []
    a = 0
    while a * a * 2 <= m:
        rest = m - a * a
        b = int(rest**0.5)
        for cand in (b - 1, b, b + 1):
            if cand >= a and cand * cand == rest:
                out.append((a, cand))
        a += 1
    return sorted(set(out))
