"""Subsets of Z_v, difference profiles, SDS predicates, and the equivalence
group of multiplier / sign / translation maps with canonical forms.

Sets are stored as bitmasks (bit i set iff residue i is in the set), which
keeps translation, negation and lexicographic comparison cheap enough that
orbit canonicalization stays exact integer work throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator, Optional


class ParameterError(ValueError):
    """Declared parameters do not match the data they describe."""


class InfeasibleParameters(ValueError):
    """Parameters outside the normalized feasible range."""


# ---------------------------------------------------------------------------
# bitmask helpers


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _rot_right(mask: int, s: int, v: int) -> int:
    """Cyclic right shift in v bits: bit j of the result is bit (j+s) mod v."""
    s %= v
    if s == 0:
        return mask
    full = (1 << v) - 1
    return ((mask >> s) | (mask << (v - s))) & full


def _translate_mask(mask: int, a: int, v: int) -> int:
    # X + a: bit j set iff j - a mod v in X
    return _rot_right(mask, (v - a) % v, v)


def _scale_mask(mask: int, d: int, v: int) -> int:
    out = 0
    for i in _iter_bits(mask):
        out |= 1 << ((i * d) % v)
    return out


def _lex_less(x: int, y: int) -> bool:
    """Sorted-element lexicographic order for masks of equal popcount.

    The sorted lists agree below the lowest differing bit, so the mask
    holding that bit has the smaller element at the first difference.
    """
    z = x ^ y
    return z != 0 and (z & -z) & x != 0


def _min_translate_mask(mask: int, v: int) -> int:
    # The least translate of a nonempty set maps some element to 0, so only
    # |X| of the v translates can win.
    if mask == 0:
        return 0
    best = -1
    for s in _iter_bits(mask):
        cand = _rot_right(mask, s, v)
        if best < 0 or _lex_less(cand, best):
            best = cand
    return best


@lru_cache(maxsize=None)
def units(v: int) -> tuple[int, ...]:
    """U(Z_v): the multipliers coprime to v."""
    return tuple(d for d in range(1, v) if gcd(d, v) == 1)


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class SubsetZv:
    """A subset of Z_v stored as a v-bit mask."""

    v: int
    mask: int = 0

    def __post_init__(self) -> None:
        if self.v < 3:
            raise ParameterError(f"modulus must be >= 3, got {self.v}")
        if not 0 <= self.mask < (1 << self.v):
            raise ParameterError("bitmask has bits outside [0, v)")

    @classmethod
    def of(cls, v: int, elements: Iterable[int] = ()) -> "SubsetZv":
        mask = 0
        for e in elements:
            if not 0 <= e < v:
                raise ParameterError(f"element {e} outside Z_{v}")
            mask |= 1 << e
        return cls(v, mask)

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(_iter_bits(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return _iter_bits(self.mask)

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> (x % self.v)) & 1)

    def translate(self, a: int) -> "SubsetZv":
        return SubsetZv(self.v, _translate_mask(self.mask, a % self.v, self.v))

    def scale(self, d: int) -> "SubsetZv":
        return SubsetZv(self.v, _scale_mask(self.mask, d % self.v, self.v))

    def negate(self) -> "SubsetZv":
        return self.scale(self.v - 1)

    def complement(self) -> "SubsetZv":
        return SubsetZv(self.v, ((1 << self.v) - 1) ^ self.mask)

    def sort_key(self) -> tuple[int, ...]:
        return self.elements


@dataclass(frozen=True)
class DifferenceProfile:
    """P_X = (P_X(1), ..., P_X(v-1)): ordered-pair difference counts."""

    v: int
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) != self.v - 1:
            raise ParameterError("profile length must be v - 1")

    def plus(self, other: "DifferenceProfile") -> "DifferenceProfile":
        if self.v != other.v:
            raise ParameterError("profiles over different moduli")
        return DifferenceProfile(
            self.v, tuple(a + b for a, b in zip(self.counts, other.counts))
        )

    def is_constant(self, lam: int) -> bool:
        return all(c == lam for c in self.counts)

    def packed(self) -> bytes:
        """One byte per count; valid for the whole parameter range in scope."""
        if any(c > 0xFF for c in self.counts):
            raise ParameterError("profile entry exceeds one byte")
        return bytes(self.counts)


@dataclass(frozen=True)
class SdsParams:
    """Parameter tuple (v, r, k, lambda) with the counting identity enforced."""

    v: int
    r: int
    k: int
    lam: int

    def __post_init__(self) -> None:
        if self.v < 3 or self.v % 2 == 0:
            raise ParameterError(f"v must be odd and >= 3, got {self.v}")
        if not (0 <= self.r < self.v and 0 <= self.k < self.v) or self.lam < 0:
            raise ParameterError("sizes out of range")
        if self.r * (self.r - 1) + self.k * (self.k - 1) != self.lam * (self.v - 1):
            raise ParameterError(
                f"r(r-1)+k(k-1) != lambda(v-1) for (v,r,k,lambda)="
                f"({self.v},{self.r},{self.k},{self.lam})"
            )

    @property
    def alpha(self) -> int:
        return 4 * (self.r + self.k - self.lam)

    @property
    def beta(self) -> int:
        return 2 * (self.v - 2 * (self.r + self.k - self.lam))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.r, self.k, self.lam)


@dataclass(frozen=True)
class SdsPair:
    """A candidate pair (A, B); validity is checked by is_sds, not on build."""

    params: SdsParams
    A: SubsetZv
    B: SubsetZv

    def __post_init__(self) -> None:
        if self.A.v != self.params.v or self.B.v != self.params.v:
            raise ParameterError("subset modulus differs from declared v")

    def sort_key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.A.elements, self.B.elements)


@dataclass(frozen=True)
class GroupElement:
    """One equivalence map: (A, B) -> (s_a*d*A + a, s_b*d*B + b) mod v."""

    v: int
    d: int
    s_a: int
    s_b: int
    a: int
    b: int

    def __post_init__(self) -> None:
        if not 1 <= self.d < self.v or gcd(self.d, self.v) != 1:
            raise ParameterError(f"{self.d} is not a unit mod {self.v}")
        if self.s_a not in (1, -1) or self.s_b not in (1, -1):
            raise ParameterError("signs must be +1 or -1")
        if not (0 <= self.a < self.v and 0 <= self.b < self.v):
            raise ParameterError("translations out of range")

    @classmethod
    def identity(cls, v: int) -> "GroupElement":
        return cls(v, 1, 1, 1, 0, 0)

    def compose(self, other: "GroupElement") -> "GroupElement":
        """self applied after other."""
        if self.v != other.v:
            raise ParameterError("group elements over different moduli")
        v = self.v
        return GroupElement(
            v,
            (self.d * other.d) % v,
            self.s_a * other.s_a,
            self.s_b * other.s_b,
            (self.s_a * self.d * other.a + self.a) % v,
            (self.s_b * self.d * other.b + self.b) % v,
        )


# ---------------------------------------------------------------------------
# operations


def diff_profile(x: SubsetZv) -> DifferenceProfile:
    """Count ordered pairs of x at each nonzero difference mod v."""
    v, m = x.v, x.mask
    counts = tuple((m & _rot_right(m, i, v)).bit_count() for i in range(1, v))
    return DifferenceProfile(v, counts)


def is_sds(pair: SdsPair) -> bool:
    """True iff P_A + P_B is the constant vector (lambda, ..., lambda)."""
    p = pair.params
    if len(pair.A) != p.r:
        raise ParameterError(f"|A| = {len(pair.A)} but r = {p.r}")
    if len(pair.B) != p.k:
        raise ParameterError(f"|B| = {len(pair.B)} but k = {p.k}")
    v, am, bm = p.v, pair.A.mask, pair.B.mask
    for i in range(1, v):
        pa = (am & _rot_right(am, i, v)).bit_count()
        pb = (bm & _rot_right(bm, i, v)).bit_count()
        if pa + pb != p.lam:
            return False
    return True


def is_skew(a: SubsetZv) -> bool:
    """True iff 0 is not in A and A never contains both i and v - i."""
    if a.mask & 1:
        return False
    neg = _scale_mask(a.mask, a.v - 1, a.v)
    return a.mask & neg == 0


def derive_params(v: int, k: int) -> Optional[SdsParams]:
    """Feasible skew-normalized parameters for given v and k, if any.

    Sets r = (v-1)/2, solves the counting identity for lambda, and keeps the
    tuple only when lambda is a nonnegative integer and the Gram off-diagonal
    coefficient 2(v - 2(r+k-lambda)) stays >= 1.
    """
    if v < 3 or v % 2 == 0:
        raise ParameterError(f"v must be odd and >= 3, got {v}")
    if k < 0:
        raise ParameterError("k must be nonnegative")
    r = (v - 1) // 2
    if k >= r:
        raise InfeasibleParameters(
            f"k = {k} violates the normalization k < (v-1)/2 = {r}; "
            "apply complementation/swap first"
        )
    num = r * (r - 1) + k * (k - 1)
    if num % (v - 1) != 0:
        return None
    lam = num // (v - 1)
    if 2 * (v - 2 * (r + k - lam)) < 1:
        return None
    return SdsParams(v, r, k, lam)


def apply_group(g: GroupElement, pair: SdsPair) -> SdsPair:
    """Transform the pair by one multiplier/sign/translation map."""
    v = pair.params.v
    if g.v != v:
        raise ParameterError("group element modulus differs from pair")
    da = (g.s_a * g.d) % v
    db = (g.s_b * g.d) % v
    am = _translate_mask(_scale_mask(pair.A.mask, da, v), g.a, v)
    bm = _translate_mask(_scale_mask(pair.B.mask, db, v), g.b, v)
    return SdsPair(pair.params, SubsetZv(v, am), SubsetZv(v, bm))


def canonical_form(pair: SdsPair) -> SdsPair:
    """Lexicographically least pair over the orbit {(±dA+a, ±dB+b)}.

    Both translations are free, so each transformed set is reduced to its
    least translate independently; the A part is compared first, with the
    B part breaking ties.  Since -1 is a unit, scanning all multipliers u
    covers both signs on A, while B additionally tries -u for the same u.
    """
    v = pair.params.v
    am, bm = pair.A.mask, pair.B.mask
    best_a = best_b = -1
    for u in units(v):
        ca = _min_translate_mask(_scale_mask(am, u, v), v)
        if best_a >= 0 and _lex_less(best_a, ca):
            continue
        cb = _min_translate_mask(_scale_mask(bm, u, v), v)
        cb2 = _min_translate_mask(_scale_mask(bm, v - u, v), v)
        if _lex_less(cb2, cb):
            cb = cb2
        if best_a < 0 or _lex_less(ca, best_a):
            best_a, best_b = ca, cb
        elif ca == best_a and _lex_less(cb, best_b):
            best_b = cb
    return SdsPair(pair.params, SubsetZv(v, best_a), SubsetZv(v, best_b))


def are_equivalent(p: SdsPair, q: SdsPair) -> bool:
    """True iff the pairs lie in the same equivalence-group orbit."""
    if p.params != q.params:
        raise ParameterError(
            f"incomparable parameters {p.params.as_tuple()} vs {q.params.as_tuple()}"
        )
    return canonical_form(p) == canonical_form(q)
