"""Known-good generators and design-theoretic predicates: the quadratic
non-residue construction for primes p = 3 mod 4, plain difference-set
verification, and the incidence-matrix characterization M + M^T + I = J.
"""

from __future__ import annotations

import numpy as np

from .core import (
    ParameterError,
    SdsPair,
    SdsParams,
    SubsetZv,
    diff_profile,
    is_skew,
)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def is_difference_set(a: SubsetZv, k: int, lam: int) -> bool:
    """True iff |A| = k and every nonzero difference occurs exactly lam times."""
    if len(a) != k:
        raise ParameterError(f"|A| = {len(a)} but k = {k}")
    return diff_profile(a).is_constant(lam)


def qr_skew_sds(p: int, k01: int) -> SdsPair:
    """Skew pair (N, B) from the quadratic non-residues N mod p.

    Needs p prime with p = 3 mod 4 so that -1 is a non-residue, which makes
    negation swap residues and non-residues and hence N skew.  B is empty
    for k01 = 0 and {0} for k01 = 1; lambda comes out as (p-3)/4.
    """
    if not _is_prime(p) or p % 4 != 3:
        raise ParameterError(f"p must be a prime congruent to 3 mod 4, got {p}")
    if k01 not in (0, 1):
        raise ParameterError("k01 must be 0 or 1")
    residues = {(x * x) % p for x in range(1, p)}
    non_residues = [x for x in range(1, p) if x not in residues]
    a = SubsetZv.of(p, non_residues)
    b = SubsetZv.of(p, [0] if k01 else [])
    params = SdsParams(p, (p - 1) // 2, k01, (p - 3) // 4)
    return SdsPair(params, a, b)


def hadamard_design_check(a: SubsetZv) -> bool:
    """Does A generate a circulant symmetric design with M + M^T + I = J?

    Checks the difference-set property at lambda = (v-3)/4 together with the
    incidence-matrix identity, and cross-checks that the matrix route agrees
    with the set-level predicate (difference set and skew).
    """
    v = a.v
    if v % 4 != 3:
        raise ParameterError(f"v must be congruent to 3 mod 4, got {v}")
    if len(a) != (v - 1) // 2:
        raise ParameterError(
            f"|A| = {len(a)} but the design needs (v-1)/2 = {(v - 1) // 2}"
        )
    lam = (v - 3) // 4
    dset = is_difference_set(a, (v - 1) // 2, lam)
    incidence = np.zeros((v, v), dtype=np.int64)
    for t in range(v):
        for i in a:
            incidence[t][(t + i) % v] = 1
    matrix_ok = bool(
        np.array_equal(
            incidence + incidence.T + np.eye(v, dtype=np.int64),
            np.ones((v, v), dtype=np.int64),
        )
    )
    result = dset and matrix_ok
    if (dset and is_skew(a)) != result:
        raise RuntimeError("incidence-matrix route disagrees with set predicates")
    return result
