"""Determinant bound for (1,-1) matrices of order 2 mod 4, feasible
parameters for the skew circulant designs attaining it, and end-to-end
certification that a suitable pair really produces such a design.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Optional

from .core import ParameterError, SdsPair, SdsParams, derive_params
from .matrices import (
    DesignMatrix,
    GramCertificate,
    build_design,
    exact_determinant,
    verify_gram_pair,
)
from .search import (
    DEFAULT_NODE_BUDGET,
    BudgetExceeded,
    ClassificationResult,
    classify,
)


@dataclass(frozen=True)
class DoptParams:
    """Feasible (n, r, k) for a skew circulant design of order n = 2v."""

    n: int
    v: int
    r: int
    k: int
    bound: int
    two_squares_ok: bool

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n, self.r, self.k)


@dataclass(frozen=True)
class CertifiedDesign:
    pair: SdsPair
    design: DesignMatrix
    certificate: GramCertificate
    determinant: int
    bound: int

    @property
    def meets_bound(self) -> bool:
        return abs(self.determinant) == self.bound


def ehlich_bound(n: int) -> int:
    """The maximal-determinant bound (2n-2) * (n-2)^((n-2)/2), exactly."""
    if n <= 2 or n % 4 != 2:
        raise ParameterError(f"order must be > 2 and congruent to 2 mod 4, got {n}")
    return (2 * n - 2) * (n - 2) ** ((n - 2) // 2)


def sum_two_squares(m: int) -> Optional[tuple[int, int]]:
    """A witness a^2 + b^2 = m with a <= b, preferring balanced splits."""
    if m < 0:
        raise ParameterError("m must be nonnegative")
    b = isqrt((m + 1) // 2)
    if 2 * b * b < m:
        b += 1
    while b * b <= m:
        a2 = m - b * b
        a = isqrt(a2)
        if a * a == a2:
            return (a, b)
        b += 1
    return None


def feasible_dopt_params(n_max: int) -> list[DoptParams]:
    """All (n, r, k) with n = 2v <= n_max, r = (v-1)/2 and the square
    condition (v-2k)^2 = 4v - 3 solvable; k is recovered in closed form."""
    out: list[DoptParams] = []
    for v in range(3, n_max // 2 + 1, 2):
        s = isqrt(4 * v - 3)
        if s * s != 4 * v - 3:
            continue
        k = (v - s) // 2
        r = (v - 1) // 2
        if not 0 <= k < r:
            continue
        n = 2 * v
        out.append(
            DoptParams(
                n=n,
                v=v,
                r=r,
                k=k,
                bound=ehlich_bound(n),
                two_squares_ok=sum_two_squares(2 * n - 2) is not None,
            )
        )
    return out


def sds_to_dopt(pair: SdsPair) -> CertifiedDesign:
    """Build and certify the order-2v design induced by the pair.

    Requires lambda = r + k - (v-1)/2, checks the Gram identity with
    (alpha, beta) = (2v-2, 2), computes the exact determinant, and insists
    it attains the maximal-determinant bound.
    """
    p = pair.params
    if p.lam != p.r + p.k - (p.v - 1) // 2:
        raise ParameterError(
            f"lambda = {p.lam} but the design class needs r + k - (v-1)/2 = "
            f"{p.r + p.k - (p.v - 1) // 2}"
        )
    cert = verify_gram_pair(pair.A, pair.B, p)
    if not cert.holds:
        raise ParameterError("pair fails the Gram identity; not an SDS")
    if cert.alpha != 2 * p.v - 2 or cert.beta != 2:
        raise ParameterError("Gram coefficients are not (2v-2, 2)")
    design = build_design(pair.A, pair.B)
    det = exact_determinant(design)
    bound = ehlich_bound(2 * p.v)
    if abs(det) != bound:
        raise ParameterError(
            f"determinant {det} does not attain the bound {bound}"
        )
    return CertifiedDesign(pair, design, cert, det, bound)


def _dopt_sds_params(dp: DoptParams) -> SdsParams:
    # with r = (v-1)/2 the induced lambda collapses to k
    params = derive_params(dp.v, dp.k)
    if params is None or params.lam != dp.k:
        raise ParameterError(
            f"no consistent SDS parameters for design order {dp.n}"
        )
    return params


def classify_dopt(
    n: int,
    *,
    jobs: int = 1,
    budget: Optional[int] = DEFAULT_NODE_BUDGET,
    cache_dir=None,
) -> ClassificationResult:
    """Classify order-n skew circulant designs attaining the bound.

    Delegates to the SDS classification at (v, (v-1)/2, k, k); every
    representative is run through sds_to_dopt as a certification gate.
    Over-budget searches return a not-attempted marker.
    """
    match = [dp for dp in feasible_dopt_params(n) if dp.n == n]
    if not match:
        raise ParameterError(f"no feasible design parameters at order {n}")
    params = _dopt_sds_params(match[0])
    try:
        result = classify(params, jobs=jobs, budget=budget, cache_dir=cache_dir)
    except BudgetExceeded as exc:
        return ClassificationResult(
            params,
            None,
            (),
            {"estimate": exc.estimate, "budget": exc.budget},
            attempted=False,
            reason="budget",
        )
    for rep in result.representatives:
        sds_to_dopt(rep)
    return result
