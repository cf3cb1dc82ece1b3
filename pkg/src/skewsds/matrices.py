"""Circulant (1,-1) matrices built from subsets, the 2v x 2v two-block
design they induce, Gram-identity certification, and exact integer
determinants via fraction-free elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import ParameterError, SdsParams, SubsetZv


@dataclass(frozen=True)
class SignRow:
    """First row of a circulant (1,-1) matrix; entry i+1 is -1 iff i in X."""

    v: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.v:
            raise ParameterError("row length must equal v")
        if any(e not in (1, -1) for e in self.entries):
            raise ParameterError("row entries must be +1 or -1")

    @property
    def minus_count(self) -> int:
        return sum(1 for e in self.entries if e == -1)


@dataclass(frozen=True)
class CirculantMatrix:
    first_row: SignRow

    @property
    def v(self) -> int:
        return self.first_row.v

    def to_array(self) -> np.ndarray:
        """Materialize: row t is the cyclic right-shift of the first row by t."""
        v = self.v
        first = np.array(self.first_row.entries, dtype=np.int64)
        out = np.empty((v, v), dtype=np.int64)
        for t in range(v):
            out[t] = np.roll(first, t)
        return out

    def autocorrelation(self) -> tuple[int, ...]:
        """a(s) = sum_i r_i r_{i+s}; (R R^T)_{t,u} depends only on u - t."""
        r = self.first_row.entries
        v = self.v
        return tuple(
            sum(r[i] * r[(i + s) % v] for i in range(v)) for s in range(v)
        )


@dataclass(frozen=True)
class DesignMatrix:
    """Block matrix [[R1, R2], [-R2^T, R1^T]] of order 2v."""

    r1: CirculantMatrix
    r2: CirculantMatrix

    def __post_init__(self) -> None:
        if self.r1.v != self.r2.v:
            raise ParameterError("blocks must have equal order")

    @property
    def v(self) -> int:
        return self.r1.v

    @property
    def order(self) -> int:
        return 2 * self.r1.v

    def to_array(self) -> np.ndarray:
        m1 = self.r1.to_array()
        m2 = self.r2.to_array()
        return np.block([[m1, m2], [-m2.T, m1.T]])


@dataclass(frozen=True)
class GramCertificate:
    """Outcome of checking M M^T = diag(alpha I + beta J, alpha I + beta J)."""

    alpha: int
    beta: int
    holds: bool
    violation: Optional[str] = None


def subset_to_row(x: SubsetZv) -> SignRow:
    return SignRow(x.v, tuple(-1 if i in x else 1 for i in range(x.v)))


def row_to_subset(row: SignRow) -> SubsetZv:
    return SubsetZv.of(row.v, (i for i, e in enumerate(row.entries) if e == -1))


def row_is_skew(row: SignRow) -> bool:
    """Skewness of the circulant: r_1 = +1 and r_i = -r_{v+2-i} for i >= 2."""
    r = row.entries
    v = row.v
    if r[0] != 1:
        return False
    return all(r[j] == -r[v - j] for j in range(1, v))


def build_design(a: SubsetZv, b: SubsetZv) -> DesignMatrix:
    if a.v != b.v:
        raise ParameterError("subsets over different moduli")
    return DesignMatrix(
        CirculantMatrix(subset_to_row(a)), CirculantMatrix(subset_to_row(b))
    )


def design_is_skew(m: DesignMatrix) -> bool:
    """Entrywise check of M - I = -(M - I)^T."""
    arr = m.to_array()
    shifted = arr - np.eye(m.order, dtype=np.int64)
    return bool(np.array_equal(shifted, -shifted.T))


def verify_gram_pair(a: SubsetZv, b: SubsetZv, params: SdsParams) -> GramCertificate:
    """Check R1 R1^T + R2 R2^T = alpha I + beta J via row autocorrelations.

    Both Gram matrices are circulant, so the identity holds iff the two
    autocorrelations sum to alpha + beta at shift 0 (automatic for sign
    rows) and to beta at every other shift.  No v x v product is formed.
    """
    if len(a) != params.r:
        raise ParameterError(f"|A| = {len(a)} but r = {params.r}")
    if len(b) != params.k:
        raise ParameterError(f"|B| = {len(b)} but k = {params.k}")
    alpha, beta = params.alpha, params.beta
    ac1 = CirculantMatrix(subset_to_row(a)).autocorrelation()
    ac2 = CirculantMatrix(subset_to_row(b)).autocorrelation()
    v = params.v
    holds = ac1[0] + ac2[0] == alpha + beta and all(
        ac1[s] + ac2[s] == beta for s in range(1, v)
    )
    return GramCertificate(alpha, beta, holds, None if holds else "gram")


def _as_int_array(m) -> np.ndarray:
    if isinstance(m, DesignMatrix):
        return m.to_array()
    arr = np.asarray(m)
    if arr.ndim != 2:
        raise ParameterError("matrix must be two-dimensional")
    if arr.dtype == object or np.issubdtype(arr.dtype, np.integer):
        return arr
    if np.issubdtype(arr.dtype, np.floating) and np.all(arr == np.round(arr)):
        return arr.astype(np.int64)
    raise ParameterError("matrix entries must be integers")


def verify_c1c3(m) -> GramCertificate:
    """Certify the three block-design conditions on a (1,-1) matrix.

    C1: order 2d with d odd; C2: M - I skew-symmetric; C3: M M^T equals
    diag(alpha I + beta J, alpha I + beta J) with alpha >= 2, beta >= 1.
    The extracted (alpha, beta) ride along in the certificate.
    """
    arr = _as_int_array(m)
    n = arr.shape[0]
    if arr.shape[0] != arr.shape[1]:
        raise ParameterError("matrix must be square")
    if not np.all(np.abs(arr) == 1):
        raise ParameterError("matrix entries must be +1 or -1")
    if n % 2 != 0 or (n // 2) % 2 != 1:
        return GramCertificate(0, 0, False, "C1")
    shifted = arr - np.eye(n, dtype=arr.dtype)
    if not np.array_equal(shifted, -shifted.T):
        return GramCertificate(0, 0, False, "C2")
    d = n // 2
    gram = arr @ arr.T
    if np.any(gram[:d, d:]) or np.any(gram[d:, :d]):
        return GramCertificate(0, 0, False, "C3")
    beta = int(gram[0, 1]) if d > 1 else 0
    alpha = int(gram[0, 0]) - beta
    expected = alpha * np.eye(d, dtype=np.int64) + beta * np.ones((d, d), np.int64)
    if (
        alpha < 2
        or beta < 1
        or not np.array_equal(gram[:d, :d], expected)
        or not np.array_equal(gram[d:, d:], expected)
    ):
        return GramCertificate(0, 0, False, "C3")
    return GramCertificate(alpha, beta, True)


def exact_determinant(m) -> int:
    """Exact integer determinant by one-step fraction-free elimination.

    Works on arbitrary-precision Python integers; every interior division
    is checked to be exact, so no rounding can creep in.
    """
    if isinstance(m, DesignMatrix):
        rows: Sequence[Sequence[int]] = m.to_array().tolist()
    elif isinstance(m, np.ndarray):
        if m.ndim != 2:
            raise ParameterError("matrix must be two-dimensional")
        if not np.issubdtype(m.dtype, np.integer) and m.dtype != object:
            raise ParameterError("matrix entries must be integers")
        rows = m.tolist()
    else:
        rows = m
    a = [[int(x) for x in row] for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ParameterError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for j in range(n - 1):
        pivot_row = next((i for i in range(j, n) if a[i][j] != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != j:
            a[j], a[pivot_row] = a[pivot_row], a[j]
            sign = -sign
        pivot = a[j][j]
        for i in range(j + 1, n):
            row_i, row_j = a[i], a[j]
            factor = row_i[j]
            for c in range(j + 1, n):
                num = row_i[c] * pivot - factor * row_j[c]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("fraction-free elimination lost exactness")
                row_i[c] = q
            row_i[j] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# plain-text interchange format used by the CLI


def format_matrix(arr) -> str:
    a = _as_int_array(arr)
    lines = [str(a.shape[0])]
    for row in a.tolist():
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ValueError("first line must be the matrix order") from exc
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = [int(tok) for tok in ln.split()]
        if len(row) != n:
            raise ValueError("row length differs from declared order")
        rows.append(row)
    return np.array(rows, dtype=np.int64)
