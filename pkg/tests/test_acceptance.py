"""Acceptance gate for the shipped classification: each criterion pins its
tolerance exactly and prints an explicit pass line (run with -s to see them)."""

import json
import os
import random
import time

import pytest

from skewsds import (
    SdsPair,
    SdsParams,
    SubsetZv,
    apply_group,
    are_equivalent,
    canonical_form,
    classify,
    classify_all,
    classify_dopt,
    derive_params,
    diff_profile,
    ehlich_bound,
    exact_determinant,
    is_sds,
    is_skew,
    qr_skew_sds,
    table3_pair,
    units,
    verify_c1c3,
    verify_gram_pair,
)
from skewsds.core import GroupElement
from skewsds.cli import main as cli_main
from skewsds.fixtures import load_table3, record_to_pair
from skewsds.matrices import build_design

from conftest import brute_class_count, cofactor_det

RUN_EXTENDED = os.environ.get("SKEWSDS_RUN_EXTENDED") == "1"

# Every feasible parameter tuple with v <= 75; the classification counts
# below it are the published values the pipeline must reproduce exactly.
TABLE1 = [
    (3, 1, 0, 0),
    (7, 3, 0, 1), (7, 3, 1, 1),
    (11, 5, 0, 2), (11, 5, 1, 2),
    (13, 6, 3, 3),
    (15, 7, 0, 3), (15, 7, 1, 3),
    (19, 9, 0, 4), (19, 9, 1, 4),
    (21, 10, 6, 6),
    (23, 11, 0, 5), (23, 11, 1, 5),
    (25, 12, 4, 6),
    (27, 13, 0, 6), (27, 13, 1, 6),
    (29, 14, 7, 8),
    (31, 15, 0, 7), (31, 15, 1, 7), (31, 15, 6, 8), (31, 15, 10, 10),
    (35, 17, 0, 8), (35, 17, 1, 8),
    (37, 18, 10, 11),
    (39, 19, 0, 9), (39, 19, 1, 9),
    (41, 20, 5, 10),
    (43, 21, 0, 10), (43, 21, 1, 10), (43, 21, 7, 11), (43, 21, 15, 15),
    (45, 22, 11, 13),
    (47, 23, 0, 11), (47, 23, 1, 11),
    (49, 24, 9, 13),
    (51, 25, 0, 12), (51, 25, 1, 12),
    (53, 26, 14, 16),
    (55, 27, 0, 13), (55, 27, 1, 13),
    (57, 28, 21, 21),
    (59, 29, 0, 14), (59, 29, 1, 14),
    (61, 30, 6, 15), (61, 30, 10, 16), (61, 30, 15, 18),
    (63, 31, 0, 15), (63, 31, 1, 15),
    (67, 33, 0, 16), (67, 33, 1, 16), (67, 33, 12, 18), (67, 33, 22, 23),
    (69, 34, 18, 21),
    (71, 35, 0, 17), (71, 35, 1, 17), (71, 35, 15, 20), (71, 35, 21, 23),
    (73, 36, 28, 28),
    (75, 37, 0, 18), (75, 37, 1, 18),
]

COUNTS_SMALL = {
    (3, 1, 0, 0): 1, (7, 3, 0, 1): 1, (7, 3, 1, 1): 1,
    (11, 5, 0, 2): 1, (11, 5, 1, 2): 1, (13, 6, 3, 3): 1,
    (15, 7, 0, 3): 0, (15, 7, 1, 3): 0,
    (19, 9, 0, 4): 1, (19, 9, 1, 4): 1,
    (21, 10, 6, 6): 1,
    (23, 11, 0, 5): 1, (23, 11, 1, 5): 1,
    (25, 12, 4, 6): 0,
    (27, 13, 0, 6): 0, (27, 13, 1, 6): 0,
    (29, 14, 7, 8): 1,
    (31, 15, 0, 7): 1, (31, 15, 1, 7): 1, (31, 15, 6, 8): 1, (31, 15, 10, 10): 1,
}

COUNTS_MEDIUM = {
    (35, 17, 0, 8): 0, (35, 17, 1, 8): 0,
    (37, 18, 10, 11): 0,
    (39, 19, 0, 9): 0, (39, 19, 1, 9): 0,
    (41, 20, 5, 10): 0,
    (43, 21, 0, 10): 1, (43, 21, 1, 10): 1, (43, 21, 7, 11): 0,
    (47, 23, 0, 11): 1, (47, 23, 1, 11): 1,
}

EXTENDED_ROWS = [(43, 15), (45, 11), (49, 9)]  # (v, k) of the heavy searches


def _all_derived(max_v):
    rows = []
    for v in range(3, max_v + 1, 2):
        for k in range((v - 1) // 2):
            p = derive_params(v, k)
            if p is not None:
                rows.append(p.as_tuple())
    return rows


def test_criterion_1_table1_parameter_generation(capsys):
    t0 = time.perf_counter()
    rows = _all_derived(75)
    elapsed = time.perf_counter() - t0
    assert rows == TABLE1
    assert elapsed < 1.0
    # the CLI route emits the same rows
    assert cli_main(["params", "--max-v", "75", "--format", "json"]) == 0
    out = capsys.readouterr().out
    cli_rows = [(r["v"], r["r"], r["k"], r["lambda"]) for r in json.loads(out)]
    assert cli_rows == TABLE1
    print("ACCEPTANCE 1 (Table 1 parameter generation): PASS")


def test_criterion_2_table1_counts_small_block():
    t0 = time.perf_counter()
    for (v, r, k, lam), expected in COUNTS_SMALL.items():
        params = derive_params(v, k)
        assert params.as_tuple() == (v, r, k, lam)
        result = classify(params)
        assert result.count == expected, (v, r, k, lam)
    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0
    print(f"ACCEPTANCE 2 (Table 1 counts, v <= 31, {elapsed:.1f}s): PASS")


def test_criterion_3_table1_counts_medium_block():
    t0 = time.perf_counter()
    for (v, r, k, lam), expected in COUNTS_MEDIUM.items():
        params = derive_params(v, k)
        assert params.as_tuple() == (v, r, k, lam)
        result = classify(params)
        assert result.count == expected, (v, r, k, lam)
    elapsed = time.perf_counter() - t0
    assert elapsed < 7200.0
    print(f"ACCEPTANCE 3 (Table 1 counts, medium block, {elapsed:.1f}s): PASS")


def test_criterion_3_extended_rows_report_not_attempted(capsys):
    # the heavy searches must be accepted and declined gracefully
    for v, k in EXTENDED_ROWS:
        code = cli_main(["classify", "--v", str(v), "--k", str(k)])
        captured = capsys.readouterr()
        assert code == 4
        assert "budget exceeded" in captured.err
    rows = classify_all(49)
    marked = {r.params.as_tuple(): r for r in rows}
    for v, k in EXTENDED_ROWS:
        row = marked[derive_params(v, k).as_tuple()]
        assert not row.attempted and row.count is None
    print("ACCEPTANCE 3b (extended rows decline gracefully): PASS")


def test_criterion_4_table3_fixtures():
    t0 = time.perf_counter()
    records = load_table3()
    assert len(records) == 26
    for rec in records:
        pair = record_to_pair(rec)
        p = pair.params
        assert is_sds(pair)
        assert is_skew(pair.A)
        gram = verify_gram_pair(pair.A, pair.B, p)
        assert gram.holds
        assert gram.alpha == 4 * (p.r + p.k - p.lam)
        assert gram.beta == 2 * (p.v - 2 * (p.r + p.k - p.lam))
        assert gram.alpha + gram.beta == 2 * p.v
        cert = verify_c1c3(build_design(pair.A, pair.B))
        assert cert.holds and (cert.alpha, cert.beta) == (gram.alpha, gram.beta)
    for rec in records:
        if rec["v"] <= 31:
            pair = record_to_pair(rec)
            result = classify(pair.params)
            assert result.count == 1
            assert are_equivalent(result.representatives[0], pair)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(f"ACCEPTANCE 4 (Table 3 fixtures, {elapsed:.1f}s): PASS")


def test_criterion_5_table2(capsys):
    assert cli_main(["dparams", "200", "--format", "json"]) == 0
    rows = [(r["n"], r["r"], r["k"]) for r in json.loads(capsys.readouterr().out)]
    assert rows == [
        (6, 1, 0), (14, 3, 1), (26, 6, 3), (42, 10, 6), (62, 15, 10),
        (86, 21, 15), (114, 28, 21), (146, 36, 28), (182, 45, 36),
    ]
    for n in (6, 14, 26, 42, 62):
        result = classify_dopt(n)
        assert result.attempted and result.count == 1, n
    for n in (114, 146, 182):
        result = classify_dopt(n)
        assert not result.attempted and result.count is None, n
    print("ACCEPTANCE 5 (Table 2 parameters and counts): PASS")


@pytest.mark.extended
@pytest.mark.skipif(
    not RUN_EXTENDED, reason="order-86 search is the (43,21,15,15) case; "
    "set SKEWSDS_RUN_EXTENDED=1 to run it"
)
def test_criterion_5_extended_order_86():
    result = classify_dopt(86, budget=6 * 10**10, jobs=os.cpu_count() or 1)
    assert result.attempted and result.count == 0
    print("ACCEPTANCE 5-extended (order 86 empty): PASS")


def test_criterion_6_determinant_certification():
    t0 = time.perf_counter()
    expected = {
        6: 160,
        14: 26 * 12**6,
        26: 50 * 24**12,
        42: 82 * 40**20,
        62: 122 * 60**30,
    }
    for v in (3, 7, 13, 21, 31):
        n = 2 * v
        pair = table3_pair(v)
        det = exact_determinant(build_design(pair.A, pair.B))
        assert abs(det) == ehlich_bound(n) == expected[n], n
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    print(f"ACCEPTANCE 6 (determinants of D_6..D_62, {elapsed:.1f}s): PASS")


def test_criterion_7_property_suites():
    rng = random.Random(20260809)
    t0 = time.perf_counter()

    # profile palindrome + mass on 10^4 random subsets
    for _ in range(10_000):
        v = rng.choice([3, 5, 7, 9, 11, 13, 17, 21, 25, 31])
        x = SubsetZv.of(v, rng.sample(range(v), rng.randint(0, v)))
        counts = diff_profile(x).counts
        assert counts == tuple(reversed(counts))
        assert sum(counts) == len(x) * (len(x) - 1)

    # Gram certificate <=> SDS on 5*10^3 random pairs across v in 3..11
    sizes_by_v = {}
    for v in (3, 5, 7, 9, 11):
        combos = [
            (r, k, (r * (r - 1) + k * (k - 1)) // (v - 1))
            for r in range(v)
            for k in range(v)
            if (r * (r - 1) + k * (k - 1)) % (v - 1) == 0
        ]
        sizes_by_v[v] = combos
    for _ in range(5_000):
        v = rng.choice([3, 5, 7, 9, 11])
        r, k, lam = rng.choice(sizes_by_v[v])
        params = SdsParams(v, r, k, lam)
        a = SubsetZv.of(v, rng.sample(range(v), r))
        b = SubsetZv.of(v, rng.sample(range(v), k))
        assert verify_gram_pair(a, b, params).holds == is_sds(SdsPair(params, a, b))

    # group-action laws + canonical form invariance on 10^3 samples
    seed_pairs = [table3_pair(rec["v"], rec["k"]) for rec in load_table3() if rec["v"] <= 31]
    for _ in range(1_000):
        pair = rng.choice(seed_pairs)
        v = pair.params.v
        g1 = GroupElement(
            v, rng.choice(units(v)), rng.choice([1, -1]), rng.choice([1, -1]),
            rng.randrange(v), rng.randrange(v),
        )
        g2 = GroupElement(
            v, rng.choice(units(v)), rng.choice([1, -1]), rng.choice([1, -1]),
            rng.randrange(v), rng.randrange(v),
        )
        moved = apply_group(g1, pair)
        assert is_sds(moved)
        assert apply_group(g2, moved) == apply_group(g2.compose(g1), pair)
        cf = canonical_form(pair)
        assert canonical_form(moved) == cf
        assert canonical_form(cf) == cf

    # brute-force classification oracle for every feasible tuple with v <= 9
    small = [t for t in TABLE1 if t[0] <= 9]
    assert small == [(3, 1, 0, 0), (7, 3, 0, 1), (7, 3, 1, 1)]
    for v, r, k, lam in small:
        assert classify(derive_params(v, k)).count == brute_class_count(v, k, lam)

    # determinant vs cofactor oracle on 10^3 random sign matrices
    for _ in range(1_000):
        n = rng.randint(1, 7)
        m = [[rng.choice([1, -1]) for _ in range(n)] for _ in range(n)]
        assert exact_determinant(m) == cofactor_det(m)

    elapsed = time.perf_counter() - t0
    print(f"ACCEPTANCE 7 (property suites, {elapsed:.1f}s): PASS")


def test_criterion_8_qr_constructions():
    primes = [3, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71]
    for p in primes:
        for k01 in (0, 1):
            pair = qr_skew_sds(p, k01)
            assert is_sds(pair)
            assert is_skew(pair.A)
            assert verify_gram_pair(pair.A, pair.B, pair.params).holds
    for p in (3, 7):
        assert qr_skew_sds(p, 0).A.elements == table3_pair(p, 0).A.elements
    for p in (11, 19, 23, 31, 43, 47, 59, 67, 71):
        for k01 in (0, 1):
            assert are_equivalent(qr_skew_sds(p, k01), table3_pair(p, k01))
    print("ACCEPTANCE 8 (quadratic-residue constructions): PASS")


@pytest.mark.slow
def test_beyond_required_cheap_extended_rows():
    # not part of the gate: these extended rows happen to fit the budget
    for v, k, expected in ((51, 0, 0), (51, 1, 0), (55, 0, 0), (55, 1, 0)):
        assert classify(derive_params(v, k)).count == expected
