"""Access to the shipped reference records (one JSON record per pair, with
k in {0,1} variants of a shared A stored separately)."""

from __future__ import annotations

import json
from importlib import resources
from typing import Optional

from .core import ParameterError, SdsPair, SdsParams, SubsetZv


def record_to_pair(record: dict) -> SdsPair:
    """Build a pair from the {"v","r","k","lambda","A","B"} schema."""
    try:
        params = SdsParams(
            int(record["v"]), int(record["r"]), int(record["k"]), int(record["lambda"])
        )
        a = SubsetZv.of(params.v, record["A"])
        b = SubsetZv.of(params.v, record["B"])
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"malformed SDS record: {exc}") from exc
    return SdsPair(params, a, b)


def pair_to_record(pair: SdsPair) -> dict:
    p = pair.params
    return {
        "v": p.v,
        "r": p.r,
        "k": p.k,
        "lambda": p.lam,
        "A": sorted(pair.A.elements),
        "B": sorted(pair.B.elements),
    }


def load_table3() -> list[dict]:
    text = resources.files("skewsds").joinpath("data/table3.json").read_text()
    return json.loads(text)


def table3_pairs() -> list[SdsPair]:
    return [record_to_pair(rec) for rec in load_table3()]


def table3_pair(v: int, k: Optional[int] = None) -> SdsPair:
    """The shipped pair at modulus v.

    With k omitted, picks the row with k = lambda, the one that seeds the
    order-2v design attaining the determinant bound.
    """
    for rec in load_table3():
        if rec["v"] != v:
            continue
        if k is None and rec["k"] == rec["lambda"]:
            return record_to_pair(rec)
        if k is not None and rec["k"] == k:
            return record_to_pair(rec)
    raise ParameterError(f"no shipped record at v={v}, k={k}")
