"""The four-stage classification pipeline: skew A-enumeration, canonical
B-enumeration, profile-keyed matching, and orbit deduplication.

Two join backends are provided.  The default keeps everything in memory and
probes the (small) A side with a hash map, prefiltering B candidates inside
the compiled kernel when it is available.  The alternative spills profile-
keyed records to a cache directory as sorted runs and merge-joins them,
mirroring how such searches are traditionally run off disk.
"""

from __future__ import annotations

import heapq
import json
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import groupby
from math import comb
from pathlib import Path
from typing import Iterable, Iterator, Optional

import numpy as np

from .core import (
    DifferenceProfile,
    InfeasibleParameters,
    ParameterError,
    SdsPair,
    SdsParams,
    SubsetZv,
    canonical_form,
    derive_params,
    diff_profile,
    is_sds,
)

try:
    from . import _fastpath
except ImportError:  # pragma: no cover - numba genuinely absent
    _fastpath = None

DEFAULT_NODE_BUDGET = 200_000_000

_RECORD_MAGIC = b"SDSREC01"
_RECORD_HEADER = struct.Struct("<HHHBBIIIQ")


class BudgetExceeded(RuntimeError):
    """Estimated search size is over the configured node budget."""

    def __init__(self, params: SdsParams, estimate: int, budget: int):
        super().__init__(
            f"estimated {estimate} nodes for {params.as_tuple()} "
            f"exceeds budget {budget}"
        )
        self.params = params
        self.estimate = estimate
        self.budget = budget


@dataclass(frozen=True)
class ProfileKeyedRecord:
    """A candidate subset keyed by the packed profile used for joining."""

    key: bytes
    payload: SubsetZv

    @property
    def profile(self) -> DifferenceProfile:
        return DifferenceProfile(self.payload.v, tuple(self.key))


@dataclass(frozen=True)
class ClassificationResult:
    params: SdsParams
    count: Optional[int]
    representatives: tuple[SdsPair, ...]
    stats: dict = field(default_factory=dict)
    attempted: bool = True
    reason: str = ""


# ---------------------------------------------------------------------------
# enumeration (pure-Python reference; compiled kernels when applicable)


def _skew_masks_py(v: int, lam: int) -> list[int]:
    """Reference DFS over half-set choices; same output order as the kernel."""
    h = (v - 1) // 2
    out: list[int] = []
    cnt = [0] * v
    elems: list[int] = []

    def rec(j: int) -> None:
        if j == h:
            out.append(sum(1 << e for e in elems))
            return
        for c in (0, 1):
            e = (j + 1) if c == 0 else (v - j - 1)
            bad = False
            for s in elems:
                d = (e - s) % v
                cnt[d] += 1
                cnt[v - d] += 1
                if cnt[d] > lam or cnt[v - d] > lam:
                    bad = True
            if not bad:
                elems.append(e)
                rec(j + 1)
                elems.pop()
            for s in elems:
                d = (e - s) % v
                cnt[d] -= 1
                cnt[v - d] -= 1

    rec(0)
    return out


def _canon_b_masks_py(v: int, k: int, lam: int) -> list[int]:
    """Reference DFS for translate-minimal k-subsets (k >= 2), kernel order."""
    out: list[int] = []
    cnt = [0] * v
    elems = [0]

    def rotation_minimal(gaps: list[int]) -> bool:
        g1 = gaps[0]
        for t in range(1, k):
            if gaps[t] != g1:
                continue
            for o in range(1, k):
                x, y = gaps[(t + o) % k], gaps[o]
                if x != y:
                    if x < y:
                        return False
                    break
        return True

    def rec(m: int) -> None:
        if m == k:
            g1 = elems[1]
            if v - elems[-1] < g1:
                return
            gaps = [elems[t + 1] - elems[t] for t in range(k - 1)]
            gaps.append(v - elems[-1])
            if rotation_minimal(gaps):
                out.append(sum(1 << e for e in elems))
            return
        lo = elems[-1] + 1
        if m >= 2:
            lo = max(lo, elems[-1] + elems[1])
        hi = v - (k - m)
        if m == 1 and k == 2:
            hi = min(hi, v // 2)
        elif m == k - 1:
            hi = min(hi, v - elems[1])
        for e in range(lo, hi + 1):
            bad = False
            for s in elems:
                d = (e - s) % v
                cnt[d] += 1
                cnt[v - d] += 1
                if cnt[d] > lam or cnt[v - d] > lam:
                    bad = True
            if not bad:
                elems.append(e)
                rec(m + 1)
                elems.pop()
            for s in elems:
                d = (e - s) % v
                cnt[d] -= 1
                cnt[v - d] -= 1

    rec(1)
    return out


def _use_fastpath(v: int) -> bool:
    return _fastpath is not None and v <= 63


_warmed_up = False


def _warmup_kernels() -> None:
    # compile once before any thread pool touches the kernels
    global _warmed_up
    if _warmed_up or _fastpath is None:
        return
    empty = np.empty(0, np.uint64)
    _fastpath.skew_dfs(5, 2, 0, 0, empty)
    _fastpath.canon_b_dfs(7, 2, 3, 1, 6, np.empty(0, np.uint64), empty)
    _fastpath.profiles_for_masks(np.array([5], np.uint64), 5)
    _warmed_up = True


def _parallel_ordered(tasks, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        futures = [ex.submit(t) for t in tasks]
        return [f.result() for f in futures]


def _run_skew_kernel(
    v: int, lam: int, prefix: int, prefix_len: int, cap_hint: int = 1 << 20
) -> np.ndarray:
    # speculative fill; the kernel keeps counting past capacity, so one
    # retry with the exact size covers the rare overflow
    buf = np.empty(cap_hint, np.uint64)
    n = _fastpath.skew_dfs(v, lam, prefix, prefix_len, buf)
    if n <= cap_hint:
        return buf[:n].copy()
    buf = np.empty(n, np.uint64)
    _fastpath.skew_dfs(v, lam, prefix, prefix_len, buf)
    return buf


def _skew_masks(v: int, lam: int, jobs: int = 1) -> np.ndarray | list[int]:
    if not _use_fastpath(v):
        return _skew_masks_py(v, lam)
    _warmup_kernels()
    h = (v - 1) // 2
    if jobs <= 1 or h < 8:
        return _run_skew_kernel(v, lam, 0, 0)
    p = min(h - 1, max(1, (4 * jobs - 1).bit_length()))
    tasks = [
        (lambda pre=pre: _run_skew_kernel(v, lam, pre, p)) for pre in range(1 << p)
    ]
    return np.concatenate(_parallel_ordered(tasks, jobs))


def _run_b_kernel(
    v: int, k: int, lam: int, lo: int, hi: int, hashes: np.ndarray
) -> np.ndarray:
    cap_hint = 1 << 16 if hashes.size else 1 << 20
    buf = np.empty(cap_hint, np.uint64)
    n = _fastpath.canon_b_dfs(v, k, lam, lo, hi, hashes, buf)
    if n <= cap_hint:
        return buf[:n].copy()
    buf = np.empty(n, np.uint64)
    _fastpath.canon_b_dfs(v, k, lam, lo, hi, hashes, buf)
    return buf


def _canon_b_masks(
    v: int,
    k: int,
    lam: int,
    jobs: int = 1,
    key_hashes: Optional[np.ndarray] = None,
) -> np.ndarray | list[int]:
    if k == 0:
        return [0]
    if k == 1:
        return [1]
    if not _use_fastpath(v):
        masks = _canon_b_masks_py(v, k, lam)
        if key_hashes is not None and len(key_hashes):
            table = set(int(x) for x in key_hashes)
            masks = [
                m
                for m in masks
                if _fastpath_hash_py(_profile_counts(m, v)) in table
            ]
        return masks
    _warmup_kernels()
    hashes = (
        key_hashes
        if key_hashes is not None
        else np.empty(0, np.uint64)
    )
    b2_max = v - k + 1
    if jobs <= 1 or b2_max < 4:
        return _run_b_kernel(v, k, lam, 1, b2_max, hashes)
    parts = min(4 * jobs, b2_max)
    bounds = np.linspace(1, b2_max + 1, parts + 1, dtype=int)
    tasks = []
    for i in range(parts):
        lo, hi = int(bounds[i]), int(bounds[i + 1]) - 1
        if lo <= hi:
            tasks.append(lambda lo=lo, hi=hi: _run_b_kernel(v, k, lam, lo, hi, hashes))
    return np.concatenate(_parallel_ordered(tasks, jobs))


def _profile_counts(mask: int, v: int) -> bytes:
    from .core import _rot_right

    return bytes((mask & _rot_right(mask, i, v)).bit_count() for i in range(1, v))


def _fastpath_hash_py(key: bytes) -> int:
    if _fastpath is not None:
        return _fastpath.fnv1a64(key)
    h = 0xCBF29CE484222325
    for byte in key:
        h = ((h ^ byte) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def _batch_profiles(masks, v: int) -> list[bytes]:
    """Packed difference profiles, one bytes object per mask."""
    if _use_fastpath(v) and len(masks):
        arr = np.asarray(masks, dtype=np.uint64)
        table = _fastpath.profiles_for_masks(arr, v)
        return [row.tobytes() for row in table]
    return [_profile_counts(int(m), v) for m in masks]


def enumerate_skew_A(v: int, lam: int) -> Iterator[SubsetZv]:
    """All skew half-set completions A with P_A(i) <= lam everywhere."""
    if v < 3 or v % 2 == 0:
        raise ParameterError(f"v must be odd and >= 3, got {v}")
    if lam < 0:
        raise ParameterError("lambda must be nonnegative")
    for mask in _skew_masks(v, lam):
        yield SubsetZv(v, int(mask))


def enumerate_canonical_B(v: int, k: int, lam: int) -> Iterator[SubsetZv]:
    """Translate-minimal k-subsets B with P_B(i) <= lam everywhere."""
    if v < 3 or v % 2 == 0:
        raise ParameterError(f"v must be odd and >= 3, got {v}")
    if not 0 <= k < (v - 1) // 2:
        raise ParameterError(f"k must satisfy 0 <= k < (v-1)/2, got {k}")
    for mask in _canon_b_masks(v, k, lam):
        yield SubsetZv(v, int(mask))


# ---------------------------------------------------------------------------
# joining


def _hash_join(
    a_records: Iterable[tuple[bytes, int]],
    b_records: Iterable[tuple[bytes, int]],
) -> Iterator[tuple[int, int]]:
    """In-memory equi-join; builds the A side, probes with the B stream."""
    amap: dict[bytes, list[int]] = {}
    for key, mask in a_records:
        amap.setdefault(key, []).append(mask)
    for key, bmask in b_records:
        grp = amap.get(key)
        if grp:
            for amask in grp:
                yield amask, bmask


def _write_side(
    cache_dir: Path,
    v: int,
    k: int,
    lam: int,
    side: int,
    records: Iterable[tuple[bytes, int]],
    chunk_records: int,
) -> list[Path]:
    """Spill records as sorted runs, one file per partition."""
    cache_dir.mkdir(parents=True, exist_ok=True)
    side_name = "A" if side == 0 else "B"
    base = f"v{v}.k{k}.l{lam}.{side_name}"
    manifest_path = cache_dir / f"{base}.json"
    if manifest_path.exists():
        try:
            manifest = json.loads(manifest_path.read_text())
            paths = [cache_dir / name for name in manifest["files"]]
            if all(p.exists() for p in paths):
                return paths
        except (ValueError, KeyError):
            pass
    mask_len = (v + 7) // 8
    key_len = v - 1
    paths: list[Path] = []
    buf: list[tuple[bytes, bytes]] = []

    def flush() -> None:
        if not buf:
            return
        buf.sort()
        part = len(paths)
        path = cache_dir / f"{base}.p{part:05d}.sdsrec"
        with open(path, "wb") as fh:
            fh.write(_RECORD_MAGIC)
            fh.write(
                _RECORD_HEADER.pack(v, k, lam, side, 0, part, key_len, mask_len, len(buf))
            )
            for key, mask_bytes in buf:
                fh.write(key)
                fh.write(mask_bytes)
        paths.append(path)
        buf.clear()

    for key, mask in records:
        buf.append((key, int(mask).to_bytes(mask_len, "little")))
        if len(buf) >= chunk_records:
            flush()
    flush()
    if not paths:
        flush_empty = cache_dir / f"{base}.p00000.sdsrec"
        with open(flush_empty, "wb") as fh:
            fh.write(_RECORD_MAGIC)
            fh.write(_RECORD_HEADER.pack(v, k, lam, side, 0, 0, key_len, mask_len, 0))
        paths.append(flush_empty)
    manifest_path.write_text(json.dumps({"files": [p.name for p in paths]}))
    return paths


def _read_run(path: Path) -> Iterator[tuple[bytes, int]]:
    with open(path, "rb") as fh:
        magic = fh.read(len(_RECORD_MAGIC))
        if magic != _RECORD_MAGIC:
            raise ValueError(f"{path}: bad record-file magic")
        header = _RECORD_HEADER.unpack(fh.read(_RECORD_HEADER.size))
        _v, _k, _lam, _side, _, _part, key_len, mask_len, count = header
        for _ in range(count):
            key = fh.read(key_len)
            mask = int.from_bytes(fh.read(mask_len), "little")
            yield key, mask


def _iter_side_sorted(paths: list[Path]) -> Iterator[tuple[bytes, int]]:
    runs = [_read_run(p) for p in paths]
    if len(runs) == 1:
        return runs[0]
    return heapq.merge(*runs)


def _merge_join(
    a_iter: Iterator[tuple[bytes, int]],
    b_iter: Iterator[tuple[bytes, int]],
) -> Iterator[tuple[int, int]]:
    """Join two key-sorted record streams on equal keys."""
    b_next = next(b_iter, None)
    for key, grp in groupby(a_iter, key=lambda rec: rec[0]):
        a_masks = [mask for _, mask in grp]
        while b_next is not None and b_next[0] < key:
            b_next = next(b_iter, None)
        while b_next is not None and b_next[0] == key:
            for amask in a_masks:
                yield amask, b_next[1]
            b_next = next(b_iter, None)


def _external_join(
    a_records: Iterable[tuple[bytes, int]],
    b_records: Iterable[tuple[bytes, int]],
    params: SdsParams,
    cache_dir: Path,
    chunk_records: int = 2_000_000,
) -> Iterator[tuple[int, int]]:
    v, k, lam = params.v, params.k, params.lam
    a_paths = _write_side(cache_dir, v, k, lam, 0, a_records, chunk_records)
    b_paths = _write_side(cache_dir, v, k, lam, 1, b_records, chunk_records)
    return _merge_join(_iter_side_sorted(a_paths), _iter_side_sorted(b_paths))


def match_pairs(
    a_candidates: Iterable[SubsetZv],
    b_candidates: Iterable[SubsetZv],
    params: SdsParams,
    *,
    cache_dir: Optional[str | Path] = None,
) -> Iterator[SdsPair]:
    """All pairs with (lambda,...,lambda) - P_A = P_B, as an equi-join.

    A-side records are keyed by the complement profile, B-side records by
    the profile itself.  With cache_dir the join runs as an external
    sort-merge over spilled record files; otherwise as an in-memory hash
    join with the A side as the build input.
    """
    v, lam = params.v, params.lam

    def a_records() -> Iterator[tuple[bytes, int]]:
        for a in a_candidates:
            counts = diff_profile(a).counts
            if all(c <= lam for c in counts):
                yield bytes(lam - c for c in counts), a.mask

    def b_records() -> Iterator[tuple[bytes, int]]:
        for b in b_candidates:
            counts = diff_profile(b).counts
            if all(c <= lam for c in counts):
                yield bytes(counts), b.mask

    if cache_dir is not None:
        matched = _external_join(a_records(), b_records(), params, Path(cache_dir))
    else:
        matched = _hash_join(a_records(), b_records())
    for amask, bmask in matched:
        yield SdsPair(params, SubsetZv(v, amask), SubsetZv(v, bmask))


# ---------------------------------------------------------------------------
# classification


def estimate_nodes(params: SdsParams) -> int:
    """Crude leaf-count estimate driving the not-attempted budget policy."""
    h = (params.v - 1) // 2
    b_space = 1 if params.k <= 1 else comb(params.v - 1, params.k - 1)
    return (1 << h) + b_space


def _check_normalized(params: SdsParams) -> None:
    if params.r != (params.v - 1) // 2 or not 0 <= params.k < params.r:
        raise InfeasibleParameters(
            f"{params.as_tuple()} violates the skew normalization "
            "r = (v-1)/2, k < r"
        )
    if params.beta < 1:
        raise InfeasibleParameters(
            f"{params.as_tuple()} has nonpositive Gram off-diagonal"
        )


def classify(
    params: SdsParams,
    *,
    jobs: int = 1,
    budget: Optional[int] = DEFAULT_NODE_BUDGET,
    cache_dir: Optional[str | Path] = None,
) -> ClassificationResult:
    """Classify skew-symmetric pairs with these parameters up to equivalence.

    Matched pairs are deduplicated by canonical form; the representative
    reported for each class is its lexicographically least matched member,
    so representatives are themselves skew-symmetric with canonical B.
    Output is deterministic for any worker count.
    """
    _check_normalized(params)
    estimate = estimate_nodes(params)
    if budget is not None and estimate > budget:
        raise BudgetExceeded(params, estimate, budget)
    t0 = time.perf_counter()
    v, k, lam = params.v, params.k, params.lam
    h = (v - 1) // 2

    a_masks = _skew_masks(v, lam, jobs=jobs)
    a_keys = []
    for key in _batch_profiles(a_masks, v):
        a_keys.append(bytes(lam - c for c in key))
    a_records = list(zip(a_keys, (int(m) for m in a_masks)))

    zero_key = bytes(v - 1)
    if k == 0:
        b_records = [(zero_key, 0)]
        b_emitted = 1
    elif k == 1:
        b_records = [(zero_key, 1)]
        b_emitted = 1
    elif not a_records:
        # nothing on the build side, so no B candidate can ever join
        b_records = []
        b_emitted = 0
    else:
        prefilter = None
        if cache_dir is None:
            prefilter = np.unique(
                np.array([_fastpath_hash_py(key) for key in a_keys], dtype=np.uint64)
            )
        b_masks = _canon_b_masks(v, k, lam, jobs=jobs, key_hashes=prefilter)
        b_records = list(zip(_batch_profiles(b_masks, v), (int(m) for m in b_masks)))
        b_emitted = len(b_records)

    if cache_dir is not None:
        matched = _external_join(iter(a_records), iter(b_records), params, Path(cache_dir))
    else:
        matched = _hash_join(a_records, b_records)

    classes: dict[SdsPair, SdsPair] = {}
    n_matched = 0
    for amask, bmask in matched:
        pair = SdsPair(params, SubsetZv(v, amask), SubsetZv(v, bmask))
        if not is_sds(pair):
            raise RuntimeError(f"join produced a non-SDS pair: {pair}")
        n_matched += 1
        cf = canonical_form(pair)
        cur = classes.get(cf)
        if cur is None or pair.sort_key() < cur.sort_key():
            classes[cf] = pair
    reps = tuple(sorted(classes.values(), key=SdsPair.sort_key))
    stats = {
        "a_space": 1 << h,
        "a_survivors": len(a_records),
        "b_space": 1 if k <= 1 else comb(v - 1, k - 1),
        "b_emitted": b_emitted,
        "matched": n_matched,
        "classes": len(reps),
        "seconds": time.perf_counter() - t0,
    }
    return ClassificationResult(params, len(reps), reps, stats)


def classify_all(
    v_max: int,
    *,
    jobs: int = 1,
    budget: Optional[int] = DEFAULT_NODE_BUDGET,
    cache_dir: Optional[str | Path] = None,
) -> list[ClassificationResult]:
    """Run classify over every feasible parameter tuple with v <= v_max.

    Tuples whose estimated search size exceeds the budget come back as
    not-attempted markers rather than blocking the report.
    """
    results: list[ClassificationResult] = []
    for v in range(3, v_max + 1, 2):
        for k in range((v - 1) // 2):
            params = derive_params(v, k)
            if params is None:
                continue
            try:
                results.append(
                    classify(params, jobs=jobs, budget=budget, cache_dir=cache_dir)
                )
            except BudgetExceeded as exc:
                results.append(
                    ClassificationResult(
                        params,
                        None,
                        (),
                        {"estimate": exc.estimate, "budget": exc.budget},
                        attempted=False,
                        reason="budget",
                    )
                )
    return results
