"""Exhaustive and heuristic search for minimum-energy sequences.

The exhaustive kernel works on numpy ``uint64`` arrays of bit encodings, so
lengths up to 63 are representable; the default ceiling is far lower.
"""
from __future__ import annotations

import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from typing import Callable, Iterator, Optional

import numpy as np

from .core import (
    BinarySequence,
    LabsError,
    AutocorrelationProfile,
    alternating_mask,
    canonical_form,
    e_min,
    merit_factor,
    symmetry_orbit,
)

DEFAULT_CEILING = 28
DEFAULT_PREFIX_BITS = 8
CHUNK = 1 << 20

ProgressFn = Callable[[int, int], None]


class SearchLimitError(LabsError):
    pass


@dataclass(frozen=True)
class SearchOptions:
    mode: str = "exhaustive"
    use_symmetry: bool = True
    minus_filter: bool = False
    max_minus_count: Optional[int] = None
    seed: Optional[int] = None
    restarts: Optional[int] = None
    worker_count: int = 1
    ceiling: int = DEFAULT_CEILING
    prefix_bits: int = DEFAULT_PREFIX_BITS

    def __post_init__(self):
        if self.mode not in ("exhaustive", "heuristic"):
            raise ValueError(f"unknown search mode {self.mode!r}")
        if self.mode == "heuristic":
            if self.seed is None or self.restarts is None:
                raise ValueError("heuristic mode needs both seed and restarts")
            if self.restarts < 1:
                raise ValueError("restarts must be >= 1")
            if self.seed < 0:
                raise ValueError("seed must be unsigned")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        if self.max_minus_count is not None and self.max_minus_count < 0:
            raise ValueError("max_minus_count must be >= 0")

    def minus_bound(self, n: int) -> Optional[int]:
        if not self.minus_filter and self.max_minus_count is None:
            return None
        return (n + 1) // 2 if self.max_minus_count is None else self.max_minus_count


@dataclass(frozen=True)
class SearchResult:
    n_value: int
    best_energy: int
    best_merit: Optional[Fraction]
    optimum_count: int
    canonical_best: BinarySequence
    attained_e_min: bool
    deviation: int
    sequences_examined: int
    elapsed: float
    mode: str = "exhaustive"
    lossless: bool = True

    def to_dict(self) -> dict:
        return {
            "n": self.n_value,
            "mode": self.mode,
            "best_energy": self.best_energy,
            "best_merit": self.best_merit,
            "optimum_count": self.optimum_count,
            "canonical_best": self.canonical_best.to_text(),
            "attained_e_min": self.attained_e_min,
            "deviation": self.deviation,
            "sequences_examined": self.sequences_examined,
            "lossless": self.lossless,
        }


def _result(n, energy, count, best_bits, examined, t0, mode, lossless=True) -> SearchResult:
    return SearchResult(
        n_value=n,
        best_energy=energy,
        best_merit=merit_factor(n, energy) if energy else None,
        optimum_count=count,
        canonical_best=BinarySequence(n, best_bits),
        attained_e_min=energy == e_min(n),
        deviation=(energy - e_min(n)) // 4,
        sequences_examined=examined,
        elapsed=time.perf_counter() - t0,
        mode=mode,
        lossless=lossless,
    )


# --- vectorized kernels ---------------------------------------------------

_REV8 = np.array([int(f"{b:08b}"[::-1], 2) for b in range(256)], dtype=np.uint8)


def _popcount(codes: np.ndarray) -> np.ndarray:
    return np.bitwise_count(codes).astype(np.int64)


def batch_energies(codes: np.ndarray, n: int) -> np.ndarray:
    """Energies of many length-``n`` sequences given as bit encodings."""
    codes = np.asarray(codes, dtype=np.uint64)
    out = np.zeros(codes.shape, dtype=np.int64)
    for k in range(1, n):
        length = n - k
        v = (codes ^ (codes >> np.uint64(k))) & np.uint64((1 << length) - 1)
        r = length - 2 * _popcount(v)
        out += r * r
    return out


def _reverse(codes: np.ndarray, n: int) -> np.ndarray:
    b = codes.astype("<u8").view(np.uint8).reshape(-1, 8)
    rev = np.ascontiguousarray(_REV8[b][:, ::-1]).view("<u8").ravel()
    return rev >> np.uint64(64 - n)


def batch_images(codes: np.ndarray, n: int) -> np.ndarray:
    """The 8 symmetry images of each code, shape (8, len(codes))."""
    full = np.uint64((1 << n) - 1)
    alt = np.uint64(alternating_mask(n))
    rev = _reverse(codes, n)
    masks = (np.uint64(0), full, alt, full ^ alt)
    return np.stack([base ^ m for base in (codes, rev) for m in masks])


def _orbit_sizes(images: np.ndarray) -> np.ndarray:
    s = np.sort(images, axis=0)
    return 1 + np.count_nonzero(np.diff(s, axis=0), axis=0)


def enumerate_energies(n: int) -> np.ndarray:
    """Energy of every one of the 2**n sequences, indexed by bit encoding."""
    if not 1 <= n <= 30:
        raise SearchLimitError(f"full enumeration supports 1 <= N <= 30, got {n}")
    total = 1 << n
    out = np.empty(total, dtype=np.int64)
    for start in range(0, total, CHUNK):
        codes = np.arange(start, min(start + CHUNK, total), dtype=np.uint64)
        out[start:start + len(codes)] = batch_energies(codes, n)
    return out


# --- exhaustive search ----------------------------------------------------

@dataclass(frozen=True)
class _Unit:
    n: int
    start: int
    stop: int
    use_symmetry: bool
    bound: Optional[int]


# (best energy, raw optimum count, smallest canonical code, evaluated count)
_Partial = tuple


def _scan_unit(unit: _Unit) -> _Partial:
    n, bound = unit.n, unit.bound
    best, count, canon, examined = None, 0, None, 0
    for start in range(unit.start, unit.stop, CHUNK):
        codes = np.arange(start, min(start + CHUNK, unit.stop), dtype=np.uint64)
        if unit.use_symmetry:
            images = batch_images(codes, n)
            keep = images.min(axis=0) == codes
            if bound is not None:
                keep &= _popcount(images).min(axis=0) <= bound
            codes = codes[keep]
            weights = _orbit_sizes(images[:, keep])
        elif bound is not None:
            pc = _popcount(codes)
            keep = pc <= bound
            codes = codes[keep]
            # negation closes the filtered set; count a code twice when its negation was filtered out
            weights = np.where(pc[keep] < n - bound, 2, 1)
        else:
            weights = np.ones(len(codes), dtype=np.int64)
        if not len(codes):
            continue
        examined += len(codes)
        energies = batch_energies(codes, n)
        e = int(energies.min())
        if best is not None and e > best:
            continue
        hit = energies == e
        c = int(weights[hit].sum())
        cmin = int(batch_images(codes[hit], n).min())
        if best is None or e < best:
            best, count, canon = e, c, cmin
        else:
            count += c
            canon = min(canon, cmin)
    return best, count, canon, examined


def _merge(a: _Partial, b: _Partial) -> _Partial:
    if a[0] is None:
        return b[:3] + (a[3] + b[3],)
    if b[0] is None or a[0] < b[0]:
        return a[:3] + (a[3] + b[3],)
    if b[0] < a[0]:
        return b[:3] + (a[3] + b[3],)
    return a[0], a[1] + b[1], min(a[2], b[2]), a[3] + b[3]


def _units(n: int, opts: SearchOptions, bound: Optional[int]) -> list[_Unit]:
    # canonical representatives always have the top bit clear
    span_bits = n - 1 if opts.use_symmetry else n
    prefix = max(0, min(opts.prefix_bits, span_bits))
    width = 1 << (span_bits - prefix)
    return [
        _Unit(n, u * width, (u + 1) * width, opts.use_symmetry, bound)
        for u in range(1 << prefix)
    ]


def exhaustive_search(
    n: int,
    opts: Optional[SearchOptions] = None,
    progress: Optional[ProgressFn] = None,
) -> SearchResult:
    """Exact global minimum of the energy over all 2**n sequences.

    Symmetry reduction evaluates one canonical member per orbit and weights it
    by the orbit size; the minus-count filter keeps sequences with at most
    ``max_minus_count`` entries equal to -1 and relies on negation to cover the
    rest.  Both reductions are lossless for bounds >= ceil(n/2).
    """
    opts = opts or SearchOptions()
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    limit = min(opts.ceiling, 63)
    if n > limit:
        raise SearchLimitError(
            f"N={n} exceeds the exhaustive ceiling {limit}; use heuristic mode "
            f"(--heuristic --seed S --restarts R) or raise the ceiling"
        )
    t0 = time.perf_counter()
    bound = opts.minus_bound(n)
    lossless = bound is None or bound >= (n + 1) // 2 or (opts.use_symmetry and bound >= n // 2)
    units = _units(n, opts, bound)
    acc: _Partial = (None, 0, None, 0)
    if opts.worker_count == 1:
        partials: Iterator[_Partial] = map(_scan_unit, units)
        for part in partials:
            acc = _merge(acc, part)
            if progress:
                progress(acc[3], acc[0])
    else:
        with ProcessPoolExecutor(max_workers=opts.worker_count) as pool:
            for part in pool.map(_scan_unit, units):
                acc = _merge(acc, part)
                if progress:
                    progress(acc[3], acc[0])
    best, count, canon, examined = acc
    if best is None:
        raise LabsError(f"minus-count bound {bound} excludes every sequence of length {n}")
    return _result(n, best, count, canon, examined, t0, "exhaustive", lossless)


# --- incremental descent --------------------------------------------------

def _flip_terms(x: np.ndarray) -> np.ndarray:
    """C[i, k-1] = x_i * (x_{i-k} + x_{i+k}) with out-of-range neighbours as 0."""
    n = len(x)
    pad = np.concatenate([np.zeros(n, x.dtype), x, np.zeros(n, x.dtype)])
    idx = np.arange(n)[:, None] + n
    ks = np.arange(1, n)[None, :]
    return x[:, None] * (pad[idx - ks] + pad[idx + ks])


def flip_energy_delta(seq: BinarySequence, profile: AutocorrelationProfile, i: int) -> int:
    """Energy change from negating element ``i`` (1-based), in O(N)."""
    n = seq.n
    if not 1 <= i <= n:
        raise IndexError(f"position {i} outside 1..{n}")
    x = seq.elements
    xi = x[i - 1]
    delta = 0
    for k in range(1, n):
        c = 0
        if i - 1 - k >= 0:
            c += x[i - 1 - k]
        if i - 1 + k < n:
            c += x[i - 1 + k]
        c *= xi
        if c:
            r = profile.lags[k - 1]
            delta += (r - 2 * c) ** 2 - r * r
    return delta


def _descend(x: np.ndarray) -> tuple[np.ndarray, int, int]:
    """Steepest single-flip descent, lowest index on ties.  Returns (x, E, evaluations)."""
    n = len(x)
    lags = np.array([int(x[: n - k] @ x[k:]) for k in range(1, n)], dtype=np.int64)
    evals = 0
    while True:
        c = _flip_terms(x)
        delta = 4 * ((c * c).sum(axis=1) - c @ lags)
        evals += n
        i = int(np.argmin(delta))
        if delta[i] >= 0:
            return x, int(lags @ lags), evals
        lags -= 2 * c[i]
        x[i] = -x[i]


def _to_bits(x: np.ndarray) -> int:
    return sum(1 << i for i in np.flatnonzero(x < 0).tolist())


def _heuristic_shard(n: int, restarts: int, seed_seq, target: int):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    best, found, evals = None, set(), 0
    for _ in range(restarts):
        x = 1 - 2 * rng.integers(0, 2, size=n, dtype=np.int64)
        x, energy, used = _descend(x)
        evals += used + 1
        if best is None or energy < best:
            best, found = energy, set()
        if energy == best:
            found.add(canonical_form(BinarySequence(n, _to_bits(x))).bits)
        if best == target:
            break
    return best, found, evals


def heuristic_search(
    n: int,
    opts: SearchOptions,
    progress: Optional[ProgressFn] = None,
) -> SearchResult:
    """Restart steepest descent from uniform random starts.

    Randomness comes from numpy's PCG64 bit generator seeded with
    ``opts.seed`` (with ``worker_count > 1`` each worker gets a child of
    ``SeedSequence(seed)``).  ``optimum_count`` is the total size of the
    symmetry orbits of the best sequences found, a lower bound on the true
    count.  Stops early once the theoretical minimum is reached.
    """
    if opts.mode != "heuristic":
        opts = replace(opts, mode="heuristic")
    if n < 2:
        return exhaustive_search(n, SearchOptions(use_symmetry=False))
    t0 = time.perf_counter()
    target = e_min(n)
    if opts.worker_count == 1:
        shards = [_heuristic_shard(n, opts.restarts, opts.seed, target)]
    else:
        w = opts.worker_count
        sizes = [opts.restarts // w + (j < opts.restarts % w) for j in range(w)]
        children = np.random.SeedSequence(opts.seed).spawn(w)
        with ProcessPoolExecutor(max_workers=w) as pool:
            futures = [
                pool.submit(_heuristic_shard, n, s, c, target)
                for s, c in zip(sizes, children) if s
            ]
            shards = [f.result() for f in futures]
    best = min(s[0] for s in shards)
    found = set().union(*(s[1] for s in shards if s[0] == best))
    evals = sum(s[2] for s in shards)
    if progress:
        progress(evals, best)
    count = sum(len(symmetry_orbit(BinarySequence(n, b))) for b in found)
    return _result(n, best, count, min(found), evals, t0, "heuristic", lossless=False)


def search(n: int, opts: SearchOptions, progress: Optional[ProgressFn] = None) -> SearchResult:
    if opts.mode == "heuristic":
        return heuristic_search(n, opts, progress)
    return exhaustive_search(n, opts, progress)


def stderr_progress(examined: int, best: Optional[int]) -> None:
    print(f"examined={examined} best={best}", file=sys.stderr, flush=True)


# --- search-space accounting ----------------------------------------------

@dataclass(frozen=True)
class SearchSpaceStats:
    n_value: int
    max_minus: int
    full_size: int
    filtered_size: int

    @property
    def reduction_ratio(self) -> float:
        return float(1 - Fraction(self.filtered_size, self.full_size))

    def to_dict(self) -> dict:
        return {
            "n": self.n_value,
            "max_minus": self.max_minus,
            "full_size": self.full_size,
            "filtered_size": self.filtered_size,
            "reduction_ratio": Fraction(self.full_size - self.filtered_size, self.full_size),
        }


def count_search_space(n: int, max_minus: Optional[int] = None) -> SearchSpaceStats:
    """Size of the space restricted to 1..max_minus entries equal to -1.

    ``max_minus`` defaults to N/2 rounded half up.
    """
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    k = (n + 1) // 2 if max_minus is None else max_minus
    if k < 0:
        raise ValueError("max_minus must be >= 0")
    filtered = sum(comb(n, j) for j in range(1, min(k, n) + 1))
    return SearchSpaceStats(n, k, 1 << n, filtered)
