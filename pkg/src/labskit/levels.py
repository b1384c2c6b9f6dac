"""Per-lag breakdown of a sequence's energy into product rows and pair counts."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .core import BinarySequence, autocorrelation, deviation


def level_products(seq: BinarySequence, k: int) -> list[int]:
    if not 1 <= k <= seq.n - 1:
        raise IndexError(f"lag {k} outside 1..{seq.n - 1}")
    x = seq.elements
    return [x[i] * x[i + k] for i in range(seq.n - k)]


def level_pair_minus_count(minus_count: int, length: int) -> int:
    """-1 products among all pairs of a level with ``minus_count`` negative entries."""
    if not 0 <= minus_count <= length:
        raise ValueError(f"minus count {minus_count} outside 0..{length}")
    return minus_count * (length - minus_count)


def level_theoretical_max(length: int) -> int:
    if length < 1:
        raise ValueError(f"level length must be >= 1, got {length}")
    return length * length // 4


def expected_minus_range(length: int) -> tuple[int, int]:
    if length < 1:
        raise ValueError(f"level length must be >= 1, got {length}")
    return length // 2, (length + 1) // 2


@dataclass(frozen=True)
class LevelRow:
    lag: int
    length: int
    products: tuple[int, ...]
    minus_count: int
    expected_minus_lo: int
    expected_minus_hi: int
    theoretical_pair_max: int
    actual_pair_minus: int
    deviation: int

    @property
    def r_value(self) -> int:
        return self.length - 2 * self.minus_count

    def expected_range_text(self) -> str:
        if self.expected_minus_lo == self.expected_minus_hi:
            return str(self.expected_minus_lo)
        return f"{self.expected_minus_lo}-{self.expected_minus_hi}"


@dataclass(frozen=True)
class LevelTable:
    n_value: int
    rows: tuple[LevelRow, ...]
    total_deviation: int

    @property
    def total_pair_minus(self) -> int:
        return sum(r.actual_pair_minus for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "n": self.n_value,
            "total_deviation": self.total_deviation,
            "rows": [
                {
                    "lag": r.lag,
                    "length": r.length,
                    "products": list(r.products),
                    "expected_minus": [r.expected_minus_lo, r.expected_minus_hi],
                    "theoretical_max": r.theoretical_pair_max,
                    "minus_count": r.minus_count,
                    "pair_minus": r.actual_pair_minus,
                    "deviation": r.deviation,
                }
                for r in self.rows
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([
                r.lag, r.length, r.expected_range_text(), r.theoretical_pair_max,
                r.minus_count, r.actual_pair_minus, r.deviation,
            ])
        return buf.getvalue()


CSV_COLUMNS = (
    "lag", "length", "expected_minus", "theoretical_max",
    "minus_count", "pair_minus", "deviation",
)


def build_level_table(seq: BinarySequence) -> LevelTable:
    n = seq.n
    if n < 2:
        raise ValueError("level table needs length >= 2")
    rows = []
    for k in range(1, n):
        products = tuple(level_products(seq, k))
        length = n - k
        minus = products.count(-1)
        lo, hi = expected_minus_range(length)
        tmax = level_theoretical_max(length)
        actual = level_pair_minus_count(minus, length)
        rows.append(LevelRow(k, length, products, minus, lo, hi, tmax, actual, tmax - actual))
    total = sum(r.deviation for r in rows)
    expected = deviation(n, autocorrelation(seq).energy)
    if total != expected:
        raise AssertionError(f"level deviations sum to {total}, energy gives {expected}")
    return LevelTable(n, tuple(rows), total)
