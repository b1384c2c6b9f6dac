"""JSON/CSV rendering shared by the CLI.

Rationals (``Fraction``) and values wrapped in ``Fixed4`` are written as JSON
numbers with exactly four decimals; ints stay exact; plain floats keep full
precision.
"""
from __future__ import annotations

import csv
import io
import json
import re
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from typing import Any, Mapping, Sequence

_MARK = "@@fixed4:"
_MARK_RE = re.compile(r'"@@fixed4:(-?\d+\.\d{4})@@"')


class Fixed4:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


def fixed4(value) -> str:
    """Decimal text of ``value`` rounded half-up to 4 places."""
    if isinstance(value, Fixed4):
        value = value.value
    with localcontext() as ctx:
        ctx.prec = 50
        if isinstance(value, Fraction):
            d = Decimal(value.numerator) / Decimal(value.denominator)
        else:
            d = Decimal(value)
        return str(d.quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP))


def _default(obj: Any):
    if isinstance(obj, (Fraction, Fixed4)):
        return f"{_MARK}{fixed4(obj)}@@"
    if isinstance(obj, (tuple, set, frozenset)):
        return list(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(obj: Any, indent: int | None = 2) -> str:
    text = json.dumps(obj, default=_default, indent=indent)
    return _MARK_RE.sub(r"\1", text)


def cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (Fraction, Fixed4)):
        return fixed4(value)
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (list, tuple)):
        return " ".join(cell(v) for v in value)
    return str(value)


def rows_to_csv(rows: Sequence[Mapping[str, Any]], columns: Sequence[str] | None = None) -> str:
    columns = list(columns or (rows[0].keys() if rows else []))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([cell(r.get(c)) for c in columns])
    return buf.getvalue()
