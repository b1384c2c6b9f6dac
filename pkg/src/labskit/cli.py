"""``labs`` command-line front end.

Every subcommand writes one report to stdout: a JSON envelope
``{"command", "input_echo", "payload", "version"}`` or, with ``--format csv``,
a CSV table.  Exit status: 0 success, 1 domain error, 2 usage error.
Progress lines go to stderr only when ``LABS_LOG=progress``.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import os
import shlex
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .core import (
    LabsError,
    autocorrelation,
    decompose_energy,
    deviation,
    e_max,
    e_min,
    f_max,
    n_max,
    parse_sequence,
)
from .levels import build_level_table
from .records import (
    barker_check,
    barker_roots,
    builtin_records,
    extrapolation_csv,
    extrapolation_rows,
    fit_records,
    fit_report,
    load_records,
    merge_records,
    records_to_csv,
)
from .report import Fixed4, rows_to_csv, to_json
from .search import (
    DEFAULT_CEILING,
    SearchOptions,
    count_search_space,
    enumerate_energies,
    search,
    stderr_progress,
)

VERIFY_LIMIT = 24
FIT_MAX_N = 60


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _add_format(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="labs", description="Low autocorrelation binary sequence toolkit.")
    parser.add_argument("--version", action="version", version=f"labs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="energy, merit, decomposition and level table of a sequence")
    p.add_argument("sequence", help="'++-+' or '1 1 -1 1'")
    _add_format(p)
    p.set_defaults(subparser=p)

    p = sub.add_parser("search", help="find minimum-energy sequences of length N")
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--heuristic", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--minus-filter", action="store_true",
                   help="restrict to at most ceil(N/2) entries equal to -1")
    p.add_argument("--max-minus", type=int, help="minus-count bound (implies --minus-filter)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING,
                   help=f"largest N for exhaustive mode (default {DEFAULT_CEILING})")
    _add_format(p)
    p.set_defaults(subparser=p)

    p = sub.add_parser("verify", help="check the energy lattice by full enumeration")
    p.add_argument("--n-max", type=int, required=True)
    _add_format(p)
    p.set_defaults(subparser=p)

    p = sub.add_parser("records", help="best-known energies, deviation fit and extrapolation")
    p.add_argument("--file", help="CSV with header 'n,best_energy' merged over the built-in table")
    p.add_argument("--fit", action="store_true")
    p.add_argument("--extrapolate", type=int, metavar="N")
    _add_format(p)
    p.set_defaults(subparser=p)

    p = sub.add_parser("barker", help="Barker check of a sequence or merit-factor roots")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--check", metavar="SEQ")
    what.add_argument("--roots", action="store_true")
    p.add_argument("--merit", type=float)
    _add_format(p)
    p.set_defaults(subparser=p)

    p = sub.add_parser("space", help="search-space size with the minus-count filter")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-minus", type=int)
    _add_format(p)
    p.set_defaults(subparser=p)
    return parser


# --- subcommands ----------------------------------------------------------

def _analyze(args):
    seq = parse_sequence(args.sequence)
    prof = autocorrelation(seq)
    payload = {
        "sequence": seq.to_text(),
        "n": seq.n,
        "lags": list(prof.lags),
        "energy": prof.energy,
        "merit": prof.merit_factor,
        "e_max": e_max(seq.n),
        "e_min": e_min(seq.n),
        "n_max": n_max(seq.n),
        "f_max": f_max(seq.n) if seq.n >= 2 else None,
        "deviation": deviation(seq.n, prof.energy),
    }
    table = None
    if seq.n >= 2:
        dec = decompose_energy(seq)
        payload["decomposition"] = {
            "x_term": dec.x_term, "m": dec.m, "n": dec.n, "p": dec.p, "y_term": dec.y_term,
        }
        payload["is_barker"] = max(abs(r) for r in prof.lags) <= 1
        payload["attains_e_min"] = prof.energy == e_min(seq.n)
        table = build_level_table(seq)
        payload["level_table"] = table.to_dict()
    if args.format == "csv":
        if table is None:
            return rows_to_csv([], ["lag", "length", "expected_minus", "theoretical_max",
                                    "minus_count", "pair_minus", "deviation"])
        return table.to_csv()
    return payload


def _search(args, parser):
    if args.heuristic and (args.seed is None or args.restarts is None):
        parser.error("--heuristic requires --seed and --restarts")
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    opts = SearchOptions(
        mode="heuristic" if args.heuristic else "exhaustive",
        use_symmetry=not args.no_symmetry,
        minus_filter=args.minus_filter or args.max_minus is not None,
        max_minus_count=args.max_minus,
        seed=args.seed if args.heuristic else None,
        restarts=args.restarts if args.heuristic else None,
        worker_count=args.workers,
        ceiling=args.ceiling,
    )
    progress = stderr_progress if os.environ.get("LABS_LOG") == "progress" else None
    result = search(args.n, opts, progress)
    if progress:
        print(f"elapsed={result.elapsed:.3f}s", file=sys.stderr)
    payload = result.to_dict()
    if args.format == "csv":
        return rows_to_csv([payload])
    return payload


def verify_lattice(n_max_value: int) -> list[dict]:
    rows = []
    for n in range(1, n_max_value + 1):
        energies = enumerate_energies(n)
        top = e_max(n)
        lo, hi = int(energies.min()), int(energies.max())
        on_lattice = bool(((top - energies) % 4 == 0).all())
        rows.append({
            "n": n,
            "e_max": top,
            "e_min": e_min(n),
            "achieved_min": lo,
            "achieved_max": hi,
            "levels": int(np.unique(energies).size),
            "on_lattice": on_lattice,
            "max_is_e_max": hi == top,
            "min_at_least_e_min": lo >= e_min(n),
            "attains_e_min": lo == e_min(n),
            "ok": on_lattice and hi == top and lo >= e_min(n),
        })
    return rows


def _verify(args, parser):
    if not 1 <= args.n_max <= VERIFY_LIMIT:
        parser.error(f"--n-max must be in 1..{VERIFY_LIMIT}")
    rows = verify_lattice(args.n_max)
    ok = all(r["ok"] for r in rows)
    out = rows_to_csv(rows) if args.format == "csv" else {"all_ok": ok, "lengths": rows}
    return out, 0 if ok else 1


def _records(args, parser):
    if args.extrapolate is not None and args.extrapolate < 1:
        parser.error("--extrapolate must be >= 1")
    base = builtin_records()
    records = merge_records(base, load_records(args.file)) if args.file else base
    want_fit = args.fit or args.extrapolate is not None
    model = fit_records([r for r in records if r.n_value <= FIT_MAX_N]) if want_fit else None
    if args.format == "csv":
        if args.extrapolate is not None:
            return extrapolation_csv(extrapolation_rows(model, args.extrapolate, records))
        if model is not None:
            return rows_to_csv(fit_report(model, records)["points"],
                               ["n", "d_observed", "d_fit", "residual", "extrapolated"])
        return records_to_csv(records)
    payload = {
        "source": args.file or "builtin",
        "records": [
            {"n": r.n_value, "best_energy": r.best_energy,
             "theoretical_energy": r.theoretical_energy, "deviation": r.deviation}
            for r in records
        ],
    }
    if model is not None:
        payload["fit"] = fit_report(model, records)
    if args.extrapolate is not None:
        payload["extrapolation"] = extrapolation_rows(model, args.extrapolate, records)
    return payload


def _barker(args, parser):
    if args.check is not None:
        res = barker_check(parse_sequence(args.check))
        payload = {
            "sequence": args.check.strip(),
            "n": res.n_value,
            "lags": list(res.lags),
            "energy": res.energy,
            "is_barker": res.is_barker,
            "attains_e_min": res.attains_e_min,
            "deviation_from_merit": Fixed4(res.deviation_from_merit),
            "root_even": Fixed4(res.roots_even),
            "roots_odd": [Fixed4(r) for r in res.roots_odd],
        }
    else:
        if args.merit is None:
            parser.error("--roots requires --merit F")
        if args.merit <= 0:
            parser.error("--merit must be positive")
        roots = barker_roots(args.merit)
        payload = {
            "merit": Fixed4(roots.merit),
            "root_even": Fixed4(roots.even_root),
            "root_even_is_integer": roots.even_is_integer,
            "roots_odd": [Fixed4(r) for r in roots.odd_roots],
            "roots_odd_are_integer": list(roots.odd_are_integer),
        }
    if args.format == "csv":
        return rows_to_csv([payload])
    return payload


def _space(args, parser):
    if args.n < 1:
        parser.error("--n must be >= 1")
    stats = count_search_space(args.n, args.max_minus)
    payload = stats.to_dict()
    payload["reduction_ratio"] = Fixed4(Fraction(payload["reduction_ratio"]))
    if args.format == "csv":
        return rows_to_csv([payload])
    return payload


_HANDLERS = {
    "analyze": lambda a, p: _analyze(a),
    "search": _search,
    "verify": _verify,
    "records": _records,
    "barker": _barker,
    "space": _space,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    sub = args.subparser
    try:
        out = _HANDLERS[args.command](args, sub)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (LabsError, ValueError, IndexError) as exc:
        print(f"labs {args.command}: error: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(out, tuple):
        out, code = out
    if isinstance(out, str):
        sys.stdout.write(out)
    else:
        envelope = {
            "command": args.command,
            "input_echo": shlex.join(argv),
            "payload": out,
            "version": __version__,
        }
        sys.stdout.write(to_json(envelope) + "\n")
    return code


def run_cli(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run ``main`` capturing (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    sys.exit(main())
