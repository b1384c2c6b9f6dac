"""Fit the N=4..60 deviations and write plot-ready extrapolation data.

    python scripts/deviation_fit.py --until 304 [--records more.csv] > fit.csv
"""
import argparse
import sys

from labskit.records import (
    builtin_records,
    extrapolation_csv,
    extrapolation_rows,
    fit_records,
    load_records,
    merge_records,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--until", type=int, default=304)
    ap.add_argument("--records", help="extra 'n,best_energy' CSV (e.g. best-known lists past 60)")
    args = ap.parse_args(argv)

    base = builtin_records()
    model = fit_records(base)
    records = merge_records(base, load_records(args.records)) if args.records else base
    a2, a1, a0 = model.coefficients
    print(f"d(N) = {a2:.6g} N^2 + {a1:.6g} N + {a0:.6g}  (rms {model.residual_rms:.4f})", file=sys.stderr)
    sys.stdout.write(extrapolation_csv(extrapolation_rows(model, args.until, records)))


if __name__ == "__main__":
    main()
