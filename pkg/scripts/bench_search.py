"""Time exhaustive search across lengths and check against the built-in records."""
import argparse

from labskit.records import builtin_records
from labskit.search import SearchOptions, exhaustive_search

ap = argparse.ArgumentParser()
ap.add_argument("--n-lo", type=int, default=4)
ap.add_argument("--n-hi", type=int, default=24)
ap.add_argument("--workers", type=int, default=1)
ap.add_argument("--no-symmetry", action="store_true")
args = ap.parse_args()

known = {r.n_value: r.best_energy for r in builtin_records()}
opts = SearchOptions(use_symmetry=not args.no_symmetry, worker_count=args.workers)
print(f"{'N':>3} {'E':>5} {'count':>6} {'examined':>11} {'seconds':>8}  match")
for n in range(args.n_lo, args.n_hi + 1):
    r = exhaustive_search(n, opts)
    match = "ok" if known.get(n, r.best_energy) == r.best_energy else "MISMATCH"
    print(f"{n:>3} {r.best_energy:>5} {r.optimum_count:>6} {r.sequences_examined:>11} {r.elapsed:>8.2f}  {match}")
