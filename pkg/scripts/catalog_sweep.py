"""Run every certificate check for a set of catalog functions and print a table.

    python3 scripts/catalog_sweep.py --grid 48 pow:3 atan_neg cipu_int
"""
import argparse
import time

from convexkit.classifier import certificate_checks
from convexkit.functions import catalog_lookup

DEFAULT_IDS = ["pow:2", "pow:2.5", "pow:3", "pow:4", "pow:1.5", "neg_pow:1.5", "xsq_ln",
               "lp_root:2", "atan_neg", "cipu_int", "two_pow:2", "two_pow:4",
               "x_shift_even:1", "x_shift_odd:1", "xsqrt_neglog"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("ids", nargs="*", default=DEFAULT_IDS)
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--t-count", type=int, default=16)
    args = ap.parse_args()

    failures = 0
    for fid in args.ids:
        fn = catalog_lookup(fid)
        t0 = time.perf_counter()
        reports = certificate_checks(fn, args.grid, args.t_count)
        dt = time.perf_counter() - t0
        for r in reports:
            failures += not r.passed
            status = "ok  " if r.passed else "FAIL"
            print(f"{status} {fid:<16} {r.name:<48} min_gap={r.min_gap: .3e} "
                  f"checks={r.checks_run:<7d}")
        print(f"     {fid:<16} {len(reports)} checks in {dt:.2f}s")
    print(f"{failures} failing checks")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
