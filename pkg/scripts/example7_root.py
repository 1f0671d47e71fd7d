"""Locate the positive root of the cipu_int closed form by bisection.

The integrand t(t-2)/sqrt(t^2+1) is negative on (0, 2), so the integral
first dips below zero and only comes back after t = 2. This prints the
root, sign checks at a few integers, and a comparison against direct
quadrature of the integrand.
"""
import argparse

import numpy as np

from convexkit.functions import bisect_root, catalog_lookup
from convexkit.hermite_hadamard import integrate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=float, default=2.0)
    ap.add_argument("--hi", type=float, default=5.0)
    args = ap.parse_args()

    fn = catalog_lookup("cipu_int")
    for x in (1.0, 2.0, 3.0, 3.5, 4.0):
        quad = integrate(lambda t: t * (t - 2) / np.sqrt(t * t + 1), 0.0, x, 1e-13).value
        print(f"f({x:g}) = {float(fn(x)): .12f}   quadrature {quad: .12f}")
    root = bisect_root(fn, args.lo, args.hi)
    print(f"root on ({args.lo:g}, {args.hi:g}): {root!r}")
    print(f"inside (2, 3): {2 < root < 3}")


if __name__ == "__main__":
    main()
