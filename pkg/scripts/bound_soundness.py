"""Sweep the deviation bounds over seeded random samples and report the
smallest slack and the tightest ratio actual/bound per bound."""
import argparse

import numpy as np

from convexkit.bounds import (WeightedSample, cipu_bound, deviation_bound_modulus,
                              deviation_bound_power, deviation_bound_strong,
                              deviation_bound_submultiplicative)
from convexkit.functions import catalog_lookup, power_companion
from convexkit.sampling import bound_samples


def _bounds():
    sq, cube, two = catalog_lookup("pow:2"), catalog_lookup("pow:3"), catalog_lookup("two_pow:2")
    return {
        "cipu": (True, cipu_bound),
        "power p=2": (False, lambda s: deviation_bound_power(s, 2)),
        "power p=3": (False, lambda s: deviation_bound_power(s, 3)),
        "submult x^2": (True, lambda s: deviation_bound_submultiplicative(s, sq)),
        "submult x^3": (True, lambda s: deviation_bound_submultiplicative(s, cube)),
        "strong m=1": (False, lambda s: deviation_bound_strong(s, 1.0, 2.0, sq)),
        "strong m=2": (False, lambda s: deviation_bound_strong(s, 2.0, 2.0, two)),
        "modulus x^2": (True, lambda s: deviation_bound_modulus(s, sq, power_companion(2))),
        "modulus x^3": (True, lambda s: deviation_bound_modulus(s, cube, power_companion(3))),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=10_000)
    args = ap.parse_args()

    samples = bound_samples(np.random.default_rng(args.seed), args.trials)
    bounds = _bounds()
    worst = {k: np.inf for k in bounds}
    tight = {k: 0.0 for k in bounds}
    failed = {k: 0 for k in bounds}
    for x, w in samples:
        weighted = WeightedSample(x, w)
        equal = WeightedSample.equal(x)
        for name, (needs_equal, bound) in bounds.items():
            rep = bound(equal if needs_equal else weighted)
            worst[name] = min(worst[name], rep.slack)
            if rep.bound_value > 0:
                tight[name] = max(tight[name], rep.actual_value / rep.bound_value)
            failed[name] += not rep.passed
    for name in bounds:
        print(f"{name:<13} min slack {worst[name]: .3e}  max actual/bound {tight[name]:.6f}  "
              f"failures {failed[name]}")


if __name__ == "__main__":
    main()
