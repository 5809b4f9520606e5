"""Show the regularization ladder converging for the dilogarithm value.

For each rung epsilon, the raw quadrature from epsilon to x along the
real axis; then the extrapolated limit and the series value for
comparison.  Illustrates the eps*log(eps) error model the extrapolation
basis matches.

Usage: python scripts/regularization_ladder.py [--x 0.5]
"""

import argparse

from alblab.integrals import (QuadratureConfig, iterated_integral,
                              tangential_iterated_integral)
from alblab.paths import LogSegment, Path


def li2_series(x: float, terms: int = 400) -> float:
    return sum(x ** n / n ** 2 for n in range(1, terms))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--x", type=float, default=0.5)
    args = ap.parse_args()
    cfg = QuadratureConfig()
    target = li2_series(args.x)

    print(f"dilog at x = {args.x}: series value {target:.15f}\n")
    print(f"{'epsilon':>10} {'raw quadrature':>20} {'error':>12}")
    for eps in cfg.regularization_epsilons:
        raw = iterated_integral("10", Path((LogSegment(eps, args.x),)), cfg).real
        print(f"{eps:10.0e} {raw:20.15f} {abs(raw - target):12.3e}")
    limit = tangential_iterated_integral("10", args.x, cfg).real
    print(f"\nextrapolated limit: {limit:.15f}   error {abs(limit - target):.3e}")


if __name__ == "__main__":
    main()
