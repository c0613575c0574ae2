"""Fit synthetic lambda^n n^theta sequences and print the recovery errors.

    python scripts/calibration_grid.py [--nmax 500] [--depth 4]
"""

import argparse
from fractions import Fraction

from holoscope.asymptotics import fit_exponent, fit_growth, synthetic_power_sequence

LAMBDAS = (Fraction(1, 2), Fraction(2), Fraction(10))
THETAS = (Fraction(-3, 2), Fraction(0), Fraction(5, 2))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=500)
    ap.add_argument("--depth", type=int, default=4)
    args = ap.parse_args()

    print(f"{'lambda':>7} {'theta':>6} {'lambda err':>11} {'gauge':>9} {'theta err':>10} {'gauge':>9}")
    for lam in LAMBDAS:
        for theta in THETAS:
            s = synthetic_power_sequence(lam, theta, args.nmax)
            g = fit_growth(s, args.depth)
            t = fit_exponent(s, g, args.depth)
            print(f"{str(lam):>7} {str(theta):>6} {abs(g.value - float(lam)):11.2e} {g.gauge:9.1e}"
                  f" {abs(t.value - float(theta)):10.2e} {t.gauge:9.1e}")


if __name__ == "__main__":
    main()
