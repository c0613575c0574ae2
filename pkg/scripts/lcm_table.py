"""Tabulate L_n = lcm(binom(n, k)) against lcm(1..n).

    python scripts/lcm_table.py [--nmax 500] [--every 25]
"""

import argparse
import math

from holoscope.certificates import lcm_binomial_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=500)
    ap.add_argument("--every", type=int, default=25)
    args = ap.parse_args()

    running = 1
    worst = 0.0
    print(f"{'n':>5} {'log L_n / n':>12} {'L_n | lcm(1..n)':>16}")
    for n, L, q in lcm_binomial_table(args.nmax):
        running = math.lcm(running, n)
        if n >= 20:
            worst = max(worst, q)
        if n % args.every == 0 or n <= 4:
            print(f"{n:5d} {q:12.6f} {str(running % L == 0):>16}")
    print(f"max over 20 <= n <= {args.nmax}: {worst:.6f}")


if __name__ == "__main__":
    main()
