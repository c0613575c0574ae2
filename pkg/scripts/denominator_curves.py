"""Compare normalized denominator curves lcm(den a_0..a_n)^(1/n).

The non-integral counterexample sequence grows; the Apery numbers stay at 1.

    python scripts/denominator_curves.py [--nmax 400] [--csv out.csv]
"""

import argparse
import csv

from holoscope.certificates import g_certificate
from holoscope.exact import Poly
from holoscope.guess import Recurrence, extend_sequence

COUNTER = Recurrence((Poly([1, 2]), Poly([-11, -7]), Poly([1, 2])))
APERY = Recurrence((Poly([1, 3, 3, 1]), Poly([-117, -231, -153, -34]), Poly([8, 12, 6, 1])))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=400)
    ap.add_argument("--csv", help="write n,counter,apery rows here")
    args = ap.parse_args()

    certs = {
        "counter": g_certificate(extend_sequence(COUNTER, [0, 1], args.nmax), holonomic=True),
        "apery": g_certificate(extend_sequence(APERY, [1, 5], args.nmax), holonomic=True),
    }
    curves = {k: dict(c.denominator.points) for k, c in certs.items()}
    n = 25
    while n <= args.nmax:
        print(f"n={n:5d}  counter {curves['counter'][n]:10.4f}  apery {curves['apery'][n]:.4f}")
        n *= 2
    for k, c in certs.items():
        print(f"{k}: alarm={c.denominator.alarm} slope={c.denominator.slope}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "counter", "apery"])
            for i in sorted(curves["counter"]):
                w.writerow([i, curves["counter"][i], curves["apery"].get(i, "")])


if __name__ == "__main__":
    main()
