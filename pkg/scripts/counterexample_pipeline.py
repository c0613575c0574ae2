"""Run the obstruction pipeline on (2n+1)a_{n+2} = (7n+11)a_{n+1} - (2n+1)a_n, a_0=0, a_1=1.

Prints the ODE, singular factors with exponent polynomials, the verdict,
and the asymptotic fit set against the exponent prediction.

    python scripts/counterexample_pipeline.py [--nmax 2000]
"""

import argparse
import math

from holoscope.asymptotics import cross_validate, fit_sequence
from holoscope.exact import Poly
from holoscope.guess import Recurrence, extend_sequence
from holoscope.ode import obstruction_verdict, rec_to_ode, singular_points


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=2000)
    args = ap.parse_args()

    rec = Recurrence((Poly([1, 2]), Poly([-11, -7]), Poly([1, 2])))
    s = extend_sequence(rec, [0, 1], args.nmax)
    o = rec_to_ode(rec, [0, 1])
    print("ODE:", o.to_str())
    sing = singular_points(o)
    for f in sing.factors:
        roots = ", ".join(str(r.center) for r in f.roots)
        print(f"  {f.factor.to_str()}: roots {roots}")
        if f.exponent_poly is not None:
            rats = [str(x) for x in f.rational_exponents] or "none"
            print(f"    exponents: {f.exponent_poly.to_str('alpha')}, rational: {rats}")
    v = obstruction_verdict(o, s, sing, rec)
    print("verdict:", v.kind.value)

    fit = fit_sequence(s)
    cv = cross_validate(fit, sing)
    print(f"growth {fit.growth.digits}  (exact (7+sqrt 33)/4 = {(7 + math.sqrt(33)) / 4!r})")
    print(f"theta  {fit.theta.digits}  (exact 5 sqrt33/22 = {5 * math.sqrt(33) / 22!r})")
    print("cross-validation consistent:", cv.consistent)


if __name__ == "__main__":
    main()
