"""Sweep a family of valuation sets through the classification pipeline.

Prints one row per configuration: chi, the transcendence-degree verdict,
and the witness polynomial when one exists.  All arithmetic is exact.

Usage: python3 scripts/classify_sweep.py [--max-degree D] [--denominator N]
"""

import argparse
from fractions import Fraction

from valinf import poly
from valinf.puiseux import weighted_branches
from valinf.richness import ValuationSet, classify
from valinf.valuations import Curve, Monomial, ROOT

F = Fraction


def monomial_row(t, D):
    v = ROOT if t == -1 else Monomial(F(-1), t)
    return f"v(-1,{t})", classify(ValuationSet.of([v]), D)


def curve_rows(D):
    out = []
    for text in ["y^2-x^3", "x*y-1", "y-x^2", "y^2-x^3-1"]:
        vs = [Curve(b) for b, _ in weighted_branches(poly.parse(text))]
        out.append((f"branches of {text}", classify(ValuationSet.of(vs), D)))
    return out


def fmt(c):
    w = c.witness_positive or c.witness_nonneg
    witness = poly.to_string(w) if w else "-"
    return f"chi={str(c.chi):>6}  delta={str(c.delta):>7}  witness={witness}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-degree", type=int, default=6)
    ap.add_argument("--denominator", type=int, default=3,
                    help="largest denominator in the monomial grid")
    args = ap.parse_args()

    grid = sorted({F(p, q) for q in range(1, args.denominator + 1)
                   for p in range(-q, 3 * q + 1)})
    print("-- single monomial valuations --")
    for t in grid:
        name, c = monomial_row(t, args.max_degree)
        print(f"{name:>12}  {fmt(c)}")
    print("-- curve branch sets --")
    for name, c in curve_rows(args.max_degree):
        print(f"{name:>24}  {fmt(c)}")


if __name__ == "__main__":
    main()
