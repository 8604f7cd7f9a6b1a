"""Constructive witnesses by exact linear algebra on coefficient jets.

A generic polynomial of degree <= d is a vector of unknown rational
coefficients.  Each valuation contributes homogeneous linear conditions
expressing v(P) >= threshold; a nonzero kernel element of the stacked
system is a candidate witness, re-verified through the valuations module
before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from . import poly
from .cluster import Free, SatU, SatV
from .errors import InsufficientTruncation, InternalMismatch
from .exact import Ext, solve_linear
from .valuations import (Curve, Divisorial, Monomial, Root, Valuation,
                         branch_xy_series, evaluate)


def monomials_upto(d: int, include_constant: bool = True):
    """Monomials (i, j) with i + j <= d, graded-lex ascending."""
    out = [(i, j) for i in range(d + 1) for j in range(d + 1 - i)
           if include_constant or (i, j) != (0, 0)]
    out.sort(key=poly.monomial_key)
    return out


@dataclass
class ConstraintSystem:
    """Homogeneous conditions on the coefficients of a generic polynomial."""

    monomials: list
    rows: list

    def stack(self, other: "ConstraintSystem") -> "ConstraintSystem":
        if self.monomials != other.monomials:
            raise ValueError("mismatched unknowns")
        return ConstraintSystem(self.monomials, self.rows + other.rows)


def _kill(monomials, idx) -> list:
    row = [Fraction(0)] * len(monomials)
    row[idx] = Fraction(1)
    return row


def _monomial_rows(v: Monomial, monomials, strict: bool) -> list:
    rows = []
    for k, (i, j) in enumerate(monomials):
        val = v.s * i + v.t * j
        if val < 0 or (strict and val == 0):
            rows.append(_kill(monomials, k))
    return rows


def _root_rows(monomials, strict: bool) -> list:
    rows = []
    for k, (i, j) in enumerate(monomials):
        if strict or (i, j) != (0, 0):
            rows.append(_kill(monomials, k))
    return rows


# ---------------------------------------------------------------------------
# divisorial conditions by total-transform propagation
# ---------------------------------------------------------------------------


def _vec_base_series(base, monomials, d: int):
    """u^d * P at the base point, coefficients as unit vectors.

    Returns {(a, b): vector}; vector[k] multiplies the unknown of
    monomials[k].
    """
    n = len(monomials)
    out = {}

    def bump(key, k, c):
        if c == 0:
            return
        vec = out.get(key)
        if vec is None:
            vec = out[key] = [Fraction(0)] * n
        vec[k] += c

    for k, (i, j) in enumerate(monomials):
        if base.chart == "x":
            # x = 1/u, y = (v - c)/u
            for t in range(j + 1):
                bump((d - i - j, t), k,
                     Fraction(comb(j, t)) * (-base.c) ** (j - t))
        else:
            # x = v/u, y = 1/u
            bump((d - i - j, i), k, Fraction(1))
    return out


def _vec_step(F: dict, step) -> dict:
    """Total transform of F under one blowup (no exceptional division)."""
    out = {}

    def bump(key, vec):
        cur = out.get(key)
        if cur is None:
            out[key] = list(vec)
        else:
            for k, c in enumerate(vec):
                cur[k] += c

    for (a, b), vec in F.items():
        if isinstance(step, Free):
            # v -> u (v + c)
            for t in range(b + 1):
                c = Fraction(comb(b, t)) * step.c ** (b - t)
                if c:
                    bump((a + b, t), [c * e for e in vec])
        elif isinstance(step, SatV):
            bump((a + b, b), vec)
        else:                                   # SatU: u -> u v
            bump((a, a + b), vec)
    return out


def _poly_step(F: dict, step) -> dict:
    """Total transform of a plain {(a, b): coeff} polynomial."""
    out = {}
    for (a, b), c in F.items():
        if isinstance(step, Free):
            for t in range(b + 1):
                coef = c * comb(b, t) * step.c ** (b - t)
                if coef:
                    key = (a + b, t)
                    out[key] = out.get(key, Fraction(0)) + coef
        elif isinstance(step, SatV):
            key = (a + b, b)
            out[key] = out.get(key, Fraction(0)) + c
        else:
            key = (a, a + b)
            out[key] = out.get(key, Fraction(0)) + c
    return {k: c for k, c in out.items() if c}


def _divisorial_rows(v: Divisorial, monomials, d: int, strict: bool) -> list:
    cl, node = v.realize()
    path = cl.path(node)
    base = cl.nodes[path[0]].base
    # pull back the local equation u of the line at infinity first;
    # ord_E(P) = mult(F) - d * mult(u) at the blown-up center
    U = {(1, 0): Fraction(1)}
    for i in path[1:]:
        U = _poly_step(U, cl.nodes[i].step)
    # multiplicity at a point is the minimal total degree of the local
    # expansion; ord along the divisor of the blown-up point equals it
    need = d * min(a + b for (a, b) in U) + (1 if strict else 0)
    # total degree never decreases under a blowup substitution, so terms
    # at or above the threshold can be discarded as they appear
    F = _vec_base_series(base, monomials, d)
    F = {k: vec for k, vec in F.items() if k[0] + k[1] < need}
    for i in path[1:]:
        F = _vec_step(F, cl.nodes[i].step)
        F = {k: vec for k, vec in F.items() if k[0] + k[1] < need}
    return [list(vec) for vec in F.values() if any(vec)]


def _curve_rows(v: Curve, monomials, strict: bool) -> list:
    from .series import LaurentSeries

    x, y, b = branch_xy_series(v.branch)
    one = LaurentSeries.monomial(0, 1)
    xp = {0: one}
    yp = {0: one}

    def power(base, k, cache):
        if k not in cache:
            cache[k] = power(base, k - 1, cache) * base
        return cache[k]

    bound = 0 if strict else -1
    cols = {}
    for idx, (i, j) in enumerate(monomials):
        s = power(x, i, xp) * power(y, j, yp)
        if s.prec is not None and s.prec <= bound:
            raise InsufficientTruncation(
                "branch truncation too short for these degrees")
        for e, c in s.coeffs.items():
            if e <= bound:
                cols.setdefault(e, {})[idx] = c
    rows = []
    for e in sorted(cols):
        row = [Fraction(0)] * len(monomials)
        for idx, c in cols[e].items():
            row[idx] = c
        rows.append(row)
    return rows


def valuation_conditions(v: Valuation, d: int, strict: bool,
                         monomials=None) -> ConstraintSystem:
    """Linear conditions on deg <= d coefficients for v(P) >= threshold.

    The threshold is 0 when ``strict`` is false, and the smallest value
    admissible for the valuation's value group otherwise.
    """
    if monomials is None:
        monomials = monomials_upto(d)
    if isinstance(v, Root):
        rows = _root_rows(monomials, strict)
    elif isinstance(v, Monomial):
        rows = _monomial_rows(v, monomials, strict)
    elif isinstance(v, Divisorial):
        rows = _divisorial_rows(v, monomials, d, strict)
    elif isinstance(v, Curve):
        rows = _curve_rows(v, monomials, strict)
    else:
        raise TypeError(f"not a valuation: {v!r}")
    return ConstraintSystem(list(monomials), rows)


# ---------------------------------------------------------------------------
# witness search
# ---------------------------------------------------------------------------


def _canonical(vec, monomials) -> dict:
    """Integer-normalized polynomial with positive graded-lex leading term."""
    P = {m: c for m, c in zip(monomials, vec) if c}
    den = 1
    for c in P.values():
        den = den * c.denominator // gcd(den, c.denominator)
    num = 0
    for c in P.values():
        num = gcd(num, c.numerator * (den // c.denominator))
    lead = max(P, key=poly.monomial_key)
    sign = 1 if P[lead] > 0 else -1
    return {m: Fraction(sign * c.numerator * (den // c.denominator), num)
            for m, c in P.items()}


def _pick_kernel_element(kernel, monomials) -> dict | None:
    """Deterministic choice: smallest leading monomial, then lex on vectors."""
    if not kernel:
        return None
    order = sorted(range(len(monomials)),
                   key=lambda k: poly.monomial_key(monomials[k]))

    def key(vec):
        lead = max((k for k in range(len(vec)) if vec[k]),
                   key=lambda k: poly.monomial_key(monomials[k]))
        unit = [c / vec[lead] for c in vec]
        return (poly.monomial_key(monomials[lead]), [unit[k] for k in order])

    best = min(kernel, key=key)
    return _canonical(best, monomials)


def _search(valuations, D: int, strict: bool, include_constant: bool):
    for d in range(1, D + 1):
        monomials = monomials_upto(d, include_constant)
        rows = []
        for v in valuations:
            rows.extend(valuation_conditions(v, d, strict, monomials).rows)
        if rows:
            kernel = solve_linear(rows).kernel
        else:
            n = len(monomials)
            kernel = [[Fraction(k == i) for k in range(n)] for i in range(n)]
        P = _pick_kernel_element(kernel, monomials)
        if P is not None:
            return P
    return None


def _verify(P: dict, valuations, strict: bool) -> dict:
    for v in valuations:
        val = evaluate(v, P)
        ok = val > Ext(0) if strict else val >= Ext(0)
        if not ok:
            raise InternalMismatch(
                f"witness verification failed: v(P) = {val} for {v!r}")
    return P


def find_positive(S, D: int):
    """Nonzero P of degree <= D with v(P) > 0 for all v in S, or None.

    None never disproves existence; it only exhausts the degree bound.
    """
    valuations = list(S)
    P = _search(valuations, D, strict=True, include_constant=True)
    if P is None:
        return None
    return _verify(P, valuations, strict=True)


def find_nonnegative_nonconstant(S, D: int):
    """Nonconstant P of degree <= D with v(P) >= 0 for all v in S, or None."""
    valuations = list(S)
    P = _search(valuations, D, strict=False, include_constant=False)
    if P is None:
        return None
    return _verify(P, valuations, strict=False)
