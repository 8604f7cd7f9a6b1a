"""Bivariate polynomials over Q as sparse dicts {(i, j): Fraction}."""

from __future__ import annotations

from fractions import Fraction

from .errors import ZeroPolynomial


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def normalize(P: dict) -> dict:
    out = {}
    for (i, j), c in P.items():
        c = _q(c)
        if c != 0:
            out[(int(i), int(j))] = c
    return out


def require_nonzero(P: dict) -> dict:
    P = normalize(P)
    if not P:
        raise ZeroPolynomial("zero polynomial")
    return P


def degree(P: dict) -> int:
    P = require_nonzero(P)
    return max(i + j for i, j in P)


def add(P: dict, Q: dict) -> dict:
    out = dict(P)
    for k, c in Q.items():
        out[k] = out.get(k, Fraction(0)) + c
    return normalize(out)


def scale(P: dict, c) -> dict:
    c = _q(c)
    return normalize({k: c * a for k, a in P.items()})


def mul(P: dict, Q: dict) -> dict:
    out = {}
    for (i1, j1), c1 in P.items():
        for (i2, j2), c2 in Q.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, Fraction(0)) + c1 * c2
    return normalize(out)


def sub_const(P: dict, t) -> dict:
    out = dict(normalize(P))
    out[(0, 0)] = out.get((0, 0), Fraction(0)) - _q(t)
    return normalize(out)


def eval_at(P: dict, x, y) -> Fraction:
    x, y = _q(x), _q(y)
    return sum((c * x ** i * y ** j for (i, j), c in P.items()), Fraction(0))


def monomial_key(term):
    """Graded-lex sort key for a monomial (i, j)."""
    i, j = term
    return (i + j, -i)


def to_string(P: dict) -> str:
    P = normalize(P)
    if not P:
        return "0"
    parts = []
    for (i, j) in sorted(P, key=monomial_key, reverse=True):
        c = P[(i, j)]
        mono = []
        if i:
            mono.append("x" if i == 1 else f"x^{i}")
        if j:
            mono.append("y" if j == 1 else f"y^{j}")
        body = "*".join(mono)
        if not body:
            piece = str(c)
        elif c == 1:
            piece = body
        elif c == -1:
            piece = f"-{body}"
        else:
            piece = f"{c}*{body}"
        if parts and not piece.startswith("-"):
            parts.append("+" + piece)
        else:
            parts.append(piece)
    return " ".join(parts)


def parse(text: str) -> dict:
    """Parse a polynomial in x, y with rational coefficients."""
    import sympy

    x, y = sympy.symbols("x y")
    expr = sympy.sympify(text.replace("^", "**"), locals={"x": x, "y": y})
    poly = sympy.Poly(sympy.expand(expr), x, y, domain="QQ")
    out = {}
    for (i, j), c in poly.terms():
        out[(int(i), int(j))] = Fraction(int(c.numerator), int(c.denominator))
    return normalize(out)


def from_sympy(expr) -> dict:
    import sympy

    x, y = sympy.symbols("x y")
    p = sympy.Poly(sympy.expand(expr), x, y, domain="QQ")
    out = {}
    for (i, j), c in p.terms():
        out[(int(i), int(j))] = Fraction(int(c.numerator), int(c.denominator))
    return normalize(out)


def factor_rational(P: dict):
    """Irreducible factors over Q with multiplicities, content dropped."""
    import sympy

    expr = to_sympy(require_nonzero(P))
    _, factors = sympy.factor_list(expr)
    out = []
    for f, e in factors:
        fd = from_sympy(f)
        if degree(fd) >= 1:
            out.append((fd, int(e)))
    return out


def to_sympy(P: dict):
    import sympy

    x, y = sympy.symbols("x y")
    return sympy.Add(*[
        sympy.Rational(c.numerator, c.denominator) * x ** i * y ** j
        for (i, j), c in P.items()])
