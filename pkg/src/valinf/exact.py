"""Exact scalar types and linear algebra.

Everything downstream runs on `fractions.Fraction`.  This module adds the
two-point extension of the rationals (``Ext``), polynomials in one formal
parameter read at the limit u -> -infinity (``TPoly``), symmetric matrices
whose entries may be -infinity, and plain exact Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class IndeterminateForm(ArithmeticError):
    """Raised on (+inf) + (-inf), 0 * inf and similar."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Ext:
    """A rational number, or one of the two infinities.

    kind is -1 for -inf, 0 for finite, +1 for +inf.
    """

    __slots__ = ("kind", "q")

    def __init__(self, value=0, *, _kind=0):
        if _kind:
            self.kind = _kind
            self.q = None
        else:
            self.kind = 0
            self.q = _as_fraction(value)

    # -- constructors -------------------------------------------------

    @staticmethod
    def of(value) -> "Ext":
        if isinstance(value, Ext):
            return value
        return Ext(value)

    @property
    def is_finite(self) -> bool:
        return self.kind == 0

    def finite(self) -> Fraction:
        if self.kind != 0:
            raise IndeterminateForm(f"not finite: {self}")
        return self.q

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "Ext":
        other = Ext.of(other)
        if self.kind == 0 and other.kind == 0:
            return Ext(self.q + other.q)
        if self.kind == 0:
            return other
        if other.kind == 0:
            return self
        if self.kind != other.kind:
            raise IndeterminateForm("inf - inf")
        return self

    __radd__ = __add__

    def __neg__(self) -> "Ext":
        if self.kind == 0:
            return Ext(-self.q)
        return NEG_INF if self.kind > 0 else POS_INF

    def __sub__(self, other) -> "Ext":
        return self + (-Ext.of(other))

    def __rsub__(self, other) -> "Ext":
        return Ext.of(other) + (-self)

    def __mul__(self, other) -> "Ext":
        other = Ext.of(other)
        if self.kind == 0 and other.kind == 0:
            return Ext(self.q * other.q)
        a, b = self, other
        if a.kind == 0:
            a, b = b, a
        # a is infinite
        if b.kind == 0:
            if b.q == 0:
                raise IndeterminateForm("0 * inf")
            sign = a.kind * (1 if b.q > 0 else -1)
        else:
            sign = a.kind * b.kind
        return POS_INF if sign > 0 else NEG_INF

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Ext":
        other = Ext.of(other)
        if other.kind != 0:
            if self.kind != 0:
                raise IndeterminateForm("inf / inf")
            return Ext(0)
        if other.q == 0:
            raise ZeroDivisionError("division by zero")
        if self.kind == 0:
            return Ext(self.q / other.q)
        sign = self.kind * (1 if other.q > 0 else -1)
        return POS_INF if sign > 0 else NEG_INF

    # -- order --------------------------------------------------------

    def _key(self):
        if self.kind != 0:
            return (self.kind, Fraction(0))
        return (0, self.q)

    def __lt__(self, other):
        return self._key() < Ext.of(other)._key()

    def __le__(self, other):
        return self._key() <= Ext.of(other)._key()

    def __gt__(self, other):
        return self._key() > Ext.of(other)._key()

    def __ge__(self, other):
        return self._key() >= Ext.of(other)._key()

    def __eq__(self, other):
        if isinstance(other, (Ext, int, Fraction)):
            return self._key() == Ext.of(other)._key()
        return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.kind > 0:
            return "+inf"
        if self.kind < 0:
            return "-inf"
        return str(self.q)

    def sign(self) -> int:
        if self.kind != 0:
            return self.kind
        return (self.q > 0) - (self.q < 0)


POS_INF = Ext(_kind=1)
NEG_INF = Ext(_kind=-1)


def ext_min(values: Iterable[Ext]) -> Ext:
    values = list(values)
    if not values:
        raise ValueError("empty min")
    out = values[0]
    for v in values[1:]:
        if v < out:
            out = v
    return out


def ext_sum(terms: Iterable[Ext]) -> Ext:
    """Sum with indeterminate-form detection independent of ordering."""
    finite = Fraction(0)
    pos = neg = False
    for t in terms:
        if t.kind > 0:
            pos = True
        elif t.kind < 0:
            neg = True
        else:
            finite += t.q
    if pos and neg:
        raise IndeterminateForm("inf - inf in sum")
    if pos:
        return POS_INF
    if neg:
        return NEG_INF
    return Ext(finite)


# ---------------------------------------------------------------------------
# polynomials in the limit parameter u
# ---------------------------------------------------------------------------


class TPoly:
    """Polynomial over Q in one formal parameter u, read as u -> -inf."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Fraction] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c) -> "TPoly":
        return TPoly([c])

    @staticmethod
    def param() -> "TPoly":
        return TPoly([0, 1])

    @property
    def degree(self) -> int:
        # degree of the zero polynomial is -1 by convention here
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "TPoly") -> "TPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return TPoly(out)

    def __neg__(self) -> "TPoly":
        return TPoly([-c for c in self.coeffs])

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other: "TPoly") -> "TPoly":
        if self.is_zero() or other.is_zero():
            return TPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return TPoly(out)

    def scale(self, c) -> "TPoly":
        c = _as_fraction(c)
        return TPoly([c * a for a in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts.append(f"{c}*u^{i}" if i else str(c))
        return " + ".join(parts)


def sign_at_neg_infinity(p: TPoly):
    """Sign and magnitude of lim_{u -> -inf} p(u).

    Returns (sign, magnitude) with sign in {-1, 0, +1} and magnitude in
    {"finite", "infinite"}.
    """
    if p.is_zero():
        return 0, "finite"
    d = p.degree
    lead = p.coeffs[-1]
    if d == 0:
        return (1 if lead > 0 else -1), "finite"
    sign = (1 if lead > 0 else -1) * (1 if d % 2 == 0 else -1)
    return sign, "infinite"


def limit_at_neg_infinity(p: TPoly) -> Ext:
    if p.is_zero():
        return Ext(0)
    if p.degree == 0:
        return Ext(p.coeffs[0])
    sign, _ = sign_at_neg_infinity(p)
    return POS_INF if sign > 0 else NEG_INF


def tpoly_det(rows: Sequence[Sequence[TPoly]]) -> TPoly:
    """Determinant of a square TPoly matrix by memoized minor expansion."""
    n = len(rows)
    if n == 0:
        return TPoly.const(1)
    for r in rows:
        if len(r) != n:
            raise ValueError("non-square matrix")

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple) -> TPoly:
        if row == n:
            return TPoly.const(1)
        acc = TPoly()
        for pos, col in enumerate(cols):
            entry = rows[row][col]
            if entry.is_zero():
                continue
            rest = cols[:pos] + cols[pos + 1:]
            term = entry * minor(row + 1, rest)
            acc = acc + (term if pos % 2 == 0 else -term)
        return acc

    return minor(0, tuple(range(n)))


# ---------------------------------------------------------------------------
# symmetric extended matrices
# ---------------------------------------------------------------------------


class SymMatrixExt:
    """Symmetric matrix over Ext; +inf entries are rejected."""

    def __init__(self, entries: Sequence[Sequence]):
        rows = [[Ext.of(e) for e in row] for row in entries]
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise ValueError("non-square matrix")
        for i in range(n):
            for j in range(n):
                if rows[i][j].kind > 0:
                    raise ValueError("+inf entry not allowed")
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix not symmetric")
        self.entries = rows
        self.size = n

    def _tpoly_rows(self, k: int):
        u = TPoly.param()
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                e = self.entries[i][j]
                row.append(u if e.kind < 0 else TPoly.const(e.q))
            out.append(row)
        return out

    def det_tpoly(self, k: int | None = None) -> TPoly:
        k = self.size if k is None else k
        return tpoly_det(self._tpoly_rows(k))


def chi_det(M: SymMatrixExt) -> Ext:
    """(-1)^l det(M) in the limit where every -inf entry goes to -infinity."""
    p = M.det_tpoly()
    if M.size % 2:
        p = -p
    return limit_at_neg_infinity(p)


def is_negative_definite(M: SymMatrixExt) -> bool:
    """Sylvester criterion evaluated in the u -> -inf limit."""
    for k in range(1, M.size + 1):
        sign, _ = sign_at_neg_infinity(M.det_tpoly(k))
        want = 1 if k % 2 == 0 else -1
        if sign != want:
            return False
    return True


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------


@dataclass
class LinSolveResult:
    solution: list | None          # one particular solution, or None
    kernel: list                   # basis of the homogeneous solution space


def solve_linear(A: Sequence[Sequence], b: Sequence | None = None) -> LinSolveResult:
    """Exact Gauss-Jordan elimination over Q.

    Solves A x = b (b defaults to 0) and also returns a kernel basis.
    """
    rows = [[_as_fraction(e) for e in row] for row in A]
    m = len(rows)
    n = len(rows[0]) if m else 0
    for row in rows:
        if len(row) != n:
            raise ValueError("ragged matrix")
    if b is None:
        rhs = [Fraction(0)] * m
    else:
        rhs = [_as_fraction(e) for e in b]
        if len(rhs) != m:
            raise ValueError("dimension mismatch")

    aug = [rows[i] + [rhs[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [e / pv for e in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [e - f * p for e, p in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break

    consistent = all(aug[i][n] == 0 for i in range(r, m))
    free_cols = [c for c in range(n) if c not in pivots]

    solution = None
    if consistent:
        solution = [Fraction(0)] * n
        for i, c in enumerate(pivots):
            solution[c] = aug[i][n]

    kernel = []
    for fc in free_cols:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -aug[i][fc]
        kernel.append(vec)

    return LinSolveResult(solution=solution, kernel=kernel)
