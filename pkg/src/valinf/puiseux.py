"""Branch expansions of plane curves at infinity and their Laplacians.

Branches are computed per irreducible factor over Q, chart by chart over
the finitely many points of the curve closure on the line at infinity.
The Newton polygon recursion keeps all arithmetic rational and raises
NeedsFieldExtension as soon as an irrational coefficient would appear.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from . import poly
from .cluster import (PointAtInfinity, PuiseuxBranch, base_strict_series,
                      branch_steps, eval_divisorial, merge_paths, LINF)
from .errors import (InternalMismatch, NeedsFieldExtension,
                     PreconditionViolated, PrecisionExceeded, ZeroOrConstant)
from .exact import Ext, ext_sum
from .potential import DiscreteMeasure, EdgePoint, measure, point_green
from .series import LaurentSeries, PuiseuxSeries
from .valuations import Curve, Divisorial, meet, skewness


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# Newton polygon expansion
# ---------------------------------------------------------------------------


def _poly_u_coeff(G: dict, s: dict, k_max: int) -> dict:
    """Coefficients of G(u, s(u)) as a univariate dict, exact up to u^k_max."""
    jmax = max(j for _, j in G)
    pows = {0: {0: Fraction(1)}}
    for j in range(1, jmax + 1):
        prev = pows[j - 1]
        cur = {}
        for e1, c1 in prev.items():
            for e2, c2 in s.items():
                e = e1 + e2
                if e > k_max:
                    continue
                cur[e] = cur.get(e, Fraction(0)) + c1 * c2
        pows[j] = cur
    out = {}
    for (i, j), c in G.items():
        for e, cs in pows[j].items():
            e2 = i + e
            if e2 > k_max:
                continue
            out[e2] = out.get(e2, Fraction(0)) + c * cs
    return {e: c for e, c in out.items() if c != 0}


def _tail_coeffs(G: dict, K: int):
    """Series v(u) solving G(u, v) = 0 at a simple root v = 0.

    Returns (coeffs, exact); requires a nonzero linear coefficient at the
    origin and no constant term.
    """
    g01 = G.get((0, 1))
    if not g01:
        raise InternalMismatch("tail solving needs a simple root")
    if G.get((0, 0)):
        raise InternalMismatch("tail solving needs a root at the origin")
    s = {}
    for k in range(1, K + 1):
        res = _poly_u_coeff(G, s, k)
        r = res.get(k, Fraction(0))
        if r:
            s[k] = -r / g01
    exact = not _poly_u_coeff(G, s, 1 << 30)
    return s, exact


def _lower_edges(G: dict):
    """Newton polygon edges with v of positive order: (p, q, weight, points).

    Slope q/p means v grows like u^(q/p); points are the support points on
    the edge.
    """
    best = {}
    for (i, j) in G:
        if j not in best or i < best[j]:
            best[j] = i
    pts = sorted(best.items())            # (j, i) with minimal i per j
    hull = []
    for j, i in pts:
        while len(hull) >= 2:
            (j1, i1), (j2, i2) = hull[-2], hull[-1]
            # keep the lower-convex chain in (j, i)
            if (i2 - i1) * (j - j1) >= (i - i1) * (j2 - j1):
                hull.pop()
            else:
                break
        hull.append((j, i))
    edges = []
    for (j1, i1), (j2, i2) in zip(hull, hull[1:]):
        if i1 <= i2:
            continue                      # slope not positive
        mu = Fraction(i1 - i2, j2 - j1)
        p, q = mu.denominator, mu.numerator
        w = p * i1 + q * j1
        on_edge = [(i, j) for (i, j) in G if p * i + q * j == w]
        edges.append((p, q, w, on_edge))
    return edges


def _rational_root_of(t0: Fraction, p: int):
    """The rational c with c^p = t0 and, for even p, c > 0; None if absent.

    For even p the conjugate -c yields the same branch orbit, so one
    representative is enough; for odd p the sign of t0 fixes c.
    """
    import sympy

    if p == 1:
        return t0
    if t0 < 0 and p % 2 == 0:
        return None
    sign = -1 if t0 < 0 else 1
    rn, okn = sympy.integer_nthroot(abs(t0.numerator), p)
    rd, okd = sympy.integer_nthroot(t0.denominator, p)
    if not (okn and okd):
        return None
    return Fraction(sign * int(rn), int(rd))


def _char_roots(G: dict, on_edge, p: int, jmin: int):
    """Rational first coefficients c (with multiplicity) on an edge.

    The edge polynomial only involves c through c^p; conjugate branches
    share the same c^p, so each rational root of the polynomial in c^p
    gives one branch orbit, provided its p-th root is rational.
    """
    import sympy

    coeffs = {}
    for (i, j) in on_edge:
        coeffs[(j - jmin) // p] = G[(i, j)]
    t = sympy.symbols("t")
    expr = sympy.Add(*[
        sympy.Rational(c.numerator, c.denominator) * t ** e
        for e, c in coeffs.items()])
    _, factors = sympy.factor_list(sympy.Poly(expr, t, domain="QQ"))
    roots = []
    for f, e in factors:
        if f.degree() == 0:
            continue
        if f.degree() > 1:
            raise NeedsFieldExtension(
                f"edge polynomial has an irrational root: {f.as_expr()}",
                minimal_polynomial=str(f.as_expr()))
        a1, a0 = f.all_coeffs()
        r = sympy.Rational(-a0) / sympy.Rational(a1)
        t0 = Fraction(int(r.p), int(r.q))
        if t0 == 0:
            continue
        c = _rational_root_of(t0, p)
        if c is None:
            raise NeedsFieldExtension(
                f"branch coefficient c with c^{p} = {t0} is irrational",
                minimal_polynomial=f"c^{p} - ({t0})")
        roots.append((c, int(e)))
    return roots


def _substitute_edge(G: dict, p: int, q: int, w: int, c: Fraction) -> dict:
    """G(u^p, u^q (c + v)) / u^w as a polynomial dict."""
    from math import comb

    out = {}
    for (i, j), a in G.items():
        base = p * i + q * j - w
        for t in range(j + 1):
            k = (base, t)
            out[k] = out.get(k, Fraction(0)) + a * comb(j, t) * c ** (j - t)
    return {k: v for k, v in out.items() if v != 0}


def _np_branches(G: dict, K: int, depth: int = 0):
    """Branches v(u) of G with positive order: list of (m, coeffs, exact).

    coeffs maps tau exponents to coefficients with u = tau^m.
    """
    if depth > 64:
        raise PrecisionExceeded("Newton polygon recursion too deep")
    out = []
    jmin = min(j for _, j in G)
    if jmin > 0:
        for _ in range(jmin):
            out.append((1, {}, True))
        G = {(i, j - jmin): c for (i, j), c in G.items()}
    if (0, 0) in G:
        # unit at the origin: no further branches through this point
        return out
    for p, q, w, on_edge in _lower_edges(G):
        ejmin = min(j for _, j in on_edge)
        for c, mult in _char_roots(G, on_edge, p, ejmin):
            G1 = _substitute_edge(G, p, q, w, c)
            if mult == 1:
                coeffs1, exact = _tail_coeffs(G1, K)
                subs = [(1, coeffs1, exact)]
            else:
                subs = _np_branches(G1, K, depth + 1)
            for m1, cs1, exact in subs:
                cs = {q * m1: c}
                for e, ce in cs1.items():
                    k = q * m1 + e
                    cs[k] = cs.get(k, Fraction(0)) + ce
                out.append((p * m1, {k: v for k, v in cs.items() if v != 0},
                            exact))
    return out


# ---------------------------------------------------------------------------
# branches at infinity
# ---------------------------------------------------------------------------


def _base_points(f: dict):
    """Points of the closure of {f=0} on the line at infinity."""
    import sympy

    d = poly.degree(f)
    top = {j: c for (i, j), c in f.items() if i + j == d}
    t = sympy.symbols("t")
    expr = sympy.Add(*[
        sympy.Rational(c.numerator, c.denominator) * t ** j
        for j, c in top.items()])
    bases = []
    pol = sympy.Poly(expr, t, domain="QQ")
    if pol.degree() < d:
        bases.append(PointAtInfinity("y"))
    _, factors = sympy.factor_list(pol)
    for g, _ in factors:
        if g.degree() == 0:
            continue
        if g.degree() > 1:
            raise NeedsFieldExtension(
                f"irrational point at infinity: {g.as_expr()}",
                minimal_polynomial=str(g.as_expr()))
        a1, a0 = g.all_coeffs()
        t0 = -Fraction(int(sympy.Rational(a0).p), int(sympy.Rational(a0).q)) \
            / Fraction(int(sympy.Rational(a1).p), int(sympy.Rational(a1).q))
        bases.append(PointAtInfinity("x", -t0))
    return bases


_BRANCH_CACHE = {}


def weighted_branches(Q: dict, K=None):
    """All branches of {Q=0} at infinity as (PuiseuxBranch, weight) pairs.

    The weight is the multiplicity of the irreducible factor carrying the
    branch; the sum of weight * ramification over all pairs is deg Q.
    """
    Q = poly.require_nonzero(Q)
    d = poly.degree(Q)
    if d == 0:
        raise ZeroOrConstant("constant polynomial has no branches")
    if K is None:
        K = 4 * d * d
    key = (tuple(sorted(Q.items())), K)
    if key in _BRANCH_CACHE:
        return _BRANCH_CACHE[key]
    out = []
    mass = 0
    for f, e in poly.factor_rational(Q):
        df = poly.degree(f)
        minpoly = tuple(sorted(f.items()))
        fmass = 0
        for base in _base_points(f):
            G = base_strict_series(base, f, df)
            if G.order is not None:
                raise InternalMismatch("chart series of a polynomial "
                                       "must be exact")
            for m, cs, exact in _np_branches(dict(G.coeffs), K):
                kept = {j: c for j, c in cs.items() if j <= K}
                series = PuiseuxSeries.make(
                    m, kept, K,
                    exact=exact and len(kept) == len(cs))
                out.append((PuiseuxBranch(base=base, series=series,
                                          minpoly=minpoly), e))
                fmass += m
        if fmass != df:
            raise InternalMismatch(
                f"branch ramifications sum to {fmass}, expected {df}")
        mass += e * fmass
    if mass != d:
        raise InternalMismatch("total branch mass must equal the degree")
    _BRANCH_CACHE[key] = out
    return out


def branches_at_infinity(Q: dict, K=None):
    """Branches of the reduced curve {Q=0} at infinity."""
    return [b for b, _ in weighted_branches(Q, K)]


def log_laplacian(Q: dict, K=None) -> DiscreteMeasure:
    """Measure with one atom per branch at infinity, weighted by its
    intersection multiplicity with the line at infinity."""
    return measure([(Curve(b), e * b.multiplicity)
                    for b, e in weighted_branches(Q, K)])


def log_value(Q: dict, v, K=None) -> Ext:
    """Green-function side of the chart identity: sum of weight *
    skewness(meet with each branch); equals minus the valuation of Q."""
    return ext_sum(Ext(e * b.multiplicity) * point_green(Curve(b), v)
                   for b, e in weighted_branches(Q, K))


# ---------------------------------------------------------------------------
# realizing interior points of a branch segment
# ---------------------------------------------------------------------------


def _perturbed_curve(branch: PuiseuxBranch, xi: Fraction) -> Curve:
    """A terminating branch agreeing with the given one strictly below
    exponent xi (in x_q^(1/m) units) and diverging exactly there."""
    s = branch.series
    mp = (s.m * xi.denominator) // gcd(s.m, xi.denominator)
    scale = mp // s.m
    jstar = int(xi * mp)
    coeffs = {}
    cstar = Fraction(1)
    for j, c in s.coeffs:
        if Fraction(j, s.m) < xi:
            coeffs[j * scale] = c
        elif Fraction(j, s.m) == xi:
            cstar = c + 1
    coeffs[jstar] = cstar
    series = PuiseuxSeries.make(mp, coeffs, max(jstar, 1), exact=True)
    return Curve(PuiseuxBranch(base=branch.base, series=series, minpoly=None))


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The smallest-denominator rational strictly inside (lo, hi)."""
    from math import floor

    il = floor(lo)
    if il + 1 < hi:
        return Fraction(il + 1)
    if lo == il:
        return il + Fraction(1, floor(1 / (hi - il)) + 1)
    return il + 1 / _simplest_between(1 / (hi - il), 1 / (lo - il))


def divisorial_on_segment(branch: PuiseuxBranch, alpha) -> Divisorial:
    """The divisorial valuation of given skewness on [root, branch].

    If the skewness matches a center of the branch the node is returned
    directly.  Otherwise the point is the junction with a branch
    perturbed at the right contact exponent.  The contact-to-skewness
    map is affine between consecutive dual-path centers with slope
    -m / (b_i b_j) read off the edge, so each probe is projected to the
    target with the exact local slope and lands one edge closer at
    worst; simplest-rational bisection is the fallback that keeps probe
    denominators small.
    """
    from .cluster import branch_to_nodes

    alpha = Ext(_q(alpha))
    if alpha >= Ext(1):
        raise PreconditionViolated("segment skewness must be below 1")
    cv = Curve(branch)
    ram = branch.series.m

    # dual-path profile [(skewness, multiplicity)] from the root down,
    # extended on demand
    state = {"depth": 8, "profile": None, "cl": None, "path": None}

    def extend_profile(below: Ext):
        if state["profile"] is not None and state["profile"][-1][0] < below:
            return
        while True:
            cl, nodes = branch_to_nodes(branch.base, branch.series,
                                        state["depth"])
            g = cl.geometry()
            dp = g.dual_path(nodes[-1])
            prof = [(Ext(g.alpha[n]), g.b[n]) for n in dp]
            state.update(profile=prof, cl=cl, path=dp)
            if prof[-1][0] < below:
                return
            state["depth"] += 8

    extend_profile(alpha)
    for (av, _), n in zip(state["profile"], state["path"]):
        if av == alpha:
            return Divisorial(state["cl"], n)

    def slope_denominator(a_from: Ext) -> Fraction:
        """b_i * b_j of the edge on the target side of a_from."""
        extend_profile(min(a_from, alpha))
        prof = state["profile"]
        for i in range(len(prof) - 1):
            hi_a, lo_a = prof[i][0], prof[i + 1][0]
            on_edge = hi_a > a_from > lo_a
            at_top = a_from == hi_a and alpha < a_from
            at_bottom = a_from == lo_a and alpha > a_from
            if on_edge or at_top or at_bottom:
                return Fraction(prof[i][1] * prof[i + 1][1])
        raise InternalMismatch("probe skewness fell off the dual profile")

    def probe(xi):
        m = meet(cv, _perturbed_curve(branch, xi))
        return skewness(m), m

    lo = Fraction(1, 2 * ram)
    a_lo, m_lo = probe(lo)
    while a_lo < alpha:
        lo /= 2
        a_lo, m_lo = probe(lo)
    if a_lo == alpha:
        return m_lo
    hi = Fraction(2)
    a_hi, m_hi = probe(hi)
    while a_hi > alpha:
        hi *= 2
        a_hi, m_hi = probe(hi)
    if a_hi == alpha:
        return m_hi

    for _ in range(500):
        if (a_lo - alpha) <= (alpha - a_hi):
            x_p, a_p = lo, a_lo
        else:
            x_p, a_p = hi, a_hi
        extend_profile(min(a_p, a_hi))
        xc = x_p + (a_p - alpha).q * slope_denominator(a_p) / ram
        if not lo < xc < hi:
            xc = _simplest_between(lo, hi)
        a_c, m_c = probe(xc)
        if a_c == alpha:
            return m_c
        if a_c > alpha:
            lo, a_lo = xc, a_c
        else:
            hi, a_hi = xc, a_c
    raise InternalMismatch("segment point search did not converge")


# ---------------------------------------------------------------------------
# Laplacian of log^+
# ---------------------------------------------------------------------------


def logplus_laplacian(Q: dict, K=None, materialize=True) -> DiscreteMeasure:
    """Atoms where the valuation of Q first reaches zero on the way from
    the root to each branch at infinity, weighted by the branch masses.

    With materialize=True interior atoms are realized as divisorial
    valuations; otherwise they stay segment points, which is cheaper.
    """
    pairs = weighted_branches(Q, K)
    depths = [6] * len(pairs)
    while True:
        paths = [(b.base, tuple(branch_steps(b.base, b.series, depths[i])))
                 for i, (b, _) in enumerate(pairs)]
        merged, ends = merge_paths(paths)
        g = merged.geometry()
        vals = {LINF: Fraction(-poly.degree(Q))}
        atoms = []
        redo = False
        for i, (b, e) in enumerate(pairs):
            path = g.dual_path(ends[i])
            for n in path:
                if n not in vals:
                    vals[n] = eval_divisorial(merged, n, Q)
            crossing = None
            for prev, n in zip(path, path[1:]):
                if vals[n] == 0:
                    crossing = Divisorial(merged, n)
                    break
                if vals[n] > 0:
                    a0, a1 = g.alpha[prev], g.alpha[n]
                    astar = a0 + (-vals[prev]) * (a1 - a0) / \
                        (vals[n] - vals[prev])
                    if materialize:
                        crossing = divisorial_on_segment(b, astar)
                    else:
                        crossing = EdgePoint(Curve(b), astar)
                    break
            if crossing is None:
                depths[i] += 4
                redo = True
                break
            atoms.append((crossing, e * b.multiplicity))
        if not redo:
            return measure(atoms)
