from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from valinf import poly
from valinf.cluster import PointAtInfinity
from valinf.errors import InternalMismatch, NeedsFieldExtension, ZeroOrConstant
from valinf.exact import Ext, NEG_INF, POS_INF
from valinf.potential import EdgePoint, point_skewness
from valinf.puiseux import (branches_at_infinity, divisorial_on_segment,
                            log_laplacian, log_value, logplus_laplacian,
                            weighted_branches)
from valinf.valuations import (Comparison, Curve, Divisorial, Monomial, ROOT,
                               compare, evaluate, meet, skewness)

F = Fraction
PX0 = PointAtInfinity("x", F(0))
PY = PointAtInfinity("y")

CORPUS = ["x", "y", "y-x^2", "y^2-x^3", "y^2-x^3-1", "x*y-1",
          "y^2-x", "y^3-x*y-1", "y^2-4*x", "x^2*y^3-x-1"]


class TestBranches:
    def test_line_y(self):
        (b, e), = weighted_branches(poly.parse("y"))
        assert e == 1
        assert b.base == PX0
        assert b.series.m == 1 and b.series.coeffs == () and b.series.exact

    def test_line_x(self):
        (b, e), = weighted_branches(poly.parse("x"))
        assert b.base == PY
        assert b.series.m == 1 and b.series.coeffs == ()

    def test_parabola(self):
        # y = x^2 meets the line at infinity at [0:1:0] with x ~ y^(1/2)
        (b, e), = weighted_branches(poly.parse("y-x^2"))
        assert b.base == PY
        assert b.series.m == 2
        assert dict(b.series.coeffs) == {1: F(1)}
        assert b.series.exact

    def test_cusp(self):
        (b, e), = weighted_branches(poly.parse("y^2-x^3"))
        assert b.base == PY
        assert b.series.m == 3
        assert dict(b.series.coeffs) == {1: F(1)}
        assert b.series.exact

    def test_hyperbola_two_branches(self):
        bs = weighted_branches(poly.parse("x*y-1"))
        assert sorted(b.base.chart for b, _ in bs) == ["x", "y"]
        for b, e in bs:
            assert e == 1 and b.series.m == 1
            assert dict(b.series.coeffs) == {2: F(1)}

    def test_perturbed_cusp_tail(self):
        # x = y^(2/3) (1 + y^-2)^(1/3) expanded binomially
        (b, _), = weighted_branches(poly.parse("y^2-x^3-1"))
        assert b.base == PY and b.series.m == 3
        assert not b.series.exact
        cs = dict(b.series.coeffs)
        assert cs[1] == F(1)
        assert cs[7] == F(-1, 3)
        assert cs[13] == F(-1, 9)

    def test_rational_pth_root_coefficient(self):
        (b, _), = weighted_branches(poly.parse("y^2-4*x"))
        assert dict(b.series.coeffs) == {1: F(2)}
        assert b.series.exact
        (b, _), = weighted_branches(poly.parse("y^3-8*x^2"))
        assert b.series.m == 3
        assert dict(b.series.coeffs)[1] == F(2)

    def test_factor_multiplicity(self):
        (b, e), = weighted_branches(poly.parse("(y-x^2)^2"))
        assert e == 2 and b.series.m == 2

    def test_reducible_mixed(self):
        bs = weighted_branches(poly.parse("y*(x*y-1)"))
        assert sum(e * b.series.m for b, e in bs) == 3
        assert len(bs) == 3

    def test_minpoly_recorded(self):
        (b, _), = weighted_branches(poly.parse("y^2-x^3-1"))
        assert b.minpoly is not None
        assert poly.degree(dict(b.minpoly)) == 3
        # truncated branch still certifies vanishing through its factor
        assert evaluate(Curve(b), poly.parse("y^2-x^3-1")) == POS_INF

    def test_irrational_coefficient_raises(self):
        with pytest.raises(NeedsFieldExtension):
            weighted_branches(poly.parse("y^2-2*x"))

    def test_irrational_point_at_infinity_raises(self):
        with pytest.raises(NeedsFieldExtension):
            weighted_branches(poly.parse("y^2-2*x^2"))
        with pytest.raises(NeedsFieldExtension):
            weighted_branches(poly.parse("x^2+y^2-1"))

    def test_constant_raises(self):
        with pytest.raises(ZeroOrConstant):
            weighted_branches({(0, 0): F(3)})

    def test_mass_identity(self):
        for s in CORPUS:
            Q = poly.parse(s)
            bs = weighted_branches(Q)
            assert sum(e * b.series.m for b, e in bs) == poly.degree(Q)

    def test_branches_at_infinity_drops_weights(self):
        assert len(branches_at_infinity(poly.parse("(y-x^2)^2"))) == 1


class TestLogLaplacian:
    def test_atoms_are_curves_with_full_mass(self):
        for s in CORPUS:
            Q = poly.parse(s)
            rho = log_laplacian(Q)
            assert rho.total_mass == poly.degree(Q)
            assert all(isinstance(p, Curve) for p, _ in rho.atoms)

    def test_value_at_root_is_degree(self):
        for s in CORPUS:
            Q = poly.parse(s)
            assert log_value(Q, ROOT) == Ext(poly.degree(Q))

    def test_value_at_own_branch_diverges(self):
        Q = poly.parse("y^2-x^3")
        (b, _), = weighted_branches(Q)
        assert log_value(Q, Curve(b)) == NEG_INF


DIV_GRID = [Monomial(F(-1), t) for t in
            [F(-1, 2), F(0), F(1, 3), F(1, 2), F(2)]] + \
           [Monomial(s, F(-1)) for s in [F(0), F(1, 2), F(3)]]


class TestGreenIdentity:
    """evaluate() works chart by chart; log_value() sums skewnesses of
    meets with the branches.  The two must agree up to sign."""

    def test_monomial_grid(self):
        for s in CORPUS:
            Q = poly.parse(s)
            for v in DIV_GRID:
                assert evaluate(v, Q) == -log_value(Q, v), (s, v)

    def test_divisorial_points(self):
        for s in CORPUS:
            Q = poly.parse(s)
            for v in [Monomial(F(-1), F(1, 3)), Monomial(F(1, 2), F(-1))]:
                d = Divisorial(*v.realize())
                assert evaluate(d, Q) == -log_value(Q, d), (s, v)

    @given(st.fractions(min_value=-3, max_value=3, max_denominator=5))
    @settings(max_examples=40, deadline=None)
    def test_random_monomials(self, t):
        for s in ["y^2-x^3", "x*y-1", "y^2-x"]:
            Q = poly.parse(s)
            vs = [Monomial(F(-1), t)] if t != -1 else []
            if t > -1:
                vs.append(Monomial(t, F(-1)))
            for v in vs:
                assert evaluate(v, Q) == -log_value(Q, v), (s, v)


class TestLogPlusLaplacian:
    def test_atoms_vanish_and_carry_full_mass(self):
        for s in CORPUS:
            Q = poly.parse(s)
            rho = logplus_laplacian(Q)
            assert rho.total_mass == poly.degree(Q)
            for p, m in rho.atoms:
                assert isinstance(p, Divisorial)
                assert m > 0
                assert evaluate(p, Q) == Ext(0), (s, p)
                a = point_skewness(p)
                assert Ext(F(-poly.degree(Q))) < a < Ext(1)

    def test_cusp_single_atom(self):
        rho = logplus_laplacian(poly.parse("y^2-x^3"))
        (p, m), = rho.atoms
        assert m == 3
        assert point_skewness(p) == Ext(0)

    def test_hyperbola_two_atoms(self):
        rho = logplus_laplacian(poly.parse("x*y-1"))
        assert len(rho.atoms) == 2
        for p, m in rho.atoms:
            assert m == 1
            assert point_skewness(p) == Ext(-1)

    def test_line_atom_at_monomial(self):
        rho = logplus_laplacian(poly.parse("y"))
        (p, m), = rho.atoms
        assert m == 1
        assert compare(p, Divisorial(*Monomial(F(-1), F(0)).realize())) \
            == Comparison.EQ

    def test_unmaterialized_atoms_match(self):
        for s in ["y^2-x", "y^3-x*y-1", "x*(x*y-1)", "y*(x*y^2-1)"]:
            Q = poly.parse(s)
            mat = logplus_laplacian(Q, materialize=True)
            lazy = logplus_laplacian(Q, materialize=False)
            assert mat.total_mass == lazy.total_mass
            assert sorted(point_skewness(p) for p, _ in mat.atoms) \
                == sorted(point_skewness(p) for p, _ in lazy.atoms)

    def test_interior_crossing_stays_lazy(self):
        # zero level strictly inside a dual edge: a lazy run keeps the
        # point symbolic, a materialized run pins it down
        lazy = logplus_laplacian(poly.parse("x*(x*y-1)"), materialize=False)
        assert any(isinstance(p, EdgePoint) and point_skewness(p) == Ext(F(-1, 2))
                   for p, _ in lazy.atoms)
        mat = logplus_laplacian(poly.parse("x*(x*y-1)"), materialize=True)
        assert all(isinstance(p, Divisorial) for p, _ in mat.atoms)

    def test_repeated_factor_scales_atom(self):
        single = logplus_laplacian(poly.parse("y-x^2"))
        double = logplus_laplacian(poly.parse("(y-x^2)^2"))
        assert [(point_skewness(p), 2 * m) for p, m in single.atoms] \
            == [(point_skewness(p), m) for p, m in double.atoms]


class TestDivisorialOnSegment:
    def test_skewness_round_trip(self):
        (b, _), = weighted_branches(poly.parse("y^2-x^3"))
        for a in [F(1, 5), F(-1, 2), F(1, 2), F(-7, 3)]:
            d = divisorial_on_segment(b, a)
            assert skewness(d) == Ext(a)
            # lies on the segment from the root to the branch
            assert compare(d, Curve(b)) == Comparison.LT
            assert compare(meet(d, Curve(b)), d) == Comparison.EQ

    def test_green_along_segment(self):
        Q = poly.parse("y^2-x^3")
        (b, _), = weighted_branches(Q)
        for a in [F(1, 2), F(0), F(-3, 4)]:
            d = divisorial_on_segment(b, a)
            assert evaluate(d, Q) == Ext(-3 * a)

    def test_node_skewness_recovers_known_point(self):
        # skewness 0 on the cusp branch segment is the atom of the
        # logplus measure
        (b, _), = weighted_branches(poly.parse("y^2-x^3"))
        d = divisorial_on_segment(b, F(0))
        (p, _), = logplus_laplacian(poly.parse("y^2-x^3")).atoms
        assert compare(d, p) == Comparison.EQ
