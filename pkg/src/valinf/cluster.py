"""Infinitely near points above the line at infinity.

A ``Cluster`` is a rooted forest of blowup centers.  Each root node is a
point of L-infinity in one of two affine charts; each further node is a
point on the exceptional divisor of its parent, tagged free or satellite.
``build_geometry`` produces the boundary intersection matrix together
with b_E, ord_E(x), ord_E(y), ord_E(dx^dy), skewness and thinness, and
cross-checks skewness through two independent formulas.

Chart conventions.  At every node we use local coordinates (u, v) in
which the point is the origin.  Blowing up gives chart 1 with
(u, v) = (u1, u1*v1) and chart 2 with (u, v) = (u2*v2, v2).  The new
exceptional divisor is the u-axis of chart 1 and the v-axis of chart 2.
Free children are parametrized by the v1-coordinate in chart 1; the
chart-2 origin is reachable only as a satellite on the previous u-axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (InvalidCluster, InternalMismatch, RootValuation,
                     ZeroPolynomial)
from .exact import solve_linear
from .series import (InsufficientTruncation, LaurentSeries, PuiseuxSeries,
                     TruncSeries2, compose_series)

LINF = "linf"


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class PointAtInfinity:
    """A point of L-infinity.

    chart "x": u = 1/x, v = y/x + c (the point [1 : -c : 0]).
    chart "y": u = 1/y, v = x/y (the point [0 : 1 : 0]); no c allowed.
    """

    chart: str
    c: Fraction = Fraction(0)

    def __post_init__(self):
        if self.chart not in ("x", "y"):
            raise InvalidCluster(f"unknown chart {self.chart!r}")
        object.__setattr__(self, "c", _q(self.c))
        if self.chart == "y" and self.c != 0:
            raise InvalidCluster("the y-chart point admits no parameter")


@dataclass(frozen=True)
class Free:
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", _q(self.c))


@dataclass(frozen=True)
class SatU:
    """Satellite on the strict transform of the previous u-axis."""


@dataclass(frozen=True)
class SatV:
    """Satellite on the strict transform of the previous v-axis."""


@dataclass(frozen=True)
class Node:
    parent: int                      # -1 for roots
    base: PointAtInfinity | None     # set iff root
    step: Free | SatU | SatV | None  # None iff root


@dataclass(frozen=True)
class PuiseuxBranch:
    """A branch at infinity: y_q = sum a_j x_q^(j/m) at a base point.

    ``minpoly`` optionally records an irreducible polynomial in (x, y)
    vanishing on the branch, as a tuple of ((i, j), coefficient) pairs;
    it lets evaluation certify +infinity for truncated algebraic branches.
    """

    base: PointAtInfinity
    series: PuiseuxSeries
    minpoly: tuple | None = None

    @property
    def multiplicity(self) -> int:
        # local intersection number with L-infinity
        return self.series.m


class Cluster:
    """An immutable forest of infinitely near points."""

    def __init__(self, nodes):
        self.nodes = tuple(nodes)
        self._geometry = None
        self._validate()

    def _validate(self):
        axes = []
        seen_children = {}
        seen_roots = set()
        for i, nd in enumerate(self.nodes):
            if nd.parent == -1:
                if nd.base is None or nd.step is not None:
                    raise InvalidCluster(f"malformed root node {i}")
                if nd.base in seen_roots:
                    raise InvalidCluster(f"duplicate base point at node {i}")
                seen_roots.add(nd.base)
                axes.append((LINF, None))
                continue
            if not (0 <= nd.parent < i):
                raise InvalidCluster(f"parent of node {i} must precede it")
            if nd.base is not None or nd.step is None:
                raise InvalidCluster(f"malformed child node {i}")
            key = (nd.parent, nd.step)
            if key in seen_children:
                raise InvalidCluster(f"node {i} repeats an existing center")
            seen_children[key] = i
            pu, pv = axes[nd.parent]
            st = nd.step
            if isinstance(st, Free):
                if st.c == 0 and pv is not None:
                    raise InvalidCluster(
                        f"node {i}: center lies on a boundary; use a satellite")
                axes.append((nd.parent, None))
            elif isinstance(st, SatV):
                if pv is None:
                    raise InvalidCluster(
                        f"node {i}: no v-axis boundary at the parent")
                axes.append((nd.parent, pv))
            elif isinstance(st, SatU):
                axes.append((pu, nd.parent))
            else:
                raise InvalidCluster(f"unknown step {st!r}")
        self.axes = tuple(axes)

    def __len__(self):
        return len(self.nodes)

    def path(self, i: int):
        """Ancestor chain root..i within the forest."""
        out = []
        while i != -1:
            out.append(i)
            i = self.nodes[i].parent
        return out[::-1]

    def base_of(self, i: int) -> PointAtInfinity:
        return self.nodes[self.path(i)[0]].base

    def key(self, i: int):
        """Canonical identity of the point blown up at node i."""
        p = self.path(i)
        return (self.nodes[p[0]].base, tuple(self.nodes[j].step for j in p[1:]))

    def geometry(self) -> "GeometryTable":
        if self._geometry is None:
            self._geometry = build_geometry(self)
        return self._geometry


def chain_cluster(base: PointAtInfinity, steps) -> Cluster:
    nodes = [Node(parent=-1, base=base, step=None)]
    for k, st in enumerate(steps):
        nodes.append(Node(parent=k, base=None, step=st))
    return Cluster(nodes)


def merge_paths(paths):
    """Union of center paths; returns (Cluster, node index per path end).

    Each path is (base, steps tuple).  Paths sharing a prefix share nodes.
    """
    nodes = []
    index = {}
    ends = []
    for base, steps in paths:
        steps = tuple(steps)
        for k in range(len(steps) + 1):
            key = (base, steps[:k])
            if key in index:
                continue
            parent = -1 if k == 0 else index[(base, steps[:k - 1])]
            if k == 0:
                nodes.append(Node(parent=-1, base=base, step=None))
            else:
                nodes.append(Node(parent=parent, base=None, step=steps[k - 1]))
            index[key] = len(nodes) - 1
        ends.append(index[(base, steps)])
    return Cluster(nodes), ends


# ---------------------------------------------------------------------------
# strict transform propagation
# ---------------------------------------------------------------------------


def base_strict_series(base: PointAtInfinity, P: dict, deg: int) -> TruncSeries2:
    """Local equation u^deg * P at the base point, as an exact polynomial.

    P is {(i, j): coefficient} for x^i y^j; deg its total degree.
    """
    out = {}
    if base.chart == "x":
        # x = 1/u, y = (v - c)/u  =>  u^d x^i y^j = u^(d-i-j) (v - c)^j
        for (i, j), c in P.items():
            for k in range(j + 1):
                from math import comb
                coef = c * comb(j, k) * (-base.c) ** (j - k)
                key = (deg - i - j, k)
                out[key] = out.get(key, Fraction(0)) + coef
    else:
        # x = v/u, y = 1/u  =>  u^d x^i y^j = u^(d-i-j) v^i
        for (i, j), c in P.items():
            key = (deg - i - j, i)
            out[key] = out.get(key, Fraction(0)) + c
    return TruncSeries2(out)


_U = TruncSeries2.var_u()
_V = TruncSeries2.var_v()


def step_transform(F: TruncSeries2, step, mult: int) -> TruncSeries2:
    """Strict transform of F into the coordinates of a child node."""
    if isinstance(step, Free):
        sub_v = TruncSeries2({(1, 1): Fraction(1), (1, 0): step.c})
        return compose_series(F, _U, sub_v).divide_u(mult)
    if isinstance(step, SatV):
        sub_v = TruncSeries2({(1, 1): Fraction(1)})
        return compose_series(F, _U, sub_v).divide_u(mult)
    if isinstance(step, SatU):
        sub_u = TruncSeries2({(1, 1): Fraction(1)})
        return compose_series(F, sub_u, _V).divide_v(mult)
    raise InvalidCluster(f"unknown step {step!r}")


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------


class GeometryTable:
    """Boundary intersection data for a cluster.

    Components are named by LINF and node indices.  The dual graph of the
    boundary is a tree rooted at LINF.
    """

    def __init__(self, cluster, comps, inter, ord_x, ord_y, ord_w,
                 b, alpha, thin, parent, depth):
        self.cluster = cluster
        self.comps = comps
        self.inter = inter
        self.ord_x = ord_x
        self.ord_y = ord_y
        self.ord_w = ord_w
        self.b = b
        self.alpha = alpha
        self.thin = thin
        self.parent = parent
        self.depth = depth
        self._minv = None

    def _index(self, comp):
        return self.comps.index(comp)

    def minv(self):
        """Inverse of the intersection matrix, computed once."""
        if self._minv is None:
            n = len(self.comps)
            rows = [[Fraction(self.inter.get((a, b2), 0))
                     for b2 in self.comps] for a in self.comps]
            cols = []
            for k in range(n):
                e = [Fraction(0)] * n
                e[k] = Fraction(1)
                res = solve_linear(rows, e)
                if res.solution is None or res.kernel:
                    raise InternalMismatch("singular intersection matrix")
                cols.append(res.solution)
            self._minv = [[cols[j][i] for j in range(n)] for i in range(n)]
        return self._minv

    def check_dual(self, i, j) -> Fraction:
        """(E_i-dual . E_j-dual), the (i,j) entry of the inverse matrix."""
        m = self.minv()
        return m[self._index(i)][self._index(j)]

    def lca(self, a, b):
        """Lowest common ancestor in the dual tree (root LINF)."""
        da, db = self.depth[a], self.depth[b]
        while da > db:
            a = self.parent[a]
            da -= 1
        while db > da:
            b = self.parent[b]
            db -= 1
        while a != b:
            a = self.parent[a]
            b = self.parent[b]
        return a

    def dual_path(self, comp):
        """Path LINF..comp in the dual tree."""
        out = []
        while comp is not None:
            out.append(comp)
            comp = self.parent[comp]
        return out[::-1]


def build_geometry(cl: Cluster) -> GeometryTable:
    n = len(cl)
    comps = [LINF] + list(range(n))
    inter = {(LINF, LINF): 1}
    ord_x = {LINF: -1}
    ord_y = {LINF: -1}
    ord_w = {LINF: -3}

    # strict series of x and y at every node, by forest DFS in index order
    fx = [None] * n
    fy = [None] * n
    for i, nd in enumerate(cl.nodes):
        if nd.parent == -1:
            if nd.base.chart == "x":
                fx[i] = TruncSeries2.const(1)
                fy[i] = TruncSeries2({(0, 1): Fraction(1), (0, 0): -nd.base.c})
            else:
                fx[i] = TruncSeries2.var_v()
                fy[i] = TruncSeries2.const(1)
        else:
            p = nd.parent
            fx[i] = step_transform(fx[p], nd.step, fx[p].mult())
            fy[i] = step_transform(fy[p], nd.step, fy[p].mult())

    for i, nd in enumerate(cl.nodes):
        ua, va = cl.axes[i]
        through = [ua] + ([va] if va is not None else [])
        inter[(i, i)] = -1
        for bcomp in through:
            inter[(bcomp, bcomp)] -= 1
            inter[(bcomp, i)] = inter[(i, bcomp)] = 1
        if len(through) == 2:
            a, b2 = through
            if inter.get((a, b2), 0) != 1:
                raise InvalidCluster(
                    f"node {i}: satellite boundaries do not meet")
            inter[(a, b2)] = inter[(b2, a)] = 0
        ord_x[i] = sum(ord_x[bc] for bc in through) + fx[i].mult()
        ord_y[i] = sum(ord_y[bc] for bc in through) + fy[i].mult()
        ord_w[i] = sum(ord_w[bc] for bc in through) + 1

    b = {LINF: 1}
    for i in range(n):
        bi = -min(ord_x[i], ord_y[i])
        if bi <= 0:
            raise InternalMismatch(f"non-positive b at node {i}")
        b[i] = bi

    # dual tree from adjacency
    adj = {c: [] for c in comps}
    for (a, b2), v in inter.items():
        if a != b2 and v != 0:
            if v != 1:
                raise InternalMismatch("boundary is not simple normal crossing")
            adj[a].append(b2)
    parent = {LINF: None}
    depth = {LINF: 0}
    queue = [LINF]
    seen = {LINF}
    while queue:
        c = queue.pop(0)
        for nb in adj[c]:
            if nb in seen:
                continue
            seen.add(nb)
            parent[nb] = c
            depth[nb] = depth[c] + 1
            queue.append(nb)
    if len(seen) != len(comps):
        raise InternalMismatch("dual graph is not connected")

    # skewness by the edge recursion along the dual tree
    alpha = {LINF: Fraction(1)}
    order = sorted(comps[1:], key=lambda c: depth[c])
    for c in order:
        p = parent[c]
        alpha[c] = alpha[p] - Fraction(1, b[p] * b[c])

    thin = {LINF: Fraction(-2)}
    for i in range(n):
        thin[i] = Fraction(1 + ord_w[i], b[i])

    # the identity alpha = (dual . dual) / b^2 is not re-verified here;
    # inverting the intersection matrix costs O(n^4) and the randomized
    # consistency checks cover it
    return GeometryTable(cl, comps, inter, ord_x, ord_y, ord_w,
                         b, alpha, thin, parent, depth)


# ---------------------------------------------------------------------------
# evaluation of divisorial valuations
# ---------------------------------------------------------------------------


def poly_degree(P: dict) -> int:
    return max(i + j for (i, j), c in P.items() if c != 0)


def ord_along_path(cl: Cluster, node: int, P: dict) -> dict:
    """ord_E(P) for every divisor E on the center path of ``node``.

    Independent of build_geometry's x/y bookkeeping: propagates the strict
    transform of P itself through the charts.
    """
    if not P or all(c == 0 for c in P.values()):
        raise ZeroPolynomial("cannot evaluate on the zero polynomial")
    P = {k: _q(c) for k, c in P.items() if c != 0}
    d = poly_degree(P)
    path = cl.path(node)
    base = cl.nodes[path[0]].base
    F = base_strict_series(base, P, d)
    ords = {LINF: -d}
    for i in path:
        nd = cl.nodes[i]
        if nd.parent != -1:
            F = step_transform(F, nd.step, F.mult())
        ua, va = cl.axes[i]
        through = [ua] + ([va] if va is not None else [])
        # axes of a path node are themselves on the path (or LINF)
        ords[i] = sum(ords[bc] for bc in through) + F.mult()
    return ords


def eval_divisorial(cl: Cluster, node: int, P: dict) -> Fraction:
    """v_E(P) = ord_E(P)/b_E for the divisor of ``node``.

    Chart propagation of polynomials is exact, so no adaptive precision is
    needed; the answer is an exact rational.
    """
    ords = ord_along_path(cl, node, P)
    return Fraction(ords[node], cl.geometry().b[node])


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def weight_chain_steps(a: int, b: int):
    """Center steps of the toric chain for coprime positive weights (a, b).

    (a, b) are the orders of the target divisor on the local coordinates
    (u, v) of the base point.
    """
    steps = []
    v_present = False
    while a != b:
        if a > b:
            steps.append(SatU())
            a -= b
            v_present = True
        else:
            steps.append(SatV() if v_present else Free(Fraction(0)))
            b -= a
    return steps


def monomial_to_node(s, t):
    """Cluster realization of the monomial valuation v_{s,t}.

    Requires min(s, t) = -1.  Returns (cluster, node index).
    """
    s, t = _q(s), _q(t)
    if min(s, t) != -1:
        raise InvalidCluster("monomial weights must satisfy min(s,t) = -1")
    if s == -1 and t == -1:
        raise RootValuation("v_{-1,-1} is -deg")
    if s == -1:
        base = PointAtInfinity("x", Fraction(0))
        w = t + 1
    else:
        base = PointAtInfinity("y")
        w = s + 1
    # local weights (1, w); scale to coprime integers
    a, b = w.denominator, w.numerator
    g = gcd(a, b)
    a, b = a // g, b // g
    steps = weight_chain_steps(a, b)
    cl = chain_cluster(base, steps)
    return cl, len(cl) - 1


def _center_step(state, work):
    """One center of a branch: (step, next state)."""
    U, V, v_present = state
    if V.is_zero_known():
        if V.prec is not None:
            raise InsufficientTruncation(
                "branch series vanishes to its stored order")
        if v_present:
            raise InvalidCluster("branch coincides with a boundary curve")
        return Free(Fraction(0)), state
    a = U.order()
    b = V.order()
    if b > a:
        step = SatV() if v_present else Free(Fraction(0))
        return step, (U, V * U.inverse(work), v_present)
    if a > b:
        return SatU(), (U * V.inverse(work), V, True)
    c = V.leading() / U.leading()
    return Free(c), (U, V * U.inverse(work) - LaurentSeries.monomial(0, c),
                     False)


def _branch_state(series: PuiseuxSeries):
    return (LaurentSeries.monomial(series.m), series.tau_series(), False)


def _branch_steps_once(series: PuiseuxSeries, depth: int, work: int):
    state = _branch_state(series)
    steps = []
    for _ in range(depth - 1):
        step, state = _center_step(state, work)
        steps.append(step)
    return steps


def branch_steps(base: PointAtInfinity, series: PuiseuxSeries, depth: int):
    """Steps of the first ``depth`` centers of a branch (depth >= 1).

    For exact (terminating) series the working precision is raised until
    every center is certified; for truncated series an uncertifiable step
    raises InsufficientTruncation.
    """
    top = max((j for j, _ in series.coeffs), default=1)
    work = 4 * (series.m * (depth + 2) + top + 8)
    if not series.exact:
        return _branch_steps_once(series, depth, work)
    while True:
        try:
            return _branch_steps_once(series, depth, work)
        except InsufficientTruncation:
            if work > 1 << 16:
                raise
            work *= 2


def diverging_steps(s1: PuiseuxSeries, s2: PuiseuxSeries):
    """Step prefixes of two branches that pin down their separation.

    Walks both expansions in lockstep to the first differing center,
    then extends each side through its first free center from there on.
    A satellite center after the divergence still slides the branch
    along a dual edge of the shared cluster; the first free center
    fixes the limb, so the dual position of the returned path ends is
    final and no work is spent deeper.
    """
    work = 256
    while True:
        st1, st2 = _branch_state(s1), _branch_state(s2)
        steps1, steps2 = [], []
        try:
            for _ in range(work // 4):
                a, st1 = _center_step(st1, work)
                b, st2 = _center_step(st2, work)
                steps1.append(a)
                steps2.append(b)
                if a != b:
                    break
            else:
                raise InsufficientTruncation("branches agree beyond the "
                                             "exploration depth")
            for steps, st in ((steps1, st1), (steps2, st2)):
                while not isinstance(steps[-1], Free):
                    step, st = _center_step(st, work)
                    steps.append(step)
                    if len(steps) > work // 2:
                        raise InsufficientTruncation(
                            "satellite cascade beyond the exploration depth")
            return steps1, steps2
        except InsufficientTruncation:
            if work > 1 << 17:
                raise
            work *= 2


def branch_to_nodes(base: PointAtInfinity, series: PuiseuxSeries, depth: int):
    """Cluster through the first ``depth`` centers of a branch.

    Returns (cluster, node path); depth 0 gives (empty cluster, []).
    """
    if depth <= 0:
        return Cluster([]), []
    steps = branch_steps(base, series, depth)
    cl = chain_cluster(base, steps)
    return cl, list(range(depth))
