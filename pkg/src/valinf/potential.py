"""Potential theory on finite subtrees of the valuation tree.

Points of the tree are either constructed valuations or interior points
of a segment [root, v], given by the anchor v and a skewness value.
Functions are represented by finitely supported signed measures; their
values are sums of Green kernels alpha(v ^ w).  The Dirichlet pairing
is computed both from the measure (double sum) and by integration by
parts along edges, and the two must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (IndeterminateForm, InternalMismatch, PreconditionViolated,
                     SkewnessTooHigh)
from .exact import Ext, NEG_INF, ext_sum
from .valuations import ROOT, Root, Valuation, equal, meet, skewness


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# tree points
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EdgePoint:
    """Interior point of the segment [root, below] with the given skewness.

    Never needs a cluster realization: only its position and skewness
    enter the formulas.
    """

    below: Valuation
    alpha: Fraction


def point_on_segment(v: Valuation, alpha) -> "TreePoint":
    alpha = _q(alpha)
    if alpha == 1:
        return ROOT
    a_v = skewness(v)
    if Ext(alpha) == a_v:
        return v
    if not (a_v < Ext(alpha) < Ext(1)):
        raise ValueError("skewness outside the segment [root, v]")
    return EdgePoint(below=v, alpha=alpha)


TreePoint = object  # Valuation | EdgePoint


def _split(p) -> tuple:
    """(anchor valuation, skewness along [root, anchor]) of a tree point."""
    if isinstance(p, EdgePoint):
        return p.below, Ext(p.alpha)
    return p, skewness(p)


def point_skewness(p) -> Ext:
    return _split(p)[1]


def point_meet(p, q):
    """Meet of two tree points; p, q, or a valuation on the trunk."""
    v, a = _split(p)
    w, b = _split(q)
    if isinstance(v, Root):
        return p
    if isinstance(w, Root):
        return q
    g = skewness(meet(v, w))
    if a >= g and b >= g:
        # both on the common trunk [root, v^w]; the shallower is the meet
        return p if a >= b else q
    if a >= g:
        return p
    if b >= g:
        return q
    return meet(v, w)


def point_leq(p, q) -> bool:
    v, a = _split(p)
    w, b = _split(q)
    if isinstance(v, Root):
        return True
    if isinstance(w, Root):
        return False
    g = skewness(meet(v, w))
    return a >= g and a >= b


def point_equal(p, q) -> bool:
    if p is q:
        return True
    v, a = _split(p)
    w, b = _split(q)
    if a != b:
        return False
    if isinstance(v, Root) or isinstance(w, Root):
        return isinstance(v, Root) and isinstance(w, Root)
    if a == NEG_INF:
        return equal(v, w)
    return a >= skewness(meet(v, w))


def shift_up(p, eps: Fraction):
    """The point on [root, p] lying eps above p in skewness."""
    v, a = _split(p)
    if a == NEG_INF:
        raise ValueError("no skewness coordinate at an endpoint")
    return point_on_segment(v, a.q + eps)


def point_green(p, q) -> Ext:
    return point_skewness(point_meet(p, q))


# ---------------------------------------------------------------------------
# finite trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteTree:
    """Rooted tree with strictly decreasing skewness along each path.

    Vertex 0 is the root (skewness 1).  points[i] is the tree point
    realizing vertex i, or None for trees built abstractly in tests.
    Closure under meets holds by construction: the meet of two vertices
    is their lowest common ancestor, itself a vertex.
    """

    parent: tuple
    alpha: tuple
    points: tuple

    def __post_init__(self):
        n = len(self.parent)
        if n == 0 or self.parent[0] is not None or self.alpha[0] != Ext(1):
            raise ValueError("vertex 0 must be the root with skewness 1")
        for i in range(1, n):
            p = self.parent[i]
            if p is None or not 0 <= p < n or p == i:
                raise ValueError("every non-root vertex needs a parent")
            # strict decrease rules out parent cycles as well
            if not self.alpha[i] < self.alpha[p]:
                raise ValueError("skewness must decrease from the root")

    def __len__(self):
        return len(self.parent)

    def children(self, i):
        return [j for j in range(len(self)) if self.parent[j] == i]

    def root_path(self, i):
        path = []
        while i is not None:
            path.append(i)
            i = self.parent[i]
        path.reverse()
        return path

    def lca(self, i, j):
        pi, pj = self.root_path(i), self.root_path(j)
        k = 0
        while k < min(len(pi), len(pj)) and pi[k] == pj[k]:
            k += 1
        return pi[k - 1]

    def green(self, i, j) -> Ext:
        """alpha of the meet of vertices i and j (allows -inf leaves)."""
        return self.alpha[i] if i == j else self.alpha[self.lca(i, j)]

    def find(self, p):
        for i, x in enumerate(self.points):
            if x is not None and point_equal(x, p):
                return i
        return None


def build_tree(points) -> FiniteTree:
    """Convex hull of {root} and the given tree points."""
    verts = [ROOT]
    parent = [None]

    def locate(p):
        for i, x in enumerate(verts):
            if point_equal(x, p):
                return i
        return None

    def splice(leaf, m):
        # insert m, known to lie on [root, verts[leaf]], along that path
        am = point_skewness(m)
        path = [leaf]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        for k, i in enumerate(path):
            if point_skewness(verts[i]) == am:
                return i
            if point_skewness(verts[i]) < am:
                verts.append(m)
                parent.append(path[k - 1])
                parent[i] = len(verts) - 1
                return len(verts) - 1
        raise InternalMismatch("splice point below its own anchor path")

    def insert(p):
        i = locate(p)
        if i is not None:
            return i
        best, leaf = ROOT, 0
        for i, x in enumerate(verts):
            m = point_meet(p, x)
            if point_skewness(m) < point_skewness(best):
                best, leaf = m, i
        if point_equal(best, p):
            return splice(leaf, p)
        anchor = locate(best)
        if anchor is None:
            anchor = splice(leaf, best)
        verts.append(p)
        parent.append(anchor)
        return len(verts) - 1

    for p in points:
        insert(p)
    return FiniteTree(parent=tuple(parent),
                      alpha=tuple(point_skewness(x) for x in verts),
                      points=tuple(verts))


def retract(p, tree: FiniteTree):
    """Nearest point of the tree on the segment [root, p]."""
    best = ROOT
    for x in tree.points:
        if x is None:
            raise ValueError("retraction needs realized tree points")
        m = point_meet(p, x)
        if point_skewness(m) < point_skewness(best):
            best = m
    i = tree.find(best)
    if i is None:
        raise InternalMismatch("retraction landed outside the tree")
    return tree.points[i]


# ---------------------------------------------------------------------------
# measures and Green-function values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported signed measure; atoms are (tree point, mass)."""

    atoms: tuple

    @property
    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.atoms), Fraction(0))

    def is_positive(self) -> bool:
        return all(m > 0 for _, m in self.atoms)

    def scale(self, c) -> "DiscreteMeasure":
        c = _q(c)
        return measure([(p, c * m) for p, m in self.atoms])

    def __add__(self, other) -> "DiscreteMeasure":
        return measure(list(self.atoms) + list(other.atoms))


def measure(pairs) -> DiscreteMeasure:
    atoms = []
    for p, m in pairs:
        m = _q(m)
        for k, (q, mq) in enumerate(atoms):
            if point_equal(p, q):
                atoms[k] = (q, mq + m)
                break
        else:
            atoms.append((p, m))
    return DiscreteMeasure(tuple((p, m) for p, m in atoms if m != 0))


def dirac(p, mass=1) -> DiscreteMeasure:
    return measure([(p, mass)])


def value(rho: DiscreteMeasure, w) -> Ext:
    """Sum of mass * alpha(atom ^ w); the function represented by rho."""
    return ext_sum(Ext(m) * point_green(p, w) for p, m in rho.atoms)


def dirichlet(rho: DiscreteMeasure, sigma: DiscreteMeasure) -> Ext:
    terms = [Ext(mp) * Ext(mq) * point_green(p, q)
             for p, mp in rho.atoms for q, mq in sigma.atoms]
    if all(t.kind == 0 for t in terms):
        return ext_sum(terms)
    if rho.is_positive() and sigma.is_positive():
        # endpoint self-pairings of a positive measure: -inf is allowed
        return NEG_INF
    raise IndeterminateForm(
        "signed pairing with an endpoint atom is not square-integrable")


def retract_measure(rho: DiscreteMeasure, tree: FiniteTree) -> DiscreteMeasure:
    return measure([(retract(p, tree), m) for p, m in rho.atoms])


# ---------------------------------------------------------------------------
# piecewise-affine functions on a finite tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PLValues:
    """One value per tree vertex, interpreted affinely in skewness."""

    tree: FiniteTree
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.tree):
            raise ValueError("one value per vertex required")


def tree_measure_values(tree: FiniteTree, masses: dict) -> PLValues:
    """Values at all vertices of the function with the given vertex masses."""
    vals = []
    for i in range(len(tree)):
        vals.append(ext_sum(Ext(m) * tree.green(i, j)
                            for j, m in masses.items()))
    return PLValues(tree, tuple(vals))


def tree_dirichlet(tree: FiniteTree, m1: dict, m2: dict) -> Ext:
    terms = [Ext(a) * Ext(b) * tree.green(i, j)
             for i, a in m1.items() for j, b in m2.items()]
    if all(t.kind == 0 for t in terms):
        return ext_sum(terms)
    if all(a > 0 for a in m1.values()) and all(b > 0 for b in m2.values()):
        return NEG_INF
    raise IndeterminateForm(
        "signed pairing with an endpoint atom is not square-integrable")


def laplacian_pl(f: PLValues) -> dict:
    """Vertex masses of the Laplacian of a piecewise-affine function.

    The atom at a vertex is the sum of directional derivatives (in the
    parameter t = -skewness) toward its neighbors, plus the value itself
    at the root.  Inverse of tree_measure_values.
    """
    tree, vals = f.tree, f.values
    for v in vals:
        if not isinstance(v, Ext) or v.kind != 0:
            raise ValueError("finite values required at every vertex")
    n = len(tree)
    out = {}
    for i in range(n):
        acc = Fraction(0)
        if i == 0:
            acc += vals[0].q
        else:
            p = tree.parent[i]
            length = (tree.alpha[p] - tree.alpha[i]).q
            acc += (vals[p] - vals[i]).q / length
        for c in tree.children(i):
            length = (tree.alpha[i] - tree.alpha[c]).q
            acc += (vals[c] - vals[i]).q / length
        if acc != 0:
            out[i] = acc
    return out


def is_subharmonic(f: PLValues) -> bool:
    return all(m >= 0 for m in laplacian_pl(f).values())


def dirichlet_by_parts(f: PLValues, g: PLValues) -> Ext:
    """f(root)g(root) minus the integral of the product of edge slopes."""
    if f.tree is not g.tree:
        raise ValueError("both functions must live on the same tree")
    tree = f.tree
    acc = f.values[0] * g.values[0]
    for i in range(1, len(tree)):
        p = tree.parent[i]
        length = (tree.alpha[p] - tree.alpha[i]).q
        sf = (f.values[i] - f.values[p]).q / length
        sg = (g.values[i] - g.values[p]).q / length
        acc = acc - Ext(sf * sg * length)
    return acc


def tree_retract_vertex(tree: FiniteTree, subtree, i) -> int:
    """Retraction of vertex i onto the hull of the given vertices.

    The hull contains every vertex on a path between members, so the
    result may be a vertex outside the given set.
    """
    best = 0
    for j in subtree:
        m = tree.lca(i, j)
        if tree.alpha[m] < tree.alpha[best]:
            best = m
    return best


def tree_retract_masses(tree: FiniteTree, subtree, masses: dict) -> dict:
    out = {}
    for i, m in masses.items():
        j = tree_retract_vertex(tree, subtree, i)
        out[j] = out.get(j, Fraction(0)) + m
    return {i: m for i, m in out.items() if m != 0}


# ---------------------------------------------------------------------------
# certificate constructions
# ---------------------------------------------------------------------------


def perturb_certificate(phi: DiscreteMeasure, S) -> DiscreteMeasure:
    """Positive measure vanishing above S with positive self-pairing.

    phi must be positive with zero self-pairing and vanish at its own
    atoms; S must consist of points lying above atoms of phi, without
    exhausting them.  Either retracts phi away from an unconstrained
    atom, or splits the mass of a constrained atom symmetrically around
    it, one lower point per direction toward S.
    """
    if not phi.is_positive() or not phi.atoms:
        raise PreconditionViolated("a nonzero positive measure is required")
    if dirichlet(phi, phi) != Ext(0):
        raise PreconditionViolated("self-pairing must vanish")
    atoms = [p for p, _ in phi.atoms]
    for p in atoms:
        if value(phi, p) != Ext(0):
            raise PreconditionViolated("the function must vanish at its atoms")
    for i, p in enumerate(atoms):
        for q in atoms[i + 1:]:
            if point_leq(p, q) or point_leq(q, p):
                raise PreconditionViolated("atoms must be incomparable")
    for w in S:
        if not any(point_leq(p, w) for p in atoms):
            raise PreconditionViolated("constraints must lie above the atoms")

    # unconstrained atom: drop it by retracting onto the hull of the rest
    for i, p in enumerate(atoms):
        if not any(point_leq(p, w) for w in S):
            rest = atoms[:i] + atoms[i + 1:]
            psi = retract_measure(phi, build_tree(rest))
            _check_certificate(psi)
            return psi

    # every atom constrained: pick one not itself in S and split its mass
    for k, (p1, r1) in enumerate(phi.atoms):
        if not any(point_equal(p1, w) for w in S):
            break
    else:
        raise PreconditionViolated("some atom must stay out of the constraints")
    a1 = point_skewness(p1)
    above = [w for w in S if point_leq(p1, w)]
    # directions below p1: group the constraints by their common segment
    classes = []
    for w in above:
        for cls in classes:
            if point_skewness(point_meet(cls[0], w)) < a1:
                cls.append(w)
                break
        else:
            classes.append([w])
    gaps = [Ext(1) - a1]
    for q, _ in phi.atoms:
        if q is not p1:
            gaps.append(point_green(p1, q) - a1)
    for cls in classes:
        m = cls[0]
        for w in cls[1:]:
            m = point_meet(m, w)
        gaps.append(a1 - point_skewness(m))
    eps = min(g.q for g in gaps if g.kind == 0) / 2
    k = len(classes)
    share = Fraction(r1, k + 1)
    pairs = [(q, m) for q, m in phi.atoms if q is not p1]
    pairs.append((shift_up(p1, eps), share))
    for cls in classes:
        anchor, _ = _split(cls[0])
        pairs.append((point_on_segment(anchor, a1.q - eps), share))
    psi = measure(pairs)
    _check_certificate(psi)
    for w in S:
        if value(psi, w) != Ext(0):
            raise InternalMismatch("perturbed measure misses a constraint")
    return psi


def _check_certificate(psi: DiscreteMeasure):
    if not (dirichlet(psi, psi) > Ext(0)):
        raise InternalMismatch("certificate lost its positive self-pairing")


def extend_certificate(phi: DiscreteMeasure, S, extra,
                       l=None) -> DiscreteMeasure:
    """Extend a certificate to vanish above finitely many extra points.

    phi is rescaled to total mass 1.  Each extra point of low enough
    skewness contributes a dipole between itself and the point of
    skewness M_{l-1} on its root segment; the self-pairing drops by at
    most half.  Points whose skewness exceeds the admissible bound M_l
    are rejected.
    """
    mass = phi.total_mass
    if mass <= 0:
        raise PreconditionViolated("positive total mass required")
    phi = phi.scale(Fraction(1) / mass)
    r = dirichlet(phi, phi)
    if not (r > Ext(0)):
        raise PreconditionViolated("positive self-pairing required")
    for v in S:
        if value(phi, v) != Ext(0):
            raise PreconditionViolated("phi must vanish above the base set")
    extra = [v for v in extra
             if not any(point_leq(s, v) for s in S)]
    if l is None:
        l = len(extra)
    if l < len(extra):
        raise PreconditionViolated("the budget must cover the extra points")

    finite_alphas = [point_skewness(s) for s in S]
    m0 = min([Ext(1)] + [a for a in finite_alphas if a.kind == 0])
    bounds = [m0.q]
    for k in range(1, l + 1):
        bounds.append(bounds[k - 1] - Fraction(2 * k) / r.q)
    for v in extra:
        a = point_skewness(v)
        if a.kind == 0 and a.q > bounds[l]:
            raise SkewnessTooHigh(
                f"skewness {a.q} exceeds the admissible bound {bounds[l]}")

    def go(vs, k):
        if not vs:
            return phi
        if len(vs) <= k - 1:
            return go(vs, k - 1)
        cutoff = Ext(bounds[k - 1])
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                if point_green(vs[i], vs[j]) <= cutoff:
                    rest = [v for t, v in enumerate(vs) if t not in (i, j)]
                    rest.append(point_meet(vs[i], vs[j]))
                    return go(rest, k - 1)
        pairs = list(phi.atoms)
        for v in vs:
            a = point_skewness(v)
            if a.kind != 0:
                continue
            x = value(phi, v).q / (bounds[k - 1] - a.q)
            if x == 0:
                continue
            pairs.append((v, x))
            pairs.append((point_on_segment(_split(v)[0], bounds[k - 1]), -x))
        return measure(pairs)

    return go(list(extra), l)
