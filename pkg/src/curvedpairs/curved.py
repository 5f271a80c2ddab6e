"""Curved DG-algebras, curved Lie ideals and the linear semiregularity maps.

A :class:`CurvedDGAlgebra` is given by structure constants on a homogeneous
basis, a degree +1 derivation ``d`` (one image per basis vector) and a degree 2
curvature ``R``.  Quotient-valued results are returned as canonical normal
forms: the representative of a class that vanishes at every pivot of the
echelon basis of the subspace being divided out.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from .checks import Report
from .exactlin import (Complex, Element, GradedSpace, QuotientMap, SubQuotient,
                       Subspace, cohomology, solve_in_span)

__all__ = ["CurvedDGAlgebra", "CurvedPair", "TraceMap", "check_curved_axioms",
           "commutator_span", "ideal_power_span", "twist", "atiyah_cocycle",
           "sigma1", "tau1", "inner_algebra"]


class CurvedDGAlgebra:
    """Finite-dimensional curved DG-algebra ``(A, d, R)``.

    ``table[i]`` maps ``j`` to a tuple of ``(k, c)`` pairs: ``e_i e_j = sum c e_k``.
    """

    def __init__(self, space: GradedSpace, table, unit: Element,
                 d: Sequence[Element], R: Element):
        self.space = space
        self.table = table
        self.unit = unit
        self.d_images = list(d)
        self.R = R
        if len(self.d_images) != space.dim:
            raise ValueError("need one image of d per basis vector")

    @classmethod
    def from_products(cls, space, products: dict, unit, d, R):
        """Build from a dict ``(i, j) -> Element``."""
        table = [dict() for _ in range(space.dim)]
        for (i, j), v in products.items():
            if v:
                table[i][j] = tuple(v.items())
        return cls(space, table, unit, d, R)

    # -- algebra operations -------------------------------------------------

    def zero(self) -> Element:
        return Element(self.space)

    def one(self) -> Element:
        return self.unit

    def basis_product(self, i: int, j: int) -> Element:
        return Element(self.space, dict(self.table[i].get(j, ())))

    def mul(self, a: Element, b: Element) -> Element:
        out: dict = {}
        table = self.table
        for i, x in a.c.items():
            row = table[i]
            for j, y in b.c.items():
                prod = row.get(j)
                if not prod:
                    continue
                xy = x * y
                for k, z in prod:
                    w = out.get(k, 0) + xy * z
                    if w:
                        out[k] = w
                    else:
                        del out[k]
        return Element._raw(self.space, out)

    def mul_many(self, *factors: Element) -> Element:
        out = factors[0]
        for f in factors[1:]:
            out = self.mul(out, f)
        return out

    def power(self, a: Element, k: int) -> Element:
        out = self.unit
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def bracket(self, a: Element, b: Element) -> Element:
        """Graded commutator, extended bilinearly to inhomogeneous arguments."""
        out = Element(self.space)
        for p, ap in a.homogeneous_parts().items():
            for q, bq in b.homogeneous_parts().items():
                t = self.mul(ap, bq)
                s = self.mul(bq, ap)
                out = out + (t + s * (-1) if (p * q) % 2 == 0 else t + s)
        return out

    def d(self, a: Element) -> Element:
        out: dict = {}
        for i, x in a.c.items():
            for j, y in self.d_images[i].c.items():
                w = out.get(j, 0) + x * y
                if w:
                    out[j] = w
                else:
                    del out[j]
        return Element._raw(self.space, out)

    def basis(self, i: int) -> Element:
        return self.space.basis_vector(i)

    def elements_of_degree(self, n: int) -> list[Element]:
        return [self.basis(i) for i in self.space.indices_of_degree(n)]

    # cached subspaces
    _comm = None

    def commutators(self) -> Subspace:
        if self._comm is None:
            self._comm = commutator_span(self)
        return self._comm

    def trace_quotient(self) -> QuotientMap:
        if getattr(self, "_trq", None) is None:
            self._trq = QuotientMap(self.commutators())
        return self._trq

    def tr(self, a: Element) -> Element:
        """Projection to the cyclic space, as a normal form modulo [A, A]."""
        return self.commutators().reduce(a)

    def __repr__(self):
        return f"CurvedDGAlgebra(dim={self.space.dim})"


def inner_algebra(space: GradedSpace, table, unit: Element, gamma: Element) -> CurvedDGAlgebra:
    """Curved algebra with ``d = [gamma, -]`` and ``R = gamma^2``."""
    if gamma and gamma.degree() != 1:
        raise ValueError("gamma must have degree 1")
    A = CurvedDGAlgebra(space, table, unit, [Element(space)] * space.dim, Element(space))
    d = [A.bracket(gamma, A.basis(i)) for i in range(space.dim)]
    return CurvedDGAlgebra(space, table, unit, d, A.mul(gamma, gamma))


# ---------------------------------------------------------------------------


def check_curved_axioms(A: CurvedDGAlgebra) -> Report:
    """Check associativity, unit, Leibniz, d(R) = 0 and d^2 = [R, -] on basis tuples."""
    rep = Report("check_curved_axioms")
    sp = A.space
    n = sp.dim
    deg = sp.degrees
    basis = [A.basis(i) for i in range(n)]

    def first(name, witness):
        rep.add(name, witness is None, witness)

    w = None
    for i in range(n):
        for j in range(n):
            p = A.basis_product(i, j)
            if p and p.degree() != deg[i] + deg[j]:
                w = {"basis": [sp.labels[i], sp.labels[j]]}
                break
        if w:
            break
    first("product_degree", w)

    w = None
    for i in range(n):
        img = A.d_images[i]
        if img and img.degree() != deg[i] + 1:
            w = {"basis": [sp.labels[i]]}
            break
    first("d_degree", w)
    first("R_degree", None if (not A.R or A.R.degree() == 2) else {"R": repr(A.R)})

    w = None
    prods = [[A.basis_product(i, j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            left = prods[i][j]
            for k in range(n):
                lhs = A.mul(left, basis[k])
                rhs = A.mul(basis[i], prods[j][k])
                if lhs != rhs:
                    w = {"basis": [sp.labels[i], sp.labels[j], sp.labels[k]]}
                    break
            if w:
                break
        if w:
            break
    first("associativity", w)

    w = None
    for i in range(n):
        if A.mul(A.unit, basis[i]) != basis[i] or A.mul(basis[i], A.unit) != basis[i]:
            w = {"basis": [sp.labels[i]]}
            break
    first("unit", w)

    w = None
    for i in range(n):
        for j in range(n):
            lhs = A.d(prods[i][j])
            rhs = A.mul(A.d_images[i], basis[j]) + A.mul(basis[i], A.d_images[j]) * (-1 if deg[i] & 1 else 1)
            if lhs != rhs:
                w = {"basis": [sp.labels[i], sp.labels[j]]}
                break
        if w:
            break
    first("leibniz", w)

    first("dR_zero", None if not A.d(A.R) else {"dR": repr(A.d(A.R))})

    w = None
    for i in range(n):
        if A.d(A.d_images[i]) != A.bracket(A.R, basis[i]):
            w = {"basis": [sp.labels[i]], "lhs": repr(A.d(A.d_images[i])),
                 "rhs": repr(A.bracket(A.R, basis[i]))}
            break
    first("d_squared_is_bracket_R", w)
    return rep


def commutator_span(A: CurvedDGAlgebra) -> Subspace:
    """Linear span [A, A] of graded commutators of basis pairs."""
    n = A.space.dim
    deg = A.space.degrees
    sub = Subspace(A.space)
    for i in range(n):
        for j in range(i, n):
            t = A.basis_product(i, j)
            s = A.basis_product(j, i)
            v = t - s if (deg[i] * deg[j]) % 2 == 0 else t + s
            if v:
                sub._insert(v)
    sub.rows.sort(key=lambda r: r.pivot())
    return sub


def _products(A: CurvedDGAlgebra, left: Sequence[Element], right: Sequence[Element]) -> Subspace:
    sub = Subspace(A.space)
    for a in left:
        for b in right:
            v = A.mul(a, b)
            if v:
                sub._insert(v)
    return sub


class TraceMap:
    """Linear map ``Tr: A -> C`` into a complex ``(C, delta)``."""

    def __init__(self, A: CurvedDGAlgebra, target: GradedSpace,
                 images: Sequence[Element], target_d: Sequence[Element] | None = None):
        self.algebra = A
        self.target = target
        self.images = list(images)
        self.target_d = list(target_d) if target_d is not None else [Element(target)] * target.dim

    def __call__(self, a: Element) -> Element:
        out = Element(self.target)
        for i, x in a.c.items():
            out = out + self.images[i] * x
        return out

    def delta(self, c: Element) -> Element:
        out = Element(self.target)
        for i, x in c.c.items():
            out = out + self.target_d[i] * x
        return out

    def check(self) -> Report:
        A = self.algebra
        rep = Report("trace_map")
        w = None
        for i in range(A.space.dim):
            if self(A.d_images[i]) != self.delta(self.images[i]):
                w = {"basis": [A.space.labels[i]]}
                break
        rep.add("trace_commutes_with_d", w is None, w)
        w = None
        for r in A.commutators().basis:
            if self(r):
                w = {"commutator": repr(r)}
                break
        rep.add("trace_kills_commutators", w is None, w)
        return rep


class CurvedPair:
    """A curved DG-algebra with a curved Lie ideal ``I``.

    The preferred section ``A/I -> A`` sends the quotient coordinate attached to
    a non-pivot index of ``I`` to that standard basis vector.
    """

    def __init__(self, algebra: CurvedDGAlgebra, ideal: Subspace, validate: bool = True):
        self.algebra = algebra
        self.ideal = ideal
        self._powers: dict[int, Subspace] = {1: ideal}
        self._powers_A: dict[int, Subspace] = {}
        self._targets: dict[int, QuotientMap] = {}
        self.quotient = QuotientMap(ideal)
        if validate:
            rep = self.check()
            if not rep.ok:
                f = rep.first_failure()
                raise ValueError(f"not a curved Lie ideal: {f.name} fails at {f.witness}")

    def check(self) -> Report:
        A, I = self.algebra, self.ideal
        rep = Report("curved_ideal")
        rep.add("ideal_graded", I.is_graded())
        w = None
        for r in I.basis:
            for i in range(A.space.dim):
                if not I.contains(A.bracket(A.basis(i), r)):
                    w = {"basis": A.space.labels[i], "ideal_vector": repr(r)}
                    break
            if w:
                break
        rep.add("lie_ideal", w is None, w)
        w = None
        for r in I.basis:
            if not I.contains(A.d(r)):
                w = {"ideal_vector": repr(r)}
                break
        rep.add("d_stable", w is None, w)
        rep.add("R_in_ideal", I.contains(A.R), None if I.contains(A.R) else {"R": repr(A.R)})
        return rep

    def ideal_power(self, k: int) -> Subspace:
        """I^(k): span of all products of k elements of I."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if k not in self._powers:
            prev = self.ideal_power(k - 1)
            self._powers[k] = _products(self.algebra, prev.basis, self.ideal.basis)
        return self._powers[k]

    def ideal_power_span(self, k: int) -> Subspace:
        """I^(k)A: span of products e_1...e_k a with e_i in I and a in A."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if k not in self._powers_A:
            A = self.algebra
            right = [A.basis(i) for i in range(A.space.dim)]
            self._powers_A[k] = _products(A, self.ideal_power(k).basis, right)
        return self._powers_A[k]

    def target_kernel(self, k: int) -> Subspace:
        return self.target(k).kernel

    def target(self, k: int) -> QuotientMap:
        """Quotient map ``A -> A / ([A, A] + I^(k+1) A)``."""
        if k < 0:
            raise ValueError("k must be >= 0")
        if k not in self._targets:
            ker = self.algebra.commutators() + self.ideal_power_span(k + 1)
            self._targets[k] = QuotientMap(ker)
        return self._targets[k]

    def lift(self, x: Element) -> Element:
        """Lift an element of A/I (quotient coordinates) through the stored section."""
        if x.space == self.algebra.space:
            return x
        return self.quotient.section(x)

    def quotient_d(self, k: int, v: Element) -> Element:
        """Differential of the target quotient on a normal form (or any lift)."""
        return self.target_kernel(k).reduce(self.algebra.d(v))

    def __repr__(self):
        return f"CurvedPair(dim A={self.algebra.space.dim}, dim I={self.ideal.dim})"


def ideal_power_span(pair: CurvedPair, k: int) -> Subspace:
    return pair.ideal_power_span(k)


def twist(A: CurvedDGAlgebra, x: Element) -> CurvedDGAlgebra:
    """Twisted algebra with ``d_x = d + [x, -]`` and ``R_x = R + d(x) + x^2``."""
    if x and x.degree() != 1:
        raise ValueError("twisting element must be homogeneous of degree 1")
    d = [A.d_images[i] + A.bracket(x, A.basis(i)) for i in range(A.space.dim)]
    R = A.R + A.d(x) + A.mul(x, x)
    return CurvedDGAlgebra(A.space, A.table, A.unit, d, R)


def atiyah_cocycle(pair: CurvedPair) -> dict:
    """Residue of R in (I + I^(2)A) / I^(2)A and its class in H^2.

    Returns ``cocycle`` (coordinates in the subquotient), ``is_exact``,
    ``h2_dim`` and ``class_rep``: the cocycle reduced modulo coboundaries, in
    canonical echelon form.  When H^2 has dimension > 1 the representative is
    canonical only relative to the chosen basis ordering.
    """
    I2A = pair.ideal_power_span(2)
    sq = SubQuotient(pair.ideal + I2A, I2A)
    A = pair.algebra
    cx = sq.complex(A.d)
    cocycle = sq.coords(A.R)
    H = cohomology(cx)
    h2 = H.get(2, (0, []))[0]
    bnd = Subspace(sq.space, [cx.d[i] for i in sq.space.indices_of_degree(1)])
    class_rep = bnd.reduce(cocycle)
    return {
        "cocycle": cocycle,
        "cocycle_ambient": sq.to_ambient(cocycle),
        "is_cocycle": not cx.apply(cocycle),
        "is_exact": not class_rep,
        "h2_dim": h2,
        "class_rep": class_rep,
        "complex": cx,
        "subquotient": sq,
    }


def sigma1(pair: CurvedPair, k: int, x: Element) -> Element:
    """``(1/k!) tr(R^k x)`` in A / ([A, A] + I^(k+1)A), as a normal form.

    ``x`` is either a lift in A or quotient coordinates of A/I.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    A = pair.algebra
    v = A.mul(A.power(A.R, k), pair.lift(x)) * Fraction(1, factorial(k))
    return pair.target_kernel(k).reduce(v)


def tau1(pair: CurvedPair, k: int, x: Element) -> Element:
    """Same value as :func:`sigma1`, read in (I^(k)A + [A,A]) / ([A,A] + I^(k+1)A).

    Returns coordinates in that subquotient; ``tau1_inclusion`` maps them back.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    sq = _tau_subquotient(pair, k)
    A = pair.algebra
    v = A.mul(A.power(A.R, k), pair.lift(x)) * Fraction(1, factorial(k))
    return sq.coords(v)


def _tau_subquotient(pair: CurvedPair, k: int) -> SubQuotient:
    cache = pair.__dict__.setdefault("_tau_sq", {})
    if k not in cache:
        A = pair.algebra
        num = (pair.ideal_power_span(k) if k >= 1 else Subspace(A.space, [A.basis(i) for i in range(A.space.dim)]))
        cache[k] = SubQuotient(num + A.commutators(), pair.target_kernel(k))
    return cache[k]


def tau1_inclusion(pair: CurvedPair, k: int, q: Element) -> Element:
    return _tau_subquotient(pair, k).to_ambient(q)


def exact_in_cyclic(A: CurvedDGAlgebra, v: Element, degree: int):
    """Solve ``v = d(y) + c`` with ``y`` in A^(degree-1), ``c`` in [A, A].

    Returns ``y`` or None when no solution exists.
    """
    gens = [A.d_images[i] for i in A.space.indices_of_degree(degree - 1)]
    comm = A.commutators().basis
    sol = solve_in_span(gens + comm, v)
    if sol is None:
        return None
    idx = A.space.indices_of_degree(degree - 1)
    return Element(A.space, {idx[j]: sol[j] for j in range(len(idx))})


def quotient_cohomology_map(pair: CurvedPair, k: int, other: CurvedPair, degree: int = 2):
    """Compare the maps induced by sigma1 of two pairs on H^degree(A/I).

    Both pairs must share the underlying graded algebra and ideal.  Returns a
    list of cocycles of A/I on which the two values differ by a non-coboundary.
    """
    A = pair.algebra
    I = pair.ideal
    ker = pair.target_kernel(k)
    # complex A/I with the differential of the first pair (both induce the same one)
    q = pair.quotient
    cx = Complex(q.space, [q.project(A.d(q.section(q.space.basis_vector(j))))
                           for j in range(q.dim)])
    H = cohomology(cx)
    bad = []
    target_deg = degree + 2 * k - 1
    bnd = Subspace(A.space, [ker.reduce(A.d(A.basis(i)))
                             for i in A.space.indices_of_degree(target_deg)] + ker.basis)
    for z in H.get(degree, (0, []))[1]:
        diff = sigma1(pair, k, z) - sigma1(other, k, z)
        if not bnd.contains(diff):
            bad.append(z)
    assert I == other.ideal
    return bad
