"""DG-Lie algebras, the bar coderivations Q0/Q1 and the convolution algebra C(L, A).

An element of C(L, A) is a homogeneous map ``S(L[1]) -> A`` truncated at a
maximal weight.  It is stored by its values on sorted tuples of L-basis
indices (multisets, with odd shifted degree entries appearing at most once);
values on unsorted tuples follow from the Koszul sign.  ``degree`` is the
internal degree of the map, so the value on a tuple has degree
``degree + sum(|x_s| - 1)``.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb, factorial
from typing import Sequence

from .checks import Report
from .curved import CurvedDGAlgebra, CurvedPair
from .exactlin import Element, GradedSpace, koszul_sign, normalize_tuple

__all__ = ["DGLieAlgebra", "ConvAlgebra", "ConvElement", "bar_Q", "verify_conv_axioms",
           "w_form_conv", "theta_project", "decalage_sign", "check_decalage", "check_ev"]


def _sgn(odd) -> int:
    return -1 if odd & 1 else 1


class DGLieAlgebra:
    """Finite DG-Lie algebra ``(L, dbar, [-,-])`` given on a homogeneous basis.

    ``bracket`` maps ``(i, j)`` to an Element; missing pairs are zero.  Only
    the pairs that are given are used: no antisymmetry is imposed, so a
    corrupted table stays corrupted (and ``check`` reports it).
    """

    def __init__(self, space: GradedSpace, bracket: dict, dbar: Sequence[Element]):
        self.space = space
        self.table = {k: v for k, v in bracket.items() if v}
        self.dbar_images = list(dbar)
        if len(self.dbar_images) != space.dim:
            raise ValueError("need one image of dbar per basis vector")

    @property
    def dim(self):
        return self.space.dim

    def bracket_basis(self, i: int, j: int) -> Element:
        return self.table.get((i, j), Element(self.space))

    def bracket(self, x: Element, y: Element) -> Element:
        out: dict = {}
        for i, a in x.c.items():
            for j, b in y.c.items():
                v = self.table.get((i, j))
                if v is None:
                    continue
                for k, c in v.c.items():
                    w = out.get(k, 0) + a * b * c
                    if w:
                        out[k] = w
                    else:
                        del out[k]
        return Element._raw(self.space, out)

    def dbar(self, x: Element) -> Element:
        out = Element(self.space)
        for i, a in x.c.items():
            out = out + self.dbar_images[i] * a
        return out

    def is_mc(self, x: Element) -> bool:
        return not (self.dbar(x) + self.bracket(x, x) * Fraction(1, 2))

    def mc_defect(self, x: Element) -> Element:
        return self.dbar(x) + self.bracket(x, x) * Fraction(1, 2)

    def check(self) -> Report:
        rep = Report("dg_lie")
        sp, n, deg = self.space, self.space.dim, self.space.degrees
        e = [sp.basis_vector(i) for i in range(n)]
        lab = sp.labels

        w = None
        for (i, j), v in self.table.items():
            if v.degree() != deg[i] + deg[j]:
                w = {"basis": [lab[i], lab[j]]}
                break
        rep.add("bracket_degree", w is None, w)

        w = None
        for i in range(n):
            for j in range(n):
                lhs = self.bracket_basis(i, j)
                rhs = self.bracket_basis(j, i) * (-_sgn(deg[i] * deg[j]))
                if lhs != rhs:
                    w = {"basis": [lab[i], lab[j]]}
                    break
            if w:
                break
        rep.add("antisymmetry", w is None, w)

        w = None
        for i in range(n):
            for j in range(n):
                bij = self.bracket_basis(i, j)
                for k in range(n):
                    # [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
                    lhs = self.bracket(e[i], self.bracket_basis(j, k))
                    rhs = (self.bracket(bij, e[k])
                           + self.bracket(e[j], self.bracket_basis(i, k)) * _sgn(deg[i] * deg[j]))
                    if lhs != rhs:
                        w = {"basis": [lab[i], lab[j], lab[k]]}
                        break
                if w:
                    break
            if w:
                break
        rep.add("jacobi", w is None, w)

        w = None
        for i in range(n):
            img = self.dbar_images[i]
            if img and img.degree() != deg[i] + 1:
                w = {"basis": [lab[i]]}
                break
        rep.add("dbar_degree", w is None, w)

        w = None
        for i in range(n):
            if self.dbar(self.dbar_images[i]):
                w = {"basis": [lab[i]]}
                break
        rep.add("dbar_square_zero", w is None, w)

        w = None
        for i in range(n):
            for j in range(n):
                lhs = self.dbar(self.bracket_basis(i, j))
                rhs = (self.bracket(self.dbar_images[i], e[j])
                       + self.bracket(e[i], self.dbar_images[j]) * _sgn(deg[i]))
                if lhs != rhs:
                    w = {"basis": [lab[i], lab[j]]}
                    break
            if w:
                break
        rep.add("dbar_leibniz", w is None, w)
        return rep

    def __repr__(self):
        return f"DGLieAlgebra(dim={self.dim})"


# ---------------------------------------------------------------------------
# bar construction


def bar_Q(L: DGLieAlgebra, word: Sequence[int], which: str) -> dict:
    """Apply Q0 or Q1 to the symmetric word ``x_1 ... x_n`` of L-basis indices.

    Returns ``{sorted_tuple: coefficient}``.
    """
    deg = L.space.degrees
    par = [(d - 1) & 1 for d in deg]
    out: dict = {}

    def put(seq, c):
        s, t = normalize_tuple(seq, par)
        if s:
            v = out.get(t, 0) + c * s
            if v:
                out[t] = v
            else:
                del out[t]

    n = len(word)
    if which == "Q0":
        acc = 0
        for i in range(n):
            # (-1)^{i + |x_1| + ... + |x_{i-1}|} with i 1-based
            sign = _sgn(i + 1 + acc)
            for c, coef in L.dbar_images[word[i]].c.items():
                put(word[:i] + (c,) + word[i + 1:], coef * sign)
            acc += deg[word[i]]
        return out
    if which == "Q1":
        if n < 2:
            return out
        shifted = [deg[x] - 1 for x in word]
        for a, b in combinations(range(n), 2):
            rest = tuple(r for r in range(n) if r != a and r != b)
            perm = (a, b) + rest
            eps = koszul_sign(shifted, perm)
            sign = eps * _sgn(deg[word[a]])
            br = L.bracket_basis(word[a], word[b])
            tail = tuple(word[r] for r in rest)
            for c, coef in br.c.items():
                put((c,) + tail, coef * sign)
        return out
    raise ValueError(f"unknown coderivation {which!r}")


# ---------------------------------------------------------------------------
# convolution algebra


class ConvElement:
    """Homogeneous element of C(L, A) (see module docstring)."""

    __slots__ = ("ctx", "degree", "values")

    def __init__(self, ctx: "ConvAlgebra", degree: int, values: dict | None = None):
        self.ctx = ctx
        self.degree = degree
        self.values = {}
        for t, v in (values or {}).items():
            if v:
                self.values[tuple(t)] = v

    @classmethod
    def _raw(cls, ctx, degree, values):
        e = cls.__new__(cls)
        e.ctx, e.degree, e.values = ctx, degree, values
        return e

    def __add__(self, other: "ConvElement") -> "ConvElement":
        if not other.values:
            return self
        if not self.values:
            return other
        if other.degree != self.degree:
            raise ValueError(f"adding maps of degrees {self.degree} and {other.degree}")
        vals = dict(self.values)
        for t, v in other.values.items():
            if t in vals:
                w = vals[t] + v
                if w:
                    vals[t] = w
                else:
                    del vals[t]
            else:
                vals[t] = v
        return ConvElement._raw(self.ctx, self.degree, vals)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, ConvElement):
            return NotImplemented
        s = Fraction(s)
        if not s:
            return ConvElement._raw(self.ctx, self.degree, {})
        return ConvElement._raw(self.ctx, self.degree, {t: v * s for t, v in self.values.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.values)

    def __eq__(self, other):
        if not isinstance(other, ConvElement):
            return NotImplemented
        if not self.values and not other.values:
            return True
        return self.degree == other.degree and self.values == other.values

    def __call__(self, *args) -> Element:
        """Value on an arbitrary (unsorted) tuple of basis indices."""
        s, t = normalize_tuple(args, self.ctx.parity)
        if not s:
            return self.ctx.A.zero()
        v = self.values.get(t)
        return v * s if v is not None else self.ctx.A.zero()

    def weight_part(self, i: int) -> "ConvElement":
        return ConvElement._raw(self.ctx, self.degree,
                                {t: v for t, v in self.values.items() if len(t) == i})

    def weights(self) -> list[int]:
        return sorted({len(t) for t in self.values})

    def map_values(self, fn) -> "ConvElement":
        return ConvElement(self.ctx, self.degree, {t: fn(v) for t, v in self.values.items()})

    def check_degrees(self) -> bool:
        sh = self.ctx.shifted
        return all(v.degree() == self.degree + sum(sh[x] for x in t)
                   for t, v in self.values.items())

    def __repr__(self):
        return f"ConvElement(deg={self.degree}, terms={len(self.values)})"


class ConvAlgebra:
    """The curved DG-algebra (C(L, A), delta, star, R), truncated above ``max_weight``."""

    def __init__(self, L: DGLieAlgebra, A: CurvedDGAlgebra, max_weight: int):
        if max_weight < 0:
            raise ValueError("max_weight must be >= 0")
        self.L = L
        self.A = A
        self.max_weight = max_weight
        deg = L.space.degrees
        self.ldeg = deg
        self.shifted = [d - 1 for d in deg]
        self.parity = [(d - 1) & 1 for d in deg]
        self._q_cache: dict = {}
        # transposes of dbar and the bracket, for locating candidate tuples
        self._dbar_t: dict[int, set] = {}
        for b in range(L.dim):
            for c in L.dbar_images[b].c:
                self._dbar_t.setdefault(c, set()).add(b)
        self._br_t: dict[int, set] = {}
        for (a, b), v in L.table.items():
            pair = (a, b) if a <= b else (b, a)
            for c in v.c:
                self._br_t.setdefault(c, set()).add(pair)

    # -- constructors -------------------------------------------------------

    def zero(self, degree: int = 0) -> ConvElement:
        return ConvElement._raw(self, degree, {})

    def const(self, a: Element) -> ConvElement:
        deg = a.degree() if a else 0
        if a and deg is None:
            raise ValueError("weight-0 element must be homogeneous")
        return ConvElement._raw(self, deg, {(): a} if a else {})

    def one(self) -> ConvElement:
        return self.const(self.A.unit)

    @property
    def R(self) -> ConvElement:
        return self.const(self.A.R) if self.A.R else self.zero(2)

    def linear(self, images: Sequence[Element], degree: int) -> ConvElement:
        """Weight-1 map sending basis vector j of L to ``images[j]``."""
        return ConvElement(self, degree, {(j,): v for j, v in enumerate(images)})

    def basis_map(self, tup: Sequence[int], k: int) -> ConvElement:
        """The map sending the sorted tuple to e_k and every other tuple to 0."""
        s, t = normalize_tuple(tup, self.parity)
        if not s or t != tuple(tup):
            raise ValueError(f"{tup!r} is not a nondegenerate sorted tuple")
        deg = self.A.space.degrees[k] - sum(self.shifted[x] for x in t)
        return ConvElement._raw(self, deg, {t: self.A.space.basis_vector(k)})

    def tuples(self, weight: int) -> list[tuple]:
        """All nondegenerate sorted tuples of the given weight."""
        out = []
        for t in combinations_with_replacement(range(self.L.dim), weight):
            if all(not (t[a] == t[a + 1] and self.parity[t[a]]) for a in range(weight - 1)):
                out.append(t)
        return out

    # -- products -----------------------------------------------------------

    def mul(self, f: ConvElement, g: ConvElement) -> ConvElement:
        return self.star(f, g)

    def star(self, f: ConvElement, g: ConvElement) -> ConvElement:
        A, par, sh = self.A, self.parity, self.shifted
        W = self.max_weight
        deg = f.degree + g.degree
        out: dict = {}
        gd = g.degree & 1
        for S1, a in f.values.items():
            n1 = len(S1)
            s1 = sum(sh[x] for x in S1) & 1 if gd else 0
            c1 = Counter(S1) if n1 else None
            for S2, b in g.values.items():
                if n1 + len(S2) > W:
                    continue
                eps, T = normalize_tuple(S1 + S2, par)
                if not eps:
                    continue
                ab = A.mul(a, b)
                if not ab:
                    continue
                coef = eps * (-1 if s1 else 1)
                if n1 and S2:
                    cT = Counter(T)
                    for e, m in c1.items():
                        coef *= comb(cT[e], m)
                if T in out:
                    w = out[T] + ab * coef
                    if w:
                        out[T] = w
                    else:
                        del out[T]
                else:
                    out[T] = ab * coef
        return ConvElement._raw(self, deg, out)

    def power(self, f: ConvElement, k: int) -> ConvElement:
        out = self.one()
        for _ in range(k):
            out = self.star(out, f)
        return out

    def bracket(self, f: ConvElement, g: ConvElement) -> ConvElement:
        fg = self.star(f, g)
        gf = self.star(g, f)
        return fg - gf if not (f.degree * g.degree) & 1 else fg + gf

    # -- differentials ------------------------------------------------------

    def _Q(self, T: tuple, which: str) -> dict:
        key = (T, which)
        if key not in self._q_cache:
            self._q_cache[key] = bar_Q(self.L, T, which)
        return self._q_cache[key]

    def _precompose(self, f: ConvElement, T: tuple, which: str) -> Element:
        out = self.A.zero()
        for T2, c in self._Q(T, which).items():
            v = f.values.get(T2)
            if v is not None:
                out = out + v * c
        return out

    def delta0(self, f: ConvElement) -> ConvElement:
        """d f - (-1)^{|f|} f Q0."""
        A = self.A
        cands = set(f.values)
        for S in f.values:
            for p, x in enumerate(S):
                for b in self._dbar_t.get(x, ()):
                    s, T = normalize_tuple(S[:p] + (b,) + S[p + 1:], self.parity)
                    if s:
                        cands.add(T)
        sign = -_sgn(f.degree)
        out = {}
        for T in cands:
            v = f.values.get(T)
            val = A.d(v) if v is not None else A.zero()
            val = val + self._precompose(f, T, "Q0") * sign
            if val:
                out[T] = val
        return ConvElement._raw(self, f.degree + 1, out)

    def delta1(self, f: ConvElement) -> ConvElement:
        """(-1)^{|f|+1} f Q1, raising weight by one."""
        cands = set()
        for S in f.values:
            if len(S) + 1 > self.max_weight:
                continue
            for p, x in enumerate(S):
                rest = S[:p] + S[p + 1:]
                for a, b in self._br_t.get(x, ()):
                    s, T = normalize_tuple(rest + (a, b), self.parity)
                    if s:
                        cands.add(T)
        sign = _sgn(f.degree + 1)
        out = {}
        for T in cands:
            val = self._precompose(f, T, "Q1") * sign
            if val:
                out[T] = val
        return ConvElement._raw(self, f.degree + 1, out)

    def delta(self, f: ConvElement) -> ConvElement:
        if not f.values:
            return self.zero(f.degree + 1)
        return self.delta0(f) + self.delta1(f)

    # -- evaluation ---------------------------------------------------------

    def ev(self, x: Element, f: ConvElement) -> Element:
        """ev_x(f) = sum_i f_i(x, ..., x) / i! for x in L of degree 1."""
        if x and x.degree() != 1:
            raise ValueError("ev_x needs x of degree 1")
        out = self.A.zero()
        for T, v in f.values.items():
            coef = Fraction(1)
            for e, m in Counter(T).items():
                c = x[e]
                if not c:
                    coef = Fraction(0)
                    break
                coef *= c ** m / factorial(m)
            if coef:
                out = out + v * coef
        return out

    def __repr__(self):
        return f"ConvAlgebra(dim L={self.L.dim}, dim A={self.A.space.dim}, W={self.max_weight})"


# ---------------------------------------------------------------------------


def check_ev(C: ConvAlgebra, x: Element, maps: Sequence[ConvElement] | None = None) -> Report:
    """ev_x is multiplicative, and intertwines delta with d on ``maps``.

    By default ``maps`` are all basis maps of weight < max_weight, so that
    delta(f) is computed without truncation.
    """
    rep = Report("check_ev")
    A = C.A
    if maps is None:
        maps = [C.basis_map(T, k) for w in range(C.max_weight) for T in C.tuples(w)
                for k in range(A.space.dim)]
    evs = [C.ev(x, f) for f in maps]
    w = None
    for a, f in enumerate(maps):
        wf = max(f.weights(), default=0)
        for b, g in enumerate(maps):
            if wf + max(g.weights(), default=0) > C.max_weight:
                continue
            if C.ev(x, C.star(f, g)) != A.mul(evs[a], evs[b]):
                w = {"maps": [repr(f), repr(g)]}
                break
        if w:
            break
    rep.add("ev_multiplicative", w is None, w)
    w = None
    for a, f in enumerate(maps):
        if max(f.weights(), default=0) >= C.max_weight:
            continue
        lhs = C.ev(x, C.delta(f))
        rhs = A.d(evs[a])
        if lhs != rhs:
            w = {"map": repr(f), "ev_delta": repr(lhs), "d_ev": repr(rhs)}
            break
    rep.add("ev_commutes_with_d", w is None, w)
    return rep


def verify_conv_axioms(L: DGLieAlgebra, A: CurvedDGAlgebra, weight_bound: int) -> Report:
    """delta is a star-derivation, delta(R) = 0, delta^2 = [R, -] and delta1^2 = 0.

    Checked on every pair (resp. every single) basis map of weight <= weight_bound.
    """
    if weight_bound < 2:
        raise ValueError("weight_bound must be >= 2")
    C = ConvAlgebra(L, A, weight_bound)
    rep = Report("verify_conv_axioms")
    dimA = A.space.dim
    basis = []
    for w in range(weight_bound + 1):
        for T in C.tuples(w):
            for k in range(dimA):
                basis.append((T, k))
    maps = {key: C.basis_map(*key) for key in basis}
    dmaps = {key: C.delta(f) for key, f in maps.items()}

    def delta_lin(f: ConvElement) -> ConvElement:
        # delta through the precomputed images of basis maps
        out = C.zero(f.degree + 1)
        for T, v in f.values.items():
            for k, c in v.c.items():
                out = out + dmaps[(T, k)] * c
        return out

    labels = L.space.labels

    def wit(*keys):
        return [{"tuple": [labels[x] for x in T], "value": A.space.labels[k]} for T, k in keys]

    w = None
    for kf in basis:
        f = maps[kf]
        wf = len(kf[0])
        for kg in basis:
            if wf + len(kg[0]) > weight_bound:
                continue
            g = maps[kg]
            lhs = delta_lin(C.star(f, g))
            rhs = C.star(dmaps[kf], g) + C.star(f, dmaps[kg]) * _sgn(f.degree)
            if lhs != rhs:
                w = {"maps": wit(kf, kg)}
                break
        if w:
            break
    rep.add("delta_is_derivation", w is None, w)

    dR = C.delta(C.R)
    rep.add("delta_R_zero", not dR, None if not dR else {"weights": dR.weights()})

    w = None
    for key in basis:
        f = maps[key]
        if delta_lin(dmaps[key]) != C.bracket(C.R, f):
            w = {"map": wit(key)}
            break
    rep.add("delta_squared_is_bracket_R", w is None, w)

    w = None
    for key in basis:
        if len(key[0]) + 2 > weight_bound:
            continue
        f = maps[key]
        if C.delta1(C.delta1(f)):
            w = {"map": wit(key)}
            break
    rep.add("delta1_squared_zero", w is None, w)
    return rep


def w_form_conv(C: ConvAlgebra, s: ConvElement, k: int) -> ConvElement:
    """(1/k!) * integral_0^1 (R + t delta(s) + t^2 s*s)^k * s dt in C(L, A)."""
    from .ncpoly import TPoly

    if k < 0:
        raise ValueError("k must be >= 0")
    if s.degree != 1 or any(len(t) != 1 for t in s.values):
        raise ValueError("s must be a weight-1 map of degree 1")
    zero = C.zero(2)
    path = TPoly({0: C.R, 1: C.delta(s), 2: C.star(s, s)}, zero=zero)
    pw = path.power(k, C.one(), C.star)
    body = TPoly({j: C.star(v, s) for j, v in pw.coeffs.items()}, zero=C.zero(2 * k + 1))
    out = body.integrate01()
    return out * Fraction(1, factorial(k))


def theta_project(pair: CurvedPair, k: int, f: ConvElement) -> ConvElement:
    """Pointwise normal forms of the values of f modulo [A,A] + I^(k+1)A."""
    ker = pair.target_kernel(k)
    return f.map_values(ker.reduce)


# ---------------------------------------------------------------------------
# decalage, used only to pin the sign of Q


def decalage_sign(k: int, degrees: Sequence[int]) -> int:
    """Sign relating a degree-k map on V^{wedge i} to its image on V[1]^{odot i}."""
    i = len(degrees)
    e = k + i - 1 + sum((i - s) * (degrees[s - 1] - 1) for s in range(1, i + 1))
    return _sgn(e)


def check_decalage(L: DGLieAlgebra) -> Report:
    """dec(dbar) = -dbar = Q on L[1], and dec([-,-]) = q2 = the weight-dropping part of Q."""
    rep = Report("decalage")
    deg = L.space.degrees
    w = None
    for i in range(L.dim):
        dec = L.dbar_images[i] * decalage_sign(1, [deg[i]])
        q = bar_Q(L, (i,), "Q0")
        got = Element(L.space, {t[0]: v for t, v in q.items()})
        if dec != -L.dbar_images[i] or got != dec:
            w = {"basis": L.space.labels[i], "Q": repr(got)}
            break
    rep.add("q1", w is None, w)
    w = None
    for i in range(L.dim):
        for j in range(L.dim):
            br = L.bracket_basis(i, j)
            dec = br * decalage_sign(0, [deg[i], deg[j]])
            q = bar_Q(L, (i, j), "Q1")
            got = Element(L.space, {t[0]: v for t, v in q.items()})
            if dec != br * _sgn(deg[i]) or got != dec:
                w = {"basis": [L.space.labels[i], L.space.labels[j]], "Q1": repr(got)}
                break
        if w:
            break
    rep.add("q2", w is None, w)
    return rep
