"""Split curved pairs and the L-infinity liftings sigma^k of the semiregularity maps.

Taylor coefficients are stored as a :class:`ConvElement` over the DG-Lie
algebra B whose values are normal forms modulo ``[A,A] + I^(k+1)A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .checks import Report
from .convolution import ConvAlgebra, ConvElement, DGLieAlgebra, theta_project, w_form_conv
from .curved import CurvedDGAlgebra, CurvedPair
from .exactlin import Element, GradedSpace, Subspace, invert_matrix
from .ncpoly import eval_nc, v_component, v_poly

__all__ = ["SplitPair", "LinfMorphism", "split_structure", "sigma_taylor",
           "explicit_sigma_oracle", "oracle_morphism", "verify_linf", "mc_pushforward",
           "compare_morphisms", "atiyah_dependence", "ORACLE_TABLES", "SplitError"]


class SplitError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg if witness is None else f"{msg}: {witness}")
        self.witness = witness


@dataclass
class SplitPair:
    """``A = B + I`` with B a graded Lie subalgebra and I a curved Lie ideal."""

    pair: CurvedPair
    B: Subspace
    lie: DGLieAlgebra
    iota: list          # B basis vector j -> Element of A
    nabla: list         # B basis vector j -> Element of I
    report: Report
    _proj: list = field(default_factory=list, repr=False)

    @property
    def algebra(self) -> CurvedDGAlgebra:
        return self.pair.algebra

    @property
    def I(self) -> Subspace:
        return self.pair.ideal

    def P(self, v: Element) -> Element:
        """Projection onto B along I, in B coordinates."""
        out = Element(self.lie.space)
        for i, c in v.c.items():
            out = out + self._proj[i] * c
        return out

    def embed(self, b: Element) -> Element:
        """B coordinates -> Element of A."""
        out = self.algebra.zero()
        for j, c in b.c.items():
            out = out + self.iota[j] * c
        return out

    def nabla_of(self, b: Element) -> Element:
        out = self.algebra.zero()
        for j, c in b.c.items():
            out = out + self.nabla[j] * c
        return out

    def conv(self, max_weight: int) -> ConvAlgebra:
        return ConvAlgebra(self.lie, self.algebra, max_weight)


def split_structure(A: CurvedDGAlgebra, B: Subspace, I: Subspace) -> SplitPair:
    """Validate ``A = B + I`` and build dbar = P d and nabla = P^perp d on B."""
    rep = Report("split_structure")
    sp = A.space
    if B.ambient != sp or I.ambient != sp:
        raise SplitError("B and I must be subspaces of A")
    if B.dim + I.dim != sp.dim or (B + I).dim != sp.dim:
        raise SplitError("B + I is not a direct sum decomposition of A",
                         {"dim_B": B.dim, "dim_I": I.dim, "dim_A": sp.dim,
                          "dim_sum": (B + I).dim})
    rep.add("direct_sum", True)
    try:
        pair = CurvedPair(A, I, validate=True)
    except ValueError as exc:
        raise SplitError(f"I is not a curved Lie ideal ({exc})") from exc
    rep.add("curved_ideal", True)
    basis = B.basis
    if not B.is_graded():
        raise SplitError("B is not a graded subspace")
    for a in basis:
        for b in basis:
            v = A.bracket(a, b)
            if not B.contains(v):
                raise SplitError("B is not closed under the bracket",
                                 {"pair": [repr(a), repr(b)]})
    rep.add("B_lie_subalgebra", True)

    # coordinates in the adapted basis (B basis, then I basis)
    nb = B.dim
    full = basis + I.basis
    M = [[full[r][c] for r in range(sp.dim)] for c in range(sp.dim)]
    Minv = invert_matrix(M)
    lie_space = GradedSpace([sp.labels[b.pivot()] for b in basis], [b.degree() for b in basis])
    proj = []
    for i in range(sp.dim):
        proj.append(Element(lie_space, {j: Minv[j][i] for j in range(nb) if Minv[j][i]}))

    def P(v):
        out = Element(lie_space)
        for i, c in v.c.items():
            out = out + proj[i] * c
        return out

    def emb(b):
        out = A.zero()
        for j, c in b.c.items():
            out = out + basis[j] * c
        return out

    br = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            v = A.bracket(a, b)
            if v:
                br[(i, j)] = P(v)
    dbar = [P(A.d(b)) for b in basis]
    nabla = [A.d(b) - emb(dbar[j]) for j, b in enumerate(basis)]
    lie = DGLieAlgebra(lie_space, br, dbar)

    w = None
    for j, b in enumerate(basis):
        if lie.dbar(dbar[j]):
            w = {"basis": lie_space.labels[j]}
            break
    rep.add("dbar_square_zero", w is None, w)
    if w:
        raise SplitError("dbar^2 != 0 on B", w)
    # d nabla + nabla dbar = [R, -] on B
    w = None
    for j, b in enumerate(basis):
        lhs = A.d(nabla[j])
        for i, c in dbar[j].c.items():
            lhs = lhs + nabla[i] * c
        if lhs != A.bracket(A.R, b):
            w = {"basis": lie_space.labels[j]}
            break
    rep.add("d_nabla_identity", w is None, w)
    if w:
        raise SplitError("d nabla + nabla dbar != [R, -]", w)
    return SplitPair(pair, B, lie, list(basis), nabla, rep, proj)


# ---------------------------------------------------------------------------


@dataclass
class LinfMorphism:
    """Taylor coefficients of an L-infinity morphism into the abelian target."""

    k: int
    pair: CurvedPair
    lie: DGLieAlgebra
    coeffs: ConvElement
    route: str = "split"

    def component(self, i: int) -> ConvElement:
        return self.coeffs.weight_part(i)

    def value(self, *args) -> Element:
        return self.coeffs(*args)

    def max_nonzero_weight(self) -> int:
        return max((len(t) for t in self.coeffs.values), default=0)

    def to_json(self) -> dict:
        labels = self.lie.space.labels
        rows = []
        for t in sorted(self.coeffs.values, key=lambda t: (len(t), t)):
            v = self.coeffs.values[t]
            rows.append({"tuple": [labels[x] for x in t], "value": v.to_json()})
        return {"k": self.k, "route": self.route, "coefficients": rows}


def sigma_taylor(sp: SplitPair, k: int, route: str = "split", phi: Sequence[Element] | None = None,
                 max_weight: int | None = None) -> LinfMorphism:
    """sigma^k through the split formula or through W(s)^{k+1} for s = iota + phi.

    ``phi[j]`` is the image in I of the j-th basis vector of B (degree 0 map).
    Components are computed up to ``max_weight`` (default 2k+1).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    W = 2 * k + 1 if max_weight is None else max_weight
    C = sp.conv(W)
    A = sp.algebra
    if route == "split":
        iota = C.linear(sp.iota, 1)
        nabla = C.linear(sp.nabla, 2)
        ii = C.star(iota, iota)
        R = C.R if A.R else C.zero(2)
        body = eval_nc(v_poly(k), R, nabla, ii, C)
        W_form = C.star(body, iota)
    elif route == "section":
        images = list(sp.iota)
        if phi is not None:
            if len(phi) != len(images):
                raise ValueError("phi needs one image per basis vector of B")
            for j, v in enumerate(phi):
                if v and (v.degree() != sp.lie.space.degrees[j] or not sp.I.contains(v)):
                    raise ValueError(f"phi must be a degree 0 map into I (basis {j})")
                images[j] = images[j] + v
        s = C.linear(images, 1)
        W_form = w_form_conv(C, s, k)
    else:
        raise ValueError(f"unknown route {route!r}")
    return LinfMorphism(k, sp.pair, sp.lie, theta_project(sp.pair, k, W_form), route)


def verify_linf(m: LinfMorphism, weight_bound: int) -> Report:
    """delta(f) vanishes in Hom(S(B[1]), A/([A,A]+I^(k+1)A)) up to the weight bound."""
    rep = Report("verify_linf")
    pair, k = m.pair, m.k
    A = pair.algebra
    C = ConvAlgebra(m.lie, A, weight_bound)
    f = ConvElement(C, m.coeffs.degree,
                    {t: v for t, v in m.coeffs.values.items() if len(t) <= weight_bound})
    high = [t for t in f.values if len(t) > 2 * k + 1]
    rep.add("vanishing_above_2k+1", not high,
            {"tuple": [m.lie.space.labels[x] for x in high[0]]} if high else None)
    df = theta_project(pair, k, C.delta(f))
    w = None
    if df.values:
        t = min(df.values, key=lambda t: (len(t), t))
        w = {"weight": len(t), "tuple": [m.lie.space.labels[x] for x in t],
             "value": repr(df.values[t])}
    rep.add("delta_closed", w is None, w)
    return rep


def compare_morphisms(a: LinfMorphism, b: LinfMorphism, max_weight: int | None = None):
    """First tuple where the two coefficient tables differ, or None."""
    keys = set(a.coeffs.values) | set(b.coeffs.values)
    if max_weight is not None:
        keys = {t for t in keys if len(t) <= max_weight}
    zero = a.pair.algebra.zero()
    for t in sorted(keys, key=lambda t: (len(t), t)):
        va = a.coeffs.values.get(t, zero)
        vb = b.coeffs.values.get(t, zero)
        if va != vb:
            return {"tuple": [a.lie.space.labels[x] for x in t], "left": repr(va), "right": repr(vb)}
    return None


# ---------------------------------------------------------------------------
# explicit tables for k <= 3
#
# A term is (coefficient, factors, sign positions, sign constant).  Factors
# read left to right: "R" the curvature, "x" the next argument x_{tau(j)},
# "n" its image nabla(x_{tau(j)}).  The term carries the extra sign
# (-1)^{const + sum_{a in positions} |x_{tau(a)}|} (positions are 1-based).
# The tables are written for unshifted multilinear maps on B; they are moved to
# symmetric maps on B[1] by the decalage sign (-1)^{sum_a (n-a) y_{tau(a)}},
# y the shifted degree.  On degree-1 arguments this sign is trivial.

F = Fraction
ORACLE_TABLES = {
    0: {1: [(F(1), "x", (), 0)]},
    1: {1: [(F(1), "Rx", (), 0)],
        2: [(F(1, 2), "nx", (), 0)],
        3: [(F(-1, 6), "xxx", (), 0)]},
    2: {1: [(F(1, 2), "RRx", (), 0)],
        2: [(F(1, 4), "Rnx", (), 0), (F(1, 4), "nRx", (), 0)],
        3: [(F(1, 6), "nnx", (1,), 1), (F(-1, 6), "Rxxx", (), 0)],
        4: [(F(-1, 12), "nxxx", (), 0)],
        5: [(F(1, 60), "xxxxx", (), 0)]},
    3: {1: [(F(1, 6), "RRRx", (), 0)],
        2: [(F(1, 12), "RRnx", (), 0), (F(1, 12), "RnRx", (), 0), (F(1, 12), "nRRx", (), 0)],
        3: [(F(-1, 18), "RRxxx", (), 0), (F(-1, 36), "RxxRx", (), 0),
            (F(1, 18), "Rnnx", (1,), 1), (F(1, 18), "nRnx", (1,), 1), (F(1, 18), "nnRx", (1,), 1)],
        4: [(F(1, 24), "nnnx", (2,), 1),
            (F(-1, 36), "nRxxx", (), 0), (F(-1, 36), "Rnxxx", (), 0),
            (F(-1, 72), "Rxxnx", (1, 2), 0), (F(-1, 72), "nxxRx", (), 0)],
        5: [(F(1, 60), "Rxxxxx", (), 0), (F(-1, 60), "nnxxx", (1,), 1),
            (F(-1, 120), "nxxnx", (1, 2, 3), 1)],
        6: [(F(1, 120), "nxxxxx", (), 0)],
        7: [(F(-1, 840), "xxxxxxx", (), 0)]},
}
del F


def _term_sum(A: CurvedDGAlgebra, xs: list, ns: list, degs: list, shifted_odd: list,
              factors: str, positions, const: int) -> Element:
    """Sum over all orderings tau of eps(tau) * sign * product, by dynamic programming."""
    n = len(xs)
    dp = {0: A.unit}
    pos = set(positions)
    slot = 0
    for ch in factors:
        if ch == "R":
            dp = {mask: A.mul(v, A.R) for mask, v in dp.items()}
            dp = {mask: v for mask, v in dp.items() if v}
            continue
        slot += 1
        new: dict = {}
        for mask, v in dp.items():
            for j in range(n):
                if mask >> j & 1:
                    continue
                sign = 1
                if shifted_odd[j]:
                    # inversions with already placed odd arguments of larger index
                    higher = sum(1 for a in range(j + 1, n) if mask >> a & 1 and shifted_odd[a])
                    if higher & 1:
                        sign = -sign
                if slot in pos and degs[j] & 1:
                    sign = -sign
                if shifted_odd[j] and (n - slot) & 1:
                    sign = -sign
                fac = xs[j] if ch == "x" else ns[j]
                prod = A.mul(v, fac)
                if not prod:
                    continue
                key = mask | 1 << j
                new[key] = new[key] + prod * sign if key in new else prod * sign
        dp = {mask: v for mask, v in new.items() if v}
    full = (1 << n) - 1
    out = dp.get(full, A.zero())
    return out * (-1 if const & 1 else 1)


def _single_perm(A, xs, ns, degs, shifted_odd, factors, positions, const, perm) -> Element:
    from .exactlin import koszul_sign
    eps = koszul_sign([1 if o else 0 for o in shifted_odd], perm)
    out = A.unit
    slot = 0
    sign = eps * (-1 if const & 1 else 1)
    n = len(xs)
    for ch in factors:
        if ch == "R":
            out = A.mul(out, A.R)
            continue
        j = perm[slot]
        slot += 1
        if slot in positions and degs[j] & 1:
            sign = -sign
        if shifted_odd[j] and (n - slot) & 1:
            sign = -sign
        out = A.mul(out, xs[j] if ch == "x" else ns[j])
    return out * sign


def explicit_sigma_oracle(sp: SplitPair, k: int, i: int, args: Sequence[int],
                          mutate: dict | None = None) -> Element:
    """Value of the displayed closed formula for sigma^k_i on B-basis arguments.

    ``mutate`` flips one sign: ``{"k": k, "i": i, "term": t}`` negates the
    coefficient of term t; adding ``"perm": p`` instead negates only the
    summand of the permutation p (a tuple, 0-based).
    """
    if k not in ORACLE_TABLES:
        raise ValueError("explicit tables exist only for k <= 3")
    if not 1 <= i <= 2 * k + 1:
        raise ValueError(f"need 1 <= i <= 2k+1, got i={i}")
    if len(args) != i:
        raise ValueError("wrong number of arguments")
    A = sp.algebra
    degs = [sp.lie.space.degrees[a] for a in args]
    shifted_odd = [(d - 1) & 1 for d in degs]
    xs = [sp.iota[a] for a in args]
    ns = [sp.nabla[a] for a in args]
    total = A.zero()
    for t, (coef, factors, positions, const) in enumerate(ORACLE_TABLES[k][i]):
        val = _term_sum(A, xs, ns, degs, shifted_odd, factors, positions, const)
        c = coef
        if mutate and mutate.get("k") == k and mutate.get("i") == i and mutate.get("term") == t:
            if "perm" in mutate:
                one = _single_perm(A, xs, ns, degs, shifted_odd, factors, set(positions), const,
                                   tuple(mutate["perm"]))
                val = val - one * 2
            else:
                c = -c
        total = total + val * c
    return sp.pair.target_kernel(k).reduce(total)


def oracle_morphism(sp: SplitPair, k: int, mutate: dict | None = None) -> LinfMorphism:
    """The explicit formulas evaluated on every sorted basis tuple of weight <= 2k+1."""
    C = sp.conv(2 * k + 1)
    vals = {}
    for i in range(1, 2 * k + 2):
        for t in C.tuples(i):
            v = explicit_sigma_oracle(sp, k, i, t, mutate)
            if v:
                vals[t] = v
    return LinfMorphism(k, sp.pair, sp.lie, ConvElement(C, 2 * k + 1, vals), route="oracle")


# ---------------------------------------------------------------------------


def mc_pushforward(sp: SplitPair, k: int, x: Element, phi: Sequence[Element] | None = None) -> dict:
    """The three expressions for the Maurer-Cartan pushforward of x in B^1.

    ``taylor``: sum_i sigma^k_i(x, ..., x) / i!;  ``ev``: tr(ev_x W(s)^{k+1});
    ``direct``: tr(W(s(x))^{k+1}) computed in A.  The first two agree for every
    x of degree 1; the third agrees with them when x is Maurer-Cartan.
    """
    from .chernsimons import w_form

    A = sp.algebra
    pair = sp.pair
    if x and x.degree() != 1:
        raise ValueError("x must have degree 1")
    ker = pair.target_kernel(k)
    route = "split" if phi is None else "section"
    m = sigma_taylor(sp, k, route=route, phi=phi)
    C = sp.conv(2 * k + 1)
    taylor = ker.reduce(C.ev(x, ConvElement(C, m.coeffs.degree, m.coeffs.values)))
    images = list(sp.iota)
    if phi is not None:
        images = [a + b for a, b in zip(images, phi)]
    s = C.linear(images, 1)
    ev = ker.reduce(C.ev(x, w_form_conv(C, s, k)))
    sx = A.zero()
    for j, c in x.c.items():
        sx = sx + images[j] * c
    direct = ker.reduce(w_form(A, sx, k))
    is_mc = sp.lie.is_mc(x)
    cocycle = not ker.reduce(A.d(taylor))
    return {"taylor": taylor, "ev": ev, "direct": direct, "is_mc": is_mc,
            "taylor_eq_ev": taylor == ev, "ev_eq_direct": ev == direct,
            "is_cocycle": cocycle}


def atiyah_dependence(sp: SplitPair, k: int, r: Element) -> dict:
    """For each i, whether the split formula for sigma^k_i changes when R -> R + r.

    Only the defining formula is re-evaluated (R + r need not be a curvature).
    Returns ``{i: unchanged}``.
    """
    pair = sp.pair
    C = sp.conv(2 * k + 1)
    iota = C.linear(sp.iota, 1)
    nabla = C.linear(sp.nabla, 2)
    ii = C.star(iota, iota)
    ker = pair.target_kernel(k)
    out = {}
    for i in range(1, 2 * k + 2):
        vals = []
        for RR in (sp.algebra.R, sp.algebra.R + r):
            Rc = C.const(RR) if RR else C.zero(2)
            f = C.star(eval_nc(v_component(k, i - 1), Rc, nabla, ii, C), iota)
            vals.append({t: ker.reduce(v) for t, v in f.values.items()})
            vals[-1] = {t: v for t, v in vals[-1].items() if v}
        out[i] = vals[0] == vals[1]
    return out
