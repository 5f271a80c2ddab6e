"""Curvature paths, transgression forms and Chern-Simons characters in a curved algebra.

Every t-integral is symbolic: polynomials in t are :class:`TPoly` objects with
Element coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .checks import Report
from .curved import CurvedDGAlgebra, twist
from .exactlin import Element
from .ncpoly import TPoly, eval_nc, v_poly

__all__ = ["curvature_path", "p_family", "integrate01", "w_form", "w_form_via_v",
           "cs_character", "cs_character_p", "chern_character", "verify_transgression",
           "verify_ch_invariance"]


def _check_x(x: Element):
    if x and x.degree() != 1:
        raise ValueError("x must be homogeneous of degree 1")


def curvature_path(A: CurvedDGAlgebra, x: Element) -> TPoly:
    """R_{tx} = R + t d(x) + t^2 x^2."""
    _check_x(x)
    return TPoly({0: A.R, 1: A.d(x), 2: A.mul(x, x)}, zero=A.zero())


def _tmul(A):
    return A.mul


def p_family(A: CurvedDGAlgebra, x: Element, k: int) -> TPoly:
    """P(t)^k_x = sum_{i=1}^k R_tx^{i-1} x R_tx^{k-i}."""
    if k < 0:
        raise ValueError("k must be >= 0")
    Rt = curvature_path(A, x)
    mul = A.mul
    powers = [TPoly({0: A.unit}, zero=A.zero())]
    for _ in range(max(k - 1, 0)):
        powers.append(powers[-1].mul(Rt, mul))
    xt = TPoly({0: x}, zero=A.zero())
    out = TPoly({}, zero=A.zero())
    for i in range(1, k + 1):
        out = out + powers[i - 1].mul(xt, mul).mul(powers[k - i], mul)
    return out


def integrate01(p: TPoly, weight: str = "1"):
    """Integral over [0,1] against dt (weight "1") or t dt (weight "t")."""
    if weight not in ("1", "t"):
        raise ValueError("weight must be '1' or 't'")
    return p.integrate01(0 if weight == "1" else 1)


def w_form(A: CurvedDGAlgebra, x: Element, k: int) -> Element:
    """W(x)^{k+1} = (1/k!) * integral_0^1 R_tx^k x dt."""
    if k < 0:
        raise ValueError("k must be >= 0")
    Rt = curvature_path(A, x)
    pw = Rt.power(k, A.unit, A.mul)
    body = TPoly({j: A.mul(v, x) for j, v in pw.coeffs.items()}, zero=A.zero())
    return integrate01(body) * Fraction(1, factorial(k))


def w_form_via_v(A: CurvedDGAlgebra, x: Element, k: int) -> Element:
    """V^k(R, d(x) + x^2, x^2) x."""
    _check_x(x)
    x2 = A.mul(x, x)
    return A.mul(eval_nc(v_poly(k), A.R, A.d(x) + x2, x2, A), x)


def cs_character(A: CurvedDGAlgebra, x: Element, k: int) -> Element:
    """ch(x)^1_k = (1/(k-1)!) tr integral_0^1 R_tx^{k-1} x dt, as a normal form in A/[A,A]."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return A.tr(w_form(A, x, k - 1))


def cs_character_p(A: CurvedDGAlgebra, x: Element, k: int) -> Element:
    """Same class via (1/k!) tr integral_0^1 P(t)^k_x dt."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return A.tr(integrate01(p_family(A, x, k)) * Fraction(1, factorial(k)))


def chern_character(A: CurvedDGAlgebra, k: int) -> Element:
    """ch(A)_k = (1/k!) tr(R^k)."""
    return A.tr(A.power(A.R, k) * Fraction(1, factorial(k)))


def _first_diff(A, lhs: Element, rhs: Element):
    diff = lhs - rhs
    if not diff:
        return None
    i = diff.pivot()
    return {"basis": A.space.labels[i], "lhs": str(lhs[i]), "rhs": str(rhs[i])}


def verify_transgression(A: CurvedDGAlgebra, x: Element, k: int) -> Report:
    """R_x^k - R^k = d(int P dt) + [x, int t P dt], exactly in A."""
    rep = Report("verify_transgression")
    P = p_family(A, x, k)
    Ax = twist(A, x)
    lhs = A.power(Ax.R, k) - A.power(A.R, k)
    rhs = A.d(integrate01(P)) + A.bracket(x, integrate01(P, "t"))
    rep.add(f"transgression_k{k}", lhs == rhs, _first_diff(A, lhs, rhs))
    return rep


def verify_ch_invariance(A: CurvedDGAlgebra, x: Element, k: int) -> Report:
    """d(ch(x)^1_k) = (1/k!) tr(R_x^k - R^k) in A/[A,A], plus the two formulas for ch^1_k."""
    rep = Report("verify_ch_invariance")
    if k < 1:
        rep.add("k_positive", False, {"k": k})
        return rep
    Ax = twist(A, x)
    ch = cs_character(A, x, k)
    lhs = A.tr(A.d(ch))
    rhs = A.tr((A.power(Ax.R, k) - A.power(A.R, k)) * Fraction(1, factorial(k)))
    rep.add(f"ch_invariance_k{k}", lhs == rhs, _first_diff(A, lhs, rhs))
    other = cs_character_p(A, x, k)
    rep.add(f"ch_two_formulas_k{k}", ch == other, _first_diff(A, ch, other))
    closed = A.tr(A.d(A.power(A.R, k)))
    rep.add(f"ch_closed_k{k}", not closed, None if not closed else {"value": repr(closed)})
    return rep
