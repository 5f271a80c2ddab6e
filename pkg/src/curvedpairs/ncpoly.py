"""Noncommutative polynomials in Z0, Z1, Z2 and the Chern-Simons polynomials V^k.

Words are tuples over ``{0, 1, 2}`` (letter ``i`` stands for ``Zi``, of weight
``i``).  :class:`TPoly` is a polynomial in a central degree 0 variable ``t``
with coefficients in any module supporting ``+`` and scalar ``*``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Callable

__all__ = ["NCPoly", "TPoly", "sigma_sym", "v_poly", "v_component", "eval_nc",
           "render_component", "vtable_text", "vtable_json", "word_str"]

Word = tuple


def word_str(w: Word) -> str:
    return "".join(f"Z{i}" for i in w) if w else "1"


def word_key(w: Word):
    # shorter words first, then lexicographic with Z0 < Z1 < Z2
    return (len(w), w)


class NCPoly:
    """Rational linear combination of words in Z0, Z1, Z2."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {}
        for w, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                w = tuple(w)
                if any(x not in (0, 1, 2) for x in w):
                    raise ValueError(f"bad word {w!r}")
                self.terms[w] = c

    @classmethod
    def one(cls) -> "NCPoly":
        return cls({(): 1})

    @classmethod
    def var(cls, i: int) -> "NCPoly":
        return cls({(i,): 1})

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        t = dict(self.terms)
        for w, c in other.terms.items():
            v = t.get(w, 0) + c
            if v:
                t[w] = v
            else:
                t.pop(w, None)
        out = NCPoly()
        out.terms = t
        return out

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = NCPoly()
        if isinstance(other, NCPoly):
            t: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    v = t.get(w, 0) + c1 * c2
                    if v:
                        t[w] = v
                    else:
                        t.pop(w, None)
            out.terms = t
            return out
        s = Fraction(other)
        if s:
            out.terms = {w: c * s for w, c in self.terms.items()}
        return out

    def __rmul__(self, s):
        if isinstance(s, NCPoly):
            return NotImplemented
        return self * s

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, w):
        return self.terms.get(tuple(w), Fraction(0))

    def words(self):
        return sorted(self.terms, key=word_key)

    def weight_part(self, i: int) -> "NCPoly":
        return NCPoly({w: c for w, c in self.terms.items() if sum(w) == i})

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{self.terms[w]}*{word_str(w)}" for w in self.words())


class TPoly:
    """Polynomial in a central degree 0 variable t; coefficients are modules."""

    def __init__(self, coeffs: dict[int, object] | None = None, zero=None):
        self.zero = zero
        self.coeffs = {j: c for j, c in (coeffs or {}).items() if c}

    def __add__(self, other: "TPoly") -> "TPoly":
        c = dict(self.coeffs)
        for j, v in other.coeffs.items():
            c[j] = c[j] + v if j in c else v
        return TPoly(c, self.zero if self.zero is not None else other.zero)

    def scale(self, s) -> "TPoly":
        return TPoly({j: v * s for j, v in self.coeffs.items()}, self.zero)

    def mul(self, other: "TPoly", mul: Callable) -> "TPoly":
        c: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                ab = mul(a, b)
                if ab:
                    c[i + j] = c[i + j] + ab if i + j in c else ab
        return TPoly(c, self.zero if self.zero is not None else other.zero)

    def power(self, k: int, one, mul: Callable) -> "TPoly":
        out = TPoly({0: one}, self.zero)
        for _ in range(k):
            out = out.mul(self, mul)
        return out

    def integrate01(self, weight: int = 0):
        """Integral over [0, 1] of ``t**weight * self`` (weight 0 or 1)."""
        if weight not in (0, 1):
            raise ValueError("weight must be 0 (dt) or 1 (t dt)")
        total = self.zero
        for j, v in sorted(self.coeffs.items()):
            term = v * Fraction(1, j + 1 + weight)
            total = term if total is None else total + term
        return total

    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def at(self, t):
        total = self.zero
        for j, v in sorted(self.coeffs.items()):
            term = v * Fraction(t) ** j
            total = term if total is None else total + term
        return total


def sigma_sym(p: int, q: int, r: int) -> NCPoly:
    """Sum of all distinct words with p letters Z0, q letters Z1 and r letters Z2."""
    if min(p, q, r) < 0:
        raise ValueError("multiplicities must be nonnegative")
    letters = (0,) * p + (1,) * q + (2,) * r
    return NCPoly({w: 1 for w in set(permutations(letters))})


_V_CACHE: dict[int, NCPoly] = {}


def v_poly(k: int) -> NCPoly:
    """(1/k!) * integral_0^1 (Z0 + t Z1 + (t^2 - t) Z2)^k dt, expanded over t."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k not in _V_CACHE:
        base = TPoly({0: NCPoly.var(0), 1: NCPoly.var(1) - NCPoly.var(2), 2: NCPoly.var(2)},
                     zero=NCPoly())
        pw = base.power(k, NCPoly.one(), lambda a, b: a * b)
        _V_CACHE[k] = pw.integrate01() * Fraction(1, factorial(k))
    return _V_CACHE[k]


def v_coefficient(k: int, i: int, r: int) -> Fraction:
    """Coefficient of a weight-i word with r letters Z2 in V^k."""
    return Fraction((-1) ** r * factorial(r) * factorial(i - r), factorial(k) * factorial(i + 1))


def v_component(k: int, i: int) -> NCPoly:
    """Isobaric weight-i part V^k_i, from the closed coefficient formula."""
    if k < 0 or not 0 <= i <= 2 * k:
        raise ValueError(f"need 0 <= i <= 2k, got k={k}, i={i}")
    out = NCPoly()
    for r in range(0, k + 1):
        q = i - 2 * r
        p = k - q - r
        if q < 0 or p < 0:
            continue
        out = out + sigma_sym(p, q, r) * v_coefficient(k, i, r)
    return out


def eval_nc(p: NCPoly, a0, a1, a2, algebra):
    """Substitute ``Zi -> ai`` and multiply left to right in ``algebra``.

    ``algebra`` needs ``mul(x, y)`` and ``one()``; shared word prefixes are
    evaluated once.
    """
    args = (a0, a1, a2)
    one = algebra.one()
    cache: dict = {(): one}

    def prefix(w):
        if w not in cache:
            cache[w] = algebra.mul(prefix(w[:-1]), args[w[-1]])
        return cache[w]

    total = one * 0
    for w in sorted(p.terms, key=word_key):
        total = total + prefix(w) * p.terms[w]
    return total


# ---------------------------------------------------------------------------
# table rendering


def _fmt_coef(c: Fraction) -> str:
    return str(abs(c))


def render_component(k: int, i: int) -> str:
    """Table text: words of equal Z2-count grouped under one coefficient."""
    poly = v_component(k, i)
    groups: dict[int, list] = {}
    for w in poly.words():
        groups.setdefault(w.count(2), []).append(w)
    pieces = []
    for r in sorted(groups):
        ws = sorted(groups[r])
        c = poly.terms[ws[0]]
        body = " + ".join(word_str(w) for w in ws)
        if len(ws) > 1:
            body = f"({body})"
        mag = "" if abs(c) == 1 else _fmt_coef(c) + " "
        if not ws[0]:
            # the empty word is the constant 1
            mag, body = "", _fmt_coef(c)
        sign = "-" if c < 0 else "+"
        if not pieces:
            pieces.append(("-" if c < 0 else "") + mag + body)
        else:
            pieces.append(f"{sign} {mag}{body}")
    return f"V^{k}_{i} = " + (" ".join(pieces) if pieces else "0")


def vtable_text(k: int) -> str:
    return "\n".join(render_component(k, i) for i in range(2 * k + 1)) + "\n"


def vtable_json(k: int) -> list:
    rows = []
    for i in range(2 * k + 1):
        poly = v_component(k, i)
        for w in sorted(poly.terms):
            rows.append([i, word_str(w), str(poly.terms[w])])
    return rows


def parse_vtable_json(rows) -> dict[int, NCPoly]:
    out: dict[int, dict] = {}
    for i, w, c in rows:
        word = tuple(int(x) for x in w.split("Z")[1:]) if w != "1" else ()
        out.setdefault(int(i), {})[word] = Fraction(c)
    return {i: NCPoly(t) for i, t in out.items()}
