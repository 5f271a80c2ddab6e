"""Exact rational linear algebra over graded vector spaces.

Everything here works with :class:`fractions.Fraction` coefficients; there is
no floating point anywhere in the package.  Vectors are sparse maps from basis
index to coefficient.  Subspaces are kept in canonical reduced row echelon form
(pivot = leftmost nonzero coordinate), so the normal form of a vector modulo a
subspace is a canonical representative of its class in the quotient.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

__all__ = [
    "GradedSpace",
    "Element",
    "Subspace",
    "QuotientMap",
    "Complex",
    "SubQuotient",
    "koszul_sign",
    "unshuffles",
    "normalize_tuple",
    "span_reduce",
    "cohomology",
    "fmt_scalar",
    "parse_scalar",
    "solve_in_span",
    "invert_matrix",
]


def parse_scalar(s) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise TypeError(f"cannot read scalar from {s!r}")


def fmt_scalar(c: Fraction) -> str:
    # str(Fraction) already gives "p/q", or "p" when q == 1
    return str(Fraction(c))


class GradedSpace:
    """Finite graded vector space with an ordered, labelled homogeneous basis."""

    def __init__(self, labels: Sequence[str], degrees: Sequence[int]):
        if len(labels) != len(degrees):
            raise ValueError("labels and degrees differ in length")
        if len(set(labels)) != len(labels):
            raise ValueError("basis labels must be unique")
        self.labels = tuple(labels)
        self.degrees = tuple(int(d) for d in degrees)
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self._index[label]

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def indices_of_degree(self, n: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == n]

    def zero(self) -> "Element":
        return Element(self)

    def basis_vector(self, i: int, c=1) -> "Element":
        return Element._raw(self, {i: Fraction(c)})

    def vector(self, coeffs: dict) -> "Element":
        return Element(self, coeffs)

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, GradedSpace) and self.labels == other.labels
                and self.degrees == other.degrees)

    def __hash__(self):
        return hash((self.labels, self.degrees))

    def __repr__(self):
        return f"GradedSpace(dim={self.dim})"


class Element:
    """Sparse vector in a :class:`GradedSpace`; treated as immutable."""

    __slots__ = ("space", "c")

    def __init__(self, space: GradedSpace, coeffs: dict | None = None):
        self.space = space
        c = {}
        if coeffs:
            for i, v in coeffs.items():
                v = Fraction(v)
                if v:
                    if not 0 <= i < space.dim:
                        raise IndexError(f"basis index {i} out of range")
                    c[i] = v
        self.c = c

    @classmethod
    def _raw(cls, space, c):
        # c must already be a dict of nonzero Fractions
        e = cls.__new__(cls)
        e.space = space
        e.c = c
        return e

    def _check(self, other):
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.space is not self.space and other.space != self.space:
            raise ValueError("elements live in different spaces")

    def __add__(self, other):
        self._check(other)
        c = dict(self.c)
        for i, v in other.c.items():
            w = c.get(i, 0) + v
            if w:
                c[i] = w
            else:
                c.pop(i, None)
        return Element._raw(self.space, c)

    def __sub__(self, other):
        self._check(other)
        c = dict(self.c)
        for i, v in other.c.items():
            w = c.get(i, 0) - v
            if w:
                c[i] = w
            else:
                c.pop(i, None)
        return Element._raw(self.space, c)

    def __neg__(self):
        return Element._raw(self.space, {i: -v for i, v in self.c.items()})

    def __mul__(self, s):
        if isinstance(s, Element):
            return NotImplemented
        s = Fraction(s)
        if not s:
            return Element._raw(self.space, {})
        return Element._raw(self.space, {i: v * s for i, v in self.c.items()})

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1 / Fraction(s))

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.space == other.space and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __bool__(self):
        return bool(self.c)

    def __getitem__(self, i):
        return self.c.get(i, Fraction(0))

    def items(self):
        return sorted(self.c.items())

    def support(self):
        return sorted(self.c)

    def degree(self):
        """Common degree of the nonzero coefficients, or None if inhomogeneous.

        The zero vector has no well-defined degree and also returns None.
        """
        degs = {self.space.degrees[i] for i in self.c}
        if len(degs) == 1:
            return degs.pop()
        return None

    def homogeneous_parts(self) -> dict[int, "Element"]:
        parts: dict[int, dict] = {}
        for i, v in self.c.items():
            parts.setdefault(self.space.degrees[i], {})[i] = v
        return {d: Element._raw(self.space, c) for d, c in parts.items()}

    def pivot(self):
        return min(self.c) if self.c else None

    def to_json(self):
        return [[i, fmt_scalar(v)] for i, v in self.items()]

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i, v in self.items():
            terms.append(f"{fmt_scalar(v)}*{self.space.labels[i]}")
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# Koszul signs and unshuffles


def koszul_sign(shifted_degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Symmetric Koszul sign of a permutation.

    ``perm`` is 0-based: the reordered word is ``x[perm[0]], ..., x[perm[n-1]]``
    and the result ``e`` satisfies ``x[perm[0]]...x[perm[n-1]] = e * x[0]...x[n-1]``
    in the graded symmetric algebra where ``x[i]`` has degree
    ``shifted_degrees[i]``.
    """
    n = len(perm)
    if n != len(shifted_degrees):
        raise ValueError("degrees and permutation differ in length")
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm!r} is not a permutation of range({n})")
    odd = 0
    for a in range(n):
        pa = perm[a]
        if not shifted_degrees[pa] & 1:
            continue
        for b in range(a + 1, n):
            pb = perm[b]
            if pa > pb and shifted_degrees[pb] & 1:
                odd ^= 1
    return -1 if odd else 1


def unshuffles(i: int, j: int) -> list[tuple[int, ...]]:
    """All (i, j)-unshuffles of range(i + j), 0-based."""
    if i < 0 or j < 0:
        raise ValueError("unshuffle sizes must be nonnegative")
    n = i + j
    out = []
    for first in combinations(range(n), i):
        rest = tuple(k for k in range(n) if k not in first)
        out.append(first + rest)
    return out


def normalize_tuple(seq: Sequence[int], shifted_parity: Sequence[int]):
    """Sort a word in the graded symmetric algebra on a basis.

    Returns ``(sign, sorted_tuple)`` with ``word = sign * sorted_tuple``, or
    ``(0, None)`` when the word vanishes because an odd basis element repeats.
    ``shifted_parity[b]`` is the parity of the (shifted) degree of basis ``b``.
    """
    seq = list(seq)
    sign = 1
    # insertion sort tracking the sign of each adjacent swap
    for a in range(1, len(seq)):
        b = a
        while b > 0 and seq[b - 1] > seq[b]:
            if shifted_parity[seq[b - 1]] and shifted_parity[seq[b]]:
                sign = -sign
            seq[b - 1], seq[b] = seq[b], seq[b - 1]
            b -= 1
    for a in range(1, len(seq)):
        if seq[a] == seq[a - 1] and shifted_parity[seq[a]]:
            return 0, None
    return sign, tuple(seq)


# ---------------------------------------------------------------------------
# Subspaces in reduced row echelon form


class Subspace:
    """Subspace of a graded space, stored as a canonical reduced echelon basis."""

    def __init__(self, ambient: GradedSpace, rows: list[Element] | None = None):
        self.ambient = ambient
        self.rows: list[Element] = []
        self._by_pivot: dict[int, Element] = {}
        for v in rows or ():
            self._insert(v)
        self.rows.sort(key=lambda r: r.pivot())

    def _insert(self, v: Element) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = r.pivot()
        r = r * (1 / r.c[p])
        for q, row in list(self._by_pivot.items()):
            coef = row.c.get(p)
            if coef:
                new = row - r * coef
                self._by_pivot[q] = new
        self._by_pivot[p] = r
        self.rows = list(self._by_pivot.values())
        return True

    @property
    def dim(self) -> int:
        return len(self._by_pivot)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._by_pivot)

    @property
    def basis(self) -> list[Element]:
        return [self._by_pivot[p] for p in self.pivots]

    def complement_indices(self) -> list[int]:
        piv = self._by_pivot
        return [i for i in range(self.ambient.dim) if i not in piv]

    def reduce(self, v: Element) -> Element:
        """Normal form of ``v`` modulo this subspace (zero at every pivot)."""
        if v.space != self.ambient:
            raise ValueError("vector not in the ambient space of the subspace")
        c = dict(v.c)
        for p in [p for p in v.c if p in self._by_pivot]:
            coef = v.c[p]
            for i, x in self._by_pivot[p].c.items():
                w = c.get(i, 0) - coef * x
                if w:
                    c[i] = w
                else:
                    c.pop(i, None)
        return Element._raw(self.ambient, c)

    def contains(self, v: Element) -> bool:
        return not self.reduce(v)

    def coords(self, v: Element) -> list[Fraction]:
        """Coordinates of ``v`` in the echelon basis; ``v`` must lie in the span."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return [v[p] for p in self.pivots]

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient != self.ambient:
            raise ValueError("subspaces of different spaces")
        return Subspace(self.ambient, self.basis + other.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.pivots == other.pivots
                and all(self._by_pivot[p] == other._by_pivot[p] for p in self.pivots))

    def is_graded(self) -> bool:
        return all(r.degree() is not None for r in self.rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.ambient.dim})"


def span_reduce(vectors: Iterable[Element], ambient: GradedSpace | None = None) -> Subspace:
    vectors = list(vectors)
    if ambient is None:
        if not vectors:
            raise ValueError("need an ambient space for an empty list")
        ambient = vectors[0].space
    for v in vectors:
        if v.space != ambient:
            raise ValueError("vectors from different ambient spaces")
    return Subspace(ambient, vectors)


class QuotientMap:
    """Projection ``ambient -> ambient / kernel`` in canonical coordinates.

    Quotient coordinates are the coefficients at the non-pivot positions of the
    kernel's echelon basis; the section sends coordinate ``j`` back to the
    corresponding standard basis vector.
    """

    def __init__(self, kernel: Subspace):
        self.kernel = kernel
        self.ambient = kernel.ambient
        self.complement = kernel.complement_indices()
        self._pos = {i: j for j, i in enumerate(self.complement)}
        self.space = GradedSpace([self.ambient.labels[i] for i in self.complement],
                                 [self.ambient.degrees[i] for i in self.complement])

    @property
    def dim(self) -> int:
        return len(self.complement)

    def normal_form(self, v: Element) -> Element:
        return self.kernel.reduce(v)

    def project(self, v: Element) -> Element:
        r = self.kernel.reduce(v)
        return Element._raw(self.space, {self._pos[i]: x for i, x in r.c.items()})

    def section(self, q: Element) -> Element:
        return Element._raw(self.ambient, {self.complement[j]: x for j, x in q.c.items()})

    def is_zero(self, v: Element) -> bool:
        return self.kernel.contains(v)


# ---------------------------------------------------------------------------
# Cochain complexes and cohomology


class Complex:
    """Finite cochain complex: graded basis plus a degree +1 differential.

    ``d`` maps a basis index to an :class:`Element` of ``space``.
    """

    def __init__(self, space: GradedSpace, d: Sequence[Element]):
        if len(d) != space.dim:
            raise ValueError("differential needs one image per basis vector")
        for i, img in enumerate(d):
            if img and img.degree() != space.degrees[i] + 1:
                raise ValueError(f"differential does not raise degree on basis {i}")
        self.space = space
        self.d = list(d)

    def apply(self, v: Element) -> Element:
        out: dict = {}
        for i, x in v.c.items():
            for j, y in self.d[i].c.items():
                w = out.get(j, 0) + x * y
                if w:
                    out[j] = w
                else:
                    out.pop(j, None)
        return Element._raw(self.space, out)

    def check_square_zero(self):
        """Return the first basis index with d(d(e)) != 0, or None."""
        for i in range(self.space.dim):
            if self.apply(self.d[i]):
                return i
        return None


def _kernel_basis(space: GradedSpace, cols: list[int], images: list[Element]) -> list[Element]:
    """Basis of the kernel of the linear map e_{cols[j]} -> images[j]."""
    # Gaussian elimination on the augmented rows [image | unit vector]
    n = len(cols)
    aug = []
    for j in range(n):
        aug.append((dict(images[j].c), {j: Fraction(1)}))
    pivots: dict[int, tuple[dict, dict]] = {}
    kernel = []
    for img, tag in aug:
        img = dict(img)
        tag = dict(tag)
        while img:
            p = min(img)
            if p not in pivots:
                break
            prow, ptag = pivots[p]
            coef = img[p] / prow[p]
            for i, x in prow.items():
                w = img.get(i, 0) - coef * x
                if w:
                    img[i] = w
                else:
                    img.pop(i, None)
            for i, x in ptag.items():
                w = tag.get(i, 0) - coef * x
                if w:
                    tag[i] = w
                else:
                    tag.pop(i, None)
        if img:
            pivots[min(img)] = (img, tag)
        else:
            kernel.append(Element(space, {cols[j]: x for j, x in tag.items()}))
    return kernel


def cohomology(cx: Complex) -> dict[int, tuple[int, list[Element]]]:
    """Per degree n: (dim H^n, cocycle representatives of a basis of H^n)."""
    bad = cx.check_square_zero()
    if bad is not None:
        raise ValueError(f"d^2 != 0 on basis vector {cx.space.labels[bad]}")
    out = {}
    degs = sorted(set(cx.space.degrees))
    for n in degs:
        cols = cx.space.indices_of_degree(n)
        ker = _kernel_basis(cx.space, cols, [cx.d[i] for i in cols])
        prev = cx.space.indices_of_degree(n - 1)
        im = Subspace(cx.space, [cx.d[i] for i in prev])
        reps = []
        acc = Subspace(cx.space, im.basis)
        for z in Subspace(cx.space, ker).basis:
            if acc._insert(z):
                reps.append(z)
        out[n] = (len(reps), reps)
    return out


def solve_in_span(vectors: Sequence[Element], target: Element):
    """Coefficients ``c`` with ``sum c_j vectors[j] == target``, or None."""
    space = target.space
    pivots: dict[int, tuple[dict, dict]] = {}
    for j, v in enumerate(vectors):
        img, tag = dict(v.c), {j: Fraction(1)}
        while img:
            p = min(img)
            if p not in pivots:
                break
            prow, ptag = pivots[p]
            coef = img[p] / prow[p]
            for i, x in prow.items():
                w = img.get(i, 0) - coef * x
                if w:
                    img[i] = w
                else:
                    img.pop(i, None)
            for i, x in ptag.items():
                w = tag.get(i, 0) - coef * x
                if w:
                    tag[i] = w
                else:
                    tag.pop(i, None)
        if img:
            pivots[min(img)] = (img, tag)
    res, sol = dict(target.c), {}
    while res:
        p = min(res)
        if p not in pivots:
            return None
        prow, ptag = pivots[p]
        coef = res[p] / prow[p]
        for i, x in prow.items():
            w = res.get(i, 0) - coef * x
            if w:
                res[i] = w
            else:
                res.pop(i, None)
        for i, x in ptag.items():
            sol[i] = sol.get(i, 0) + coef * x
    out = [Fraction(0)] * len(vectors)
    for i, x in sol.items():
        out[i] = x
    assert space == target.space
    return out


def invert_matrix(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse of a square rational matrix."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


class SubQuotient:
    """The graded space ``U / K`` for subspaces ``K <= U`` of one ambient space.

    Its basis is the echelon basis of the normal forms of ``U`` modulo ``K``,
    so classes are compared through canonical representatives.
    """

    def __init__(self, numerator: Subspace, denominator: Subspace):
        if not numerator.contains_subspace(denominator):
            raise ValueError("denominator is not contained in numerator")
        self.numerator = numerator
        self.denominator = denominator
        self.ambient = numerator.ambient
        w = Subspace(self.ambient, [denominator.reduce(u) for u in numerator.basis])
        self.basis = w.basis
        self._w = w
        degs = []
        for b in self.basis:
            deg = b.degree()
            if deg is None:
                raise ValueError("subquotient of non-graded subspaces")
            degs.append(deg)
        self.space = GradedSpace([f"w{j}" for j in range(len(self.basis))], degs)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, v: Element) -> Element:
        nf = self.denominator.reduce(v)
        if not self._w.contains(nf):
            raise ValueError("vector does not lie in the numerator subspace")
        return Element(self.space, {j: nf[b.pivot()] for j, b in enumerate(self.basis)})

    def to_ambient(self, q: Element) -> Element:
        out = Element(self.ambient)
        for j, x in q.c.items():
            out = out + self.basis[j] * x
        return out

    def complex(self, d: Callable[[Element], Element]) -> Complex:
        """Induced complex, for a degree +1 map ``d`` preserving both subspaces."""
        return Complex(self.space, [self.coords(d(b)) for b in self.basis])
