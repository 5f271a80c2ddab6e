"""Finite model instances.

The main family is ``A = Lambda(theta_1..theta_m, eta_1..eta_n) (x) End(V)`` for a
finite graded space V, with the inner structure ``d = [gamma, -]``,
``R = gamma^2`` for ``gamma = 1(x)delta + sum eta_b(x)h_b + sum theta_a(x)g_a``.
The ideal I is the part of positive theta-degree and B its theta-degree 0
complement.  The basis is ordered by (theta-degree, eta-degree, monomial,
matrix unit), so I and B are coordinate subspaces.

Optionally the theta generators carry a nilpotent Chevalley-Eilenberg
differential ``d theta_a = sum c theta_b theta_c``; then
``d = d_Lambda (x) 1 + [gamma, -]`` and ``R = d_Lambda(gamma) + gamma^2``, which
is no longer inner, so the cyclic complex A/[A,A] has a nonzero differential.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .convolution import DGLieAlgebra
from .curved import CurvedDGAlgebra, CurvedPair, TraceMap, inner_algebra
from .exactlin import Element, GradedSpace, Subspace, fmt_scalar, invert_matrix, parse_scalar

__all__ = ["GrassmannModelSpec", "Instance", "InstanceError", "build_grassmann_model",
           "supertrace", "random_spec", "random_instance", "parse_instance",
           "serialize_model", "serialize_generic", "instance_digest", "gl_lie",
           "abelian_lie", "corrupt_jacobi", "subalgebra_lie", "random_invertible_degree0",
           "conjugation_mc_matrix", "model_mc_element", "gl_element", "non_mc_element", "MAX_DIM"]

MAX_DIM = 200


class InstanceError(ValueError):
    """Invalid instance data; ``witness`` locates the violation."""

    def __init__(self, msg, witness=None):
        super().__init__(msg if witness is None else f"{msg}: {witness}")
        self.witness = witness


Matrix = list  # list of rows of Fractions


def _zeros(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)]


def _matsub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _is_zero(a):
    return all(not x for row in a for x in row)


def _first_nonzero(a):
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            if x:
                return [i, j]
    return None


@dataclass
class GrassmannModelSpec:
    m: int
    n: int
    V_degrees: list
    delta: Matrix
    g: list = field(default_factory=list)
    h: list = field(default_factory=list)
    theta_d: list = field(default_factory=list)   # entries [a, b, c, coef]: b < c

    def __post_init__(self):
        N = len(self.V_degrees)
        self.theta_d = [[int(a), int(b), int(c), parse_scalar(x)] for a, b, c, x in self.theta_d]
        self.V_degrees = [int(d) for d in self.V_degrees]
        self.delta = [[parse_scalar(x) for x in row] for row in self.delta]
        self.g = [[[parse_scalar(x) for x in row] for row in M] for M in self.g] or \
            [_zeros(N) for _ in range(self.m)]
        self.h = [[[parse_scalar(x) for x in row] for row in M] for M in self.h] or \
            [_zeros(N) for _ in range(self.n)]

    def validate(self):
        N = len(self.V_degrees)
        deg = self.V_degrees
        if self.m < 0 or self.n < 0:
            raise InstanceError("generator counts must be nonnegative")
        if len(self.g) != self.m or len(self.h) != self.n:
            raise InstanceError("need one g per theta and one h per eta")
        for name, mats in (("delta", [self.delta]), ("g", self.g), ("h", self.h)):
            for M in mats:
                if len(M) != N or any(len(r) != N for r in M):
                    raise InstanceError(f"{name} must be {N}x{N}")
        for p in range(N):
            for q in range(N):
                if self.delta[p][q] and deg[p] != deg[q] + 1:
                    raise InstanceError("delta is not of degree 1", {"entry": [p, q]})
                for a, M in enumerate(self.g):
                    if M[p][q] and deg[p] != deg[q]:
                        raise InstanceError("g is not of degree 0", {"g": a, "entry": [p, q]})
                for b, M in enumerate(self.h):
                    if M[p][q] and deg[p] != deg[q]:
                        raise InstanceError("h is not of degree 0", {"h": b, "entry": [p, q]})
        for a, b, c, x in self.theta_d:
            if not (0 <= a < self.m and 0 <= b < c < self.m):
                raise InstanceError("bad theta_d entry", {"entry": [a, b, c]})
        for a in range(self.m):
            dd_a = _lambda_d(_lambda_d({(a,): Fraction(1)}, self.theta_d), self.theta_d)
            if dd_a:
                raise InstanceError("theta_d does not square to zero", {"generator": a})
        dd = _matmul(self.delta, self.delta)
        if not _is_zero(dd):
            i, j = _first_nonzero(dd)
            raise InstanceError("delta^2 != 0", {"column": j, "image": [fmt_scalar(x) for x in
                                                                       (r[j] for r in dd)]})
        for b, M in enumerate(self.h):
            c = _matsub(_matmul(self.delta, M), _matmul(M, self.delta))
            if not _is_zero(c):
                raise InstanceError("[delta, h] != 0", {"h": b, "entry": _first_nonzero(c)})
            for b2 in range(b + 1, self.n):
                M2 = self.h[b2]
                c = _matsub(_matmul(M, M2), _matmul(M2, M))
                if not _is_zero(c):
                    raise InstanceError("[h_b, h_c] != 0", {"h": [b, b2], "entry": _first_nonzero(c)})

    def dim(self) -> int:
        return 2 ** (self.m + self.n) * len(self.V_degrees) ** 2

    def to_json(self) -> dict:
        def mat(M):
            return [[fmt_scalar(x) for x in row] for row in M]
        out = {"model": "grassmann", "theta": self.m, "eta": self.n,
               "V_degrees": list(self.V_degrees), "delta": mat(self.delta),
               "g": [mat(M) for M in self.g], "h": [mat(M) for M in self.h]}
        if self.theta_d:
            out["theta_d"] = [[a, b, c, fmt_scalar(x)] for a, b, c, x in self.theta_d]
        return out


@dataclass
class Instance:
    """A curved pair with optional split complement and trace map."""

    kind: str
    algebra: CurvedDGAlgebra
    pair: CurvedPair
    B: Subspace | None = None
    trace: TraceMap | None = None
    spec: GrassmannModelSpec | None = None
    generators: list | None = None
    json: dict | None = None

    @property
    def ideal(self) -> Subspace:
        return self.pair.ideal

    def digest(self) -> str:
        return instance_digest(self.json)

    def split(self):
        from .semireg import split_structure
        if self.B is None:
            raise InstanceError("instance has no split complement")
        if getattr(self, "_split", None) is None:
            self._split = split_structure(self.algebra, self.B, self.ideal)
        return self._split

    def theta_degree_part(self, k: int) -> Subspace:
        """Coordinate span of the basis vectors of theta-degree >= k (model only)."""
        sp = self.algebra.space
        return Subspace(sp, [sp.basis_vector(i) for i in range(sp.dim)
                             if self._theta_deg[i] >= k])


# ---------------------------------------------------------------------------
# Grassmann (x) End(V)


def _monomials(m: int, n: int) -> list[tuple]:
    gens_t = list(range(m))
    gens_e = list(range(m, m + n))
    out = []
    for dt in range(m + 1):
        for de in range(n + 1):
            for st in combinations(gens_t, dt):
                for se in combinations(gens_e, de):
                    out.append(st + se)
    return out


def _mono_label(M, m):
    if not M:
        return "1"
    return "".join(f"t{g + 1}" if g < m else f"e{g - m + 1}" for g in M)


def _mono_mul(M, N):
    """Product of Grassmann monomials: (sign, sorted union) or (0, None)."""
    if set(M) & set(N):
        return 0, None
    seq = list(M + N)
    sign = 1
    # count inversions (all generators are odd)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign, tuple(sorted(seq))


def _lambda_d(poly: dict, theta_d) -> dict:
    """Chevalley-Eilenberg differential on a Grassmann polynomial {monomial: coef}."""
    images: dict[int, dict] = {}
    for a, b, c, x in theta_d:
        images.setdefault(a, {})
        images[a][(b, c)] = images[a].get((b, c), 0) + x
    out: dict = {}
    for M, coef in poly.items():
        for pos, gen in enumerate(M):
            for quad, x in images.get(gen, {}).items():
                # d acts in place of gen; it has passed pos odd generators
                s1, left = _mono_mul(M[:pos], quad)
                if not s1:
                    continue
                s2, full = _mono_mul(left, M[pos + 1:])
                if not s2:
                    continue
                v = out.get(full, 0) + coef * x * s1 * s2 * (-1 if pos & 1 else 1)
                if v:
                    out[full] = v
                else:
                    out.pop(full, None)
    return out


def supertrace(f: Matrix, degrees: Sequence[int]) -> Fraction:
    """Alternating-sign trace of a graded endomorphism given as a matrix."""
    return sum((x * (-1 if degrees[p] & 1 else 1) for p, x in
                ((p, f[p][p]) for p in range(len(degrees)))), Fraction(0))


def build_grassmann_model(spec: GrassmannModelSpec, validate: bool = True) -> Instance:
    spec.validate()
    if spec.dim() > MAX_DIM:
        raise InstanceError(f"ambient dimension {spec.dim()} exceeds cap {MAX_DIM}")
    m, n = spec.m, spec.n
    vd = spec.V_degrees
    N = len(vd)
    monos = _monomials(m, n)
    mono_index = {M: a for a, M in enumerate(monos)}
    labels, degrees, theta_deg, keys = [], [], [], []
    for M in monos:
        for p in range(N):
            for q in range(N):
                labels.append(f"{_mono_label(M, m)}|E{p}{q}")
                degrees.append(len(M) + vd[p] - vd[q])
                theta_deg.append(sum(1 for g in M if g < m))
                keys.append((M, p, q))
    space = GradedSpace(labels, degrees)
    index = {k: i for i, k in enumerate(keys)}
    dim = space.dim
    table = [dict() for _ in range(dim)]
    for i, (M, p, q) in enumerate(keys):
        fdeg = vd[p] - vd[q]
        for N2 in monos:
            s, MN = _mono_mul(M, N2)
            if not s:
                continue
            sign = s * (-1 if (fdeg * len(N2)) & 1 else 1)
            for t in range(N):
                j = index[(N2, q, t)]
                table[i][j] = ((index[(MN, p, t)], Fraction(sign)),)
    unit = Element(space, {index[((), p, p)]: 1 for p in range(N)})

    def embed(M, mat):
        return Element(space, {index[(M, p, q)]: mat[p][q]
                               for p in range(N) for q in range(N) if mat[p][q]})

    gamma = embed((), spec.delta)
    for b in range(n):
        gamma = gamma + embed((m + b,), spec.h[b])
    for a in range(m):
        gamma = gamma + embed((a,), spec.g[a])
    A = inner_algebra(space, table, unit, gamma)
    if spec.theta_d:
        def base_d(v: Element) -> Element:
            out = Element(space)
            for i, c in v.c.items():
                M, p, q = keys[i]
                for M2, x in _lambda_d({M: c}, spec.theta_d).items():
                    out = out + Element(space, {index[(M2, p, q)]: x})
            return out
        d = [A.d_images[i] + base_d(space.basis_vector(i)) for i in range(dim)]
        A = CurvedDGAlgebra(space, table, unit, d, A.R + base_d(gamma))
    ideal = Subspace(space, [space.basis_vector(i) for i in range(dim) if theta_deg[i] >= 1])
    B = Subspace(space, [space.basis_vector(i) for i in range(dim) if theta_deg[i] == 0])
    pair = CurvedPair(A, ideal, validate=validate)
    # trace into Lambda(theta, eta) with zero differential
    lam = GradedSpace([_mono_label(M, m) for M in monos], [len(M) for M in monos])
    images = []
    for (M, p, q) in keys:
        images.append(Element(lam, {mono_index[M]: (-1 if vd[p] & 1 else 1)} if p == q else {}))
    lam_d = []
    for M in monos:
        img = _lambda_d({M: Fraction(1)}, spec.theta_d)
        lam_d.append(Element(lam, {mono_index[M2]: x for M2, x in img.items()}))
    trace = TraceMap(A, lam, images, lam_d)
    inst = Instance("grassmann", A, pair, B=B, trace=trace, spec=spec,
                    generators=[_mono_label((g,), m) for g in range(m + n)], json=spec.to_json())
    inst._theta_deg = theta_deg
    inst._keys = keys
    inst._index = index
    inst.gamma = gamma
    return inst


# ---------------------------------------------------------------------------
# random generation


def _left_null_basis(D: Matrix, rows: int) -> list[list[Fraction]]:
    """Basis of {y : y^T D = 0} for a rows x cols matrix D."""
    if not D or not D[0]:
        return [[Fraction(int(i == j)) for j in range(rows)] for i in range(rows)]
    cols = len(D[0])
    # solve D^T y = 0 by elimination on the cols x rows matrix D^T
    M = [[D[r][c] for r in range(rows)] for c in range(cols)]
    piv_cols = []
    r = 0
    for c in range(rows):
        p = next((i for i in range(r, cols) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(cols):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == cols:
            break
    free = [c for c in range(rows) if c not in piv_cols]
    basis = []
    for fc in free:
        y = [Fraction(0)] * rows
        y[fc] = Fraction(1)
        for i, pc in enumerate(piv_cols):
            y[pc] = -M[i][fc]
        basis.append(y)
    return basis


def _commutant_degree0(delta: Matrix, vd: Sequence[int]) -> list[Matrix]:
    """Basis of the degree-0 endomorphisms commuting with delta."""
    N = len(vd)
    slots = [(p, q) for p in range(N) for q in range(N) if vd[p] == vd[q]]
    # unknowns X[p][q] on slots; equations (delta X - X delta)[i][j] = 0
    space = GradedSpace([f"s{t}" for t in range(len(slots))], [0] * len(slots))
    eqs = []
    for i in range(N):
        for j in range(N):
            coeffs = {}
            for t, (p, q) in enumerate(slots):
                c = Fraction(0)
                if q == j:
                    c += delta[i][p]
                if p == i:
                    c -= delta[q][j]
                if c:
                    coeffs[t] = c
            if coeffs:
                eqs.append(coeffs)
    # kernel of the equation system
    from .exactlin import _kernel_basis
    eqspace = GradedSpace([f"q{r}" for r in range(max(len(eqs), 1))], [0] * max(len(eqs), 1))
    images = []
    for t in range(len(slots)):
        images.append(Element(eqspace, {r: e[t] for r, e in enumerate(eqs) if t in e}))
    ker = _kernel_basis(space, list(range(len(slots))), images)
    out = []
    for v in ker:
        X = _zeros(N)
        for t, c in v.c.items():
            p, q = slots[t]
            X[p][q] = c
        out.append(X)
    return out


def random_spec(seed: int, m: int = 1, n: int = 0, dims: Sequence[int] = (1, 1),
                coeff_bound: int = 2, h_mode: str = "zero", base: str = "none") -> GrassmannModelSpec:
    """Deterministic random model data; dims[j] = dimension of V in degree j.

    ``base="heisenberg"`` (needs m >= 3) adds d theta_m = c theta_1 theta_2.
    """
    rng = random.Random(seed)
    vd = [j for j, dj in enumerate(dims) for _ in range(dj)]
    N = len(vd)
    if 2 ** (m + n) * N * N > MAX_DIM:
        raise InstanceError(f"ambient dimension {2 ** (m + n) * N * N} exceeds cap {MAX_DIM}")
    starts = [sum(dims[:j]) for j in range(len(dims))]

    def rint(lo=-coeff_bound, hi=coeff_bound):
        return Fraction(rng.randint(lo, hi))

    delta = _zeros(N)
    prev = None
    for j in range(len(dims) - 1):
        r, c = dims[j + 1], dims[j]
        if prev is None:
            block = [[rint() for _ in range(c)] for _ in range(r)]
        else:
            null = _left_null_basis(prev, c)
            block = []
            for _ in range(r):
                row = [Fraction(0)] * c
                for y in null:
                    a = rint()
                    row = [x + a * z for x, z in zip(row, y)]
                block.append(row)
        for a in range(r):
            for b in range(c):
                delta[starts[j + 1] + a][starts[j] + b] = block[a][b]
        prev = block

    def rand_deg0():
        M = _zeros(N)
        for p in range(N):
            for q in range(N):
                if vd[p] == vd[q]:
                    M[p][q] = rint()
        return M

    g = [rand_deg0() for _ in range(m)]
    if h_mode == "zero":
        h = [_zeros(N) for _ in range(n)]
    elif h_mode == "commutant":
        basis = _commutant_degree0(delta, vd)
        Nmat = _zeros(N)
        for X in basis:
            a = rint()
            Nmat = [[x + a * y for x, y in zip(r1, r2)] for r1, r2 in zip(Nmat, X)]
        ident = [[Fraction(int(p == q)) for q in range(N)] for p in range(N)]
        h = []
        for _ in range(n):
            a0, a1 = rint(), rint()
            h.append([[a0 * ident[p][q] + a1 * Nmat[p][q] for q in range(N)] for p in range(N)])
    else:
        raise InstanceError(f"unknown h_mode {h_mode!r}")
    theta_d = []
    if base == "heisenberg":
        if m < 3:
            raise InstanceError("base 'heisenberg' needs m >= 3")
        theta_d = [[m - 1, 0, 1, Fraction(rng.choice([-2, -1, 1, 2]))]]
    elif base != "none":
        raise InstanceError(f"unknown base {base!r}")
    return GrassmannModelSpec(m, n, vd, delta, g, h, theta_d)


def random_instance(seed: int, m: int = 1, n: int = 0, dims: Sequence[int] = (1, 1),
                    coeff_bound: int = 2, h_mode: str = "zero", base: str = "none") -> Instance:
    return build_grassmann_model(random_spec(seed, m, n, dims, coeff_bound, h_mode, base))


# ---------------------------------------------------------------------------
# (de)serialization


def instance_digest(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def serialize_model(inst: Instance) -> dict:
    if inst.spec is None:
        raise InstanceError("not a model instance")
    return inst.spec.to_json()


def _vec_json(v: Element):
    return [[i, fmt_scalar(c)] for i, c in v.items()]


def serialize_generic(inst: Instance) -> dict:
    A = inst.algebra
    sp = A.space
    product = []
    for i in range(sp.dim):
        for j in sorted(A.table[i]):
            for k, c in A.table[i][j]:
                product.append([i, j, k, fmt_scalar(c)])
    d = []
    for i, img in enumerate(A.d_images):
        for j, c in img.items():
            d.append([i, j, fmt_scalar(c)])
    out = {"basis": [{"label": lab, "degree": deg} for lab, deg in zip(sp.labels, sp.degrees)],
           "product": product, "unit": _vec_json(A.unit), "d": d, "R": _vec_json(A.R),
           "ideal": [_vec_json(v) for v in inst.ideal.basis]}
    if inst.B is not None:
        out["split"] = [_vec_json(v) for v in inst.B.basis]
    return out


def _read_vectors(space, items, what):
    vecs = []
    for it in items:
        if isinstance(it, int):
            if not 0 <= it < space.dim:
                raise InstanceError(f"{what} index out of range", {"index": it})
            vecs.append(space.basis_vector(it))
        else:
            vecs.append(_read_vec(space, it, what))
    return vecs


def _read_vec(space, items, what):
    try:
        coeffs = {}
        for i, c in items:
            i = int(i)
            if not 0 <= i < space.dim:
                raise InstanceError(f"{what} index out of range", {"index": i})
            coeffs[i] = coeffs.get(i, 0) + parse_scalar(c)
        return Element(space, coeffs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(f"malformed vector in {what}: {exc}") from exc


def _parse_generic(obj: dict, validate: bool = True) -> Instance:
    for key in ("basis", "product", "unit", "d", "R", "ideal"):
        if key not in obj:
            raise InstanceError(f"missing field {key!r}")
    try:
        labels = [b["label"] for b in obj["basis"]]
        degrees = [int(b["degree"]) for b in obj["basis"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed basis: {exc}") from exc
    space = GradedSpace(labels, degrees)
    n = space.dim
    table = [dict() for _ in range(n)]
    acc: dict = {}
    for entry in obj["product"]:
        try:
            i, j, k, c = entry
            i, j, k, c = int(i), int(j), int(k), parse_scalar(c)
        except (TypeError, ValueError) as exc:
            raise InstanceError(f"malformed product entry {entry!r}") from exc
        if not all(0 <= x < n for x in (i, j, k)):
            raise InstanceError("product index out of range", {"entry": entry})
        acc.setdefault((i, j), {})
        acc[(i, j)][k] = acc[(i, j)].get(k, 0) + c
    for (i, j), v in acc.items():
        v = {k: c for k, c in v.items() if c}
        if v:
            table[i][j] = tuple(sorted(v.items()))
    unit = _read_vec(space, obj["unit"], "unit")
    d_acc = [dict() for _ in range(n)]
    for entry in obj["d"]:
        try:
            i, j, c = entry
            i, j, c = int(i), int(j), parse_scalar(c)
        except (TypeError, ValueError) as exc:
            raise InstanceError(f"malformed d entry {entry!r}") from exc
        if not (0 <= i < n and 0 <= j < n):
            raise InstanceError("d index out of range", {"entry": entry})
        d_acc[i][j] = d_acc[i].get(j, 0) + c
    d = [Element(space, x) for x in d_acc]
    R = _read_vec(space, obj["R"], "R")
    A = CurvedDGAlgebra(space, table, unit, d, R)
    if validate:
        from .curved import check_curved_axioms
        rep = check_curved_axioms(A)
        if not rep.ok:
            f = rep.first_failure()
            raise InstanceError(f"curved axiom {f.name} fails", f.witness)
    ideal = Subspace(space, _read_vectors(space, obj["ideal"], "ideal"))
    try:
        pair = CurvedPair(A, ideal, validate=validate)
    except ValueError as exc:
        raise InstanceError(str(exc)) from exc
    B = None
    if obj.get("split") is not None:
        B = Subspace(space, _read_vectors(space, obj["split"], "split"))
    return Instance("generic", A, pair, B=B, json=obj)


def parse_instance(source, validate: bool = True) -> Instance:
    """Load an instance from a path, a JSON string or an already-parsed dict."""
    if isinstance(source, dict):
        obj = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            try:
                text = Path(text).read_text()
            except OSError as exc:
                raise InstanceError(f"cannot read instance file: {exc}") from exc
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InstanceError("instance must be a JSON object")
    if obj.get("model") == "grassmann":
        try:
            spec = GrassmannModelSpec(int(obj["theta"]), int(obj["eta"]), obj["V_degrees"],
                                      obj["delta"], obj.get("g", []), obj.get("h", []),
                                      obj.get("theta_d", []))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InstanceError):
                raise
            raise InstanceError(f"malformed model: {exc}") from exc
        inst = build_grassmann_model(spec, validate=validate)
        inst.json = obj
        return inst
    if "model" in obj:
        raise InstanceError(f"unknown model {obj['model']!r}")
    return _parse_generic(obj, validate=validate)


# ---------------------------------------------------------------------------
# DG-Lie algebras used as sources


def gl_lie(W_degrees: Sequence[int], delta: Matrix | None = None) -> DGLieAlgebra:
    """gl(W) with the graded commutator and dbar = [delta_W, -]."""
    N = len(W_degrees)
    wd = list(W_degrees)
    labels, degrees, keys = [], [], []
    for p in range(N):
        for q in range(N):
            labels.append(f"E{p}{q}")
            degrees.append(wd[p] - wd[q])
            keys.append((p, q))
    space = GradedSpace(labels, degrees)
    idx = {k: i for i, k in enumerate(keys)}
    br = {}
    for i, (p, q) in enumerate(keys):
        for j, (r, s) in enumerate(keys):
            c = {}
            if q == r:
                c[idx[(p, s)]] = c.get(idx[(p, s)], 0) + 1
            if s == p:
                sign = -1 if (degrees[i] * degrees[j]) & 1 == 0 else 1
                c[idx[(r, q)]] = c.get(idx[(r, q)], 0) + sign
            v = Element(space, c)
            if v:
                br[(i, j)] = v
    if delta is None:
        delta = _zeros(N)
    dvec = Element(space, {idx[(p, q)]: delta[p][q] for p in range(N) for q in range(N)
                           if delta[p][q]})
    dbar = []
    for j in range(N * N):
        out = Element(space)
        for i, c in dvec.c.items():
            out = out + br.get((i, j), Element(space)) * c
        dbar.append(out)
    return DGLieAlgebra(space, br, dbar)


def abelian_lie(degrees: Sequence[int], dbar_entries: dict | None = None) -> DGLieAlgebra:
    """Abelian DG-Lie algebra; ``dbar_entries[(src, dst)] = coefficient``."""
    space = GradedSpace([f"a{i}" for i in range(len(degrees))], degrees)
    imgs = [dict() for _ in degrees]
    for (i, j), c in (dbar_entries or {}).items():
        imgs[i][j] = parse_scalar(c)
    return DGLieAlgebra(space, {}, [Element(space, x) for x in imgs])


def corrupt_jacobi(L: DGLieAlgebra, seed: int = 0) -> DGLieAlgebra:
    """Double one antisymmetric pair of structure constants so that Jacobi fails.

    Antisymmetry is kept.  Raises if no single rescaling breaks Jacobi.
    """
    keys = sorted({tuple(sorted(k)) for k in L.table})
    random.Random(seed).shuffle(keys)
    for i, j in keys:
        table = dict(L.table)
        for key in {(i, j), (j, i)}:
            if key in table:
                table[key] = table[key] * 2
        cand = DGLieAlgebra(L.space, table, L.dbar_images)
        rep = cand.check()
        if not next(c for c in rep.checks if c.name == "jacobi").ok:
            return cand
    raise ValueError("no structure constant whose rescaling breaks Jacobi")


def subalgebra_lie(A: CurvedDGAlgebra, basis: Sequence[Element], dbar) -> DGLieAlgebra:
    """DG-Lie structure on a graded Lie subalgebra spanned by RREF ``basis``.

    ``dbar`` maps a vector of A lying in the span to its image (also in the span).
    """
    sub = Subspace(A.space, list(basis))
    piv = [b.pivot() for b in basis]
    space = GradedSpace([A.space.labels[p] for p in piv], [b.degree() for b in basis])

    def coords(v):
        if not sub.contains(v):
            raise InstanceError("vector leaves the subalgebra", {"vector": repr(v)})
        return Element(space, {j: v[p] for j, p in enumerate(piv)})

    br = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            v = A.bracket(a, b)
            if v:
                br[(i, j)] = coords(v)
    return DGLieAlgebra(space, br, [coords(dbar(b)) for b in basis])


# ---------------------------------------------------------------------------
# Maurer-Cartan witnesses by conjugation: if D^2 = 0 then g D g^-1 - D is MC
# for the differential [D, -].


def random_invertible_degree0(degrees: Sequence[int], rng: random.Random,
                              bound: int = 2) -> tuple[Matrix, Matrix]:
    """Random invertible block-diagonal (degree 0) matrix and its inverse."""
    N = len(degrees)
    while True:
        g = _zeros(N)
        for p in range(N):
            for q in range(N):
                if degrees[p] == degrees[q]:
                    g[p][q] = Fraction(rng.randint(-bound, bound))
        try:
            return g, invert_matrix(g)
        except ValueError:
            continue


def conjugation_mc_matrix(delta: Matrix, degrees: Sequence[int], seed: int) -> Matrix:
    """x = g delta g^-1 - delta for a random degree 0 g; nonzero when possible."""
    rng = random.Random(seed)
    x = _zeros(len(degrees))
    for _ in range(50):
        g, gi = random_invertible_degree0(degrees, rng)
        x = _matsub(_matmul(_matmul(g, delta), gi), delta)
        if not _is_zero(x):
            break
    return x


def gl_element(L: DGLieAlgebra, mat: Matrix) -> Element:
    """Matrix -> element of ``gl_lie`` (basis E_pq in row-major order)."""
    N = len(mat)
    return Element(L.space, {p * N + q: mat[p][q] for p in range(N) for q in range(N)
                             if mat[p][q]})


def model_mc_element(inst: Instance, seed: int) -> Element:
    """Degree 1 element of B (as a vector of A) that is Maurer-Cartan for dbar.

    D is the theta-degree 0 part of gamma, which squares to zero, and dbar on B
    is [D, -]; conjugating D by a random invertible 1 (x) g gives the witness.
    """
    A = inst.algebra
    spec = inst.spec
    if spec is None:
        raise InstanceError("MC witnesses are built for model instances only")
    D = Element(A.space, {i: c for i, c in inst.gamma.c.items() if inst._theta_deg[i] == 0})
    rng = random.Random(seed)
    N = len(spec.V_degrees)

    def emb(mat):
        return Element(A.space, {inst._index[((), p, q)]: mat[p][q]
                                 for p in range(N) for q in range(N) if mat[p][q]})

    x = A.zero()
    for _ in range(50):
        g, gi = random_invertible_degree0(spec.V_degrees, rng)
        x = A.mul(A.mul(emb(g), D), emb(gi)) - D
        if x:
            break
    return x


def non_mc_element(L: DGLieAlgebra, seed: int, bound: int = 2) -> Element | None:
    """A random degree 1 element of L that fails the MC equation, if one is found."""
    rng = random.Random(seed)
    idx = [i for i, d in enumerate(L.space.degrees) if d == 1]
    if not idx:
        return None
    for _ in range(100):
        x = Element(L.space, {i: rng.randint(-bound, bound) for i in idx})
        if x and not L.is_mc(x):
            return x
    return None
