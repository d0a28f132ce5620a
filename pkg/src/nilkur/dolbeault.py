"""The finite-dimensional dbar-complex on (0,k)-forms with values in (1,0)-vectors.

``C^k`` has basis ``omegabar^P (x) e_q`` with ``P`` a strictly increasing
k-subset of ``1..N`` and ``q`` in ``1..N``, ordered lexicographically by
``(P, q)``. For degree 1 the coordinate of ``omegabar^p (x) e_q`` is written
``mu[p->q]``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from nilkur.algebra import AlgebraSpec
from nilkur.errors import InputError, InvariantViolation
from nilkur.exact import ONE, ZERO, GaussQ, Matrix, Poly, kernel_basis, orthogonal_projection, rank
from nilkur.exact.linalg import hermitian_solve, span_basis


class TensorBasis:
    """Ordered basis of ``C^k``."""

    def __init__(self, dim: int, degree: int):
        if not 0 <= degree <= dim + 1:
            raise InputError(f"degree {degree} out of range 0..{dim}")
        self.dim = dim
        self.degree = degree
        self.elements = [(P, q) for P in combinations(range(1, dim + 1), degree) for q in range(1, dim + 1)]
        self.index = {e: i for i, e in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def position(self, P: Iterable[int], q: int) -> int:
        return self.index[(tuple(P), q)]

    def label(self, i: int, n: int | None = None) -> str:
        P, q = self.elements[i]
        form = "^".join(f"wb{p}" for p in P) or "1"
        vec = f"T{q}" if n is not None and q <= n else (f"W{q}" if n is not None else f"e{q}")
        return f"{form}(x){vec}"


class VectorForm:
    """Element of ``C^k`` with polynomial coefficients."""

    __slots__ = ("degree", "dim", "nvars", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Sequence[object] | None = None, nvars: int = 0):
        size = len(_basis(dim, degree))
        if coeffs is None:
            coeffs = [Poly.zero(nvars)] * size
        if len(coeffs) != size:
            raise InputError(f"coefficient vector has length {len(coeffs)}, expected {size}")
        self.dim = dim
        self.degree = degree
        self.nvars = nvars
        self.coeffs = tuple(Poly.lift(c, nvars) for c in coeffs)

    @classmethod
    def from_terms(cls, dim: int, degree: int, terms: Mapping[tuple, object], nvars: int = 0) -> "VectorForm":
        """``terms`` maps ``(P, q)`` (or ``(p, q)`` in degree 1) to coefficients."""
        basis = _basis(dim, degree)
        coeffs = [Poly.zero(nvars)] * len(basis)
        for key, c in terms.items():
            P, q = key
            if isinstance(P, int):
                P = (P,)
            try:
                i = basis.position(P, q)
            except KeyError:
                raise InputError(f"no basis element omegabar^{P} (x) e_{q} in degree {degree}") from None
            coeffs[i] = coeffs[i] + Poly.lift(c, nvars)
        return cls(dim, degree, coeffs, nvars)

    @classmethod
    def from_vector(cls, dim: int, degree: int, vector: Sequence[object], nvars: int = 0) -> "VectorForm":
        return cls(dim, degree, [Poly.const(nvars, x) for x in vector], nvars)

    @property
    def basis(self) -> TensorBasis:
        return _basis(self.dim, self.degree)

    def _check(self, other):
        if (self.dim, self.degree, self.nvars) != (other.dim, other.degree, other.nvars):
            raise InputError("vector forms differ in dimension, degree or parameter ring")

    def __add__(self, other: "VectorForm") -> "VectorForm":
        self._check(other)
        return VectorForm(self.dim, self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.nvars)

    def __sub__(self, other: "VectorForm") -> "VectorForm":
        self._check(other)
        return VectorForm(self.dim, self.degree, [a - b for a, b in zip(self.coeffs, other.coeffs)], self.nvars)

    def __neg__(self):
        return VectorForm(self.dim, self.degree, [-a for a in self.coeffs], self.nvars)

    def scale(self, c) -> "VectorForm":
        return VectorForm(self.dim, self.degree, [a * c for a in self.coeffs], self.nvars)

    def __eq__(self, other):
        return isinstance(other, VectorForm) and (self.dim, self.degree, self.nvars, self.coeffs) == (
            other.dim, other.degree, other.nvars, other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.degree, self.nvars, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not self

    def coefficient(self, P, q) -> Poly:
        if isinstance(P, int):
            P = (P,)
        return self.coeffs[self.basis.position(P, q)]

    def map_coeffs(self, fn: Callable[[Poly], Poly], nvars: int | None = None) -> "VectorForm":
        nv = self.nvars if nvars is None else nvars
        return VectorForm(self.dim, self.degree, [fn(c) for c in self.coeffs], nv)

    def homogeneous_part(self, d: int) -> "VectorForm":
        return self.map_coeffs(lambda c: c.homogeneous_part(d))

    def truncate(self, d: int) -> "VectorForm":
        return self.map_coeffs(lambda c: c.truncate(d))

    def substitute(self, values: Mapping[int, object]) -> "VectorForm":
        return self.map_coeffs(lambda c: c.substitute(values))

    def evaluate(self, point: Sequence[object]) -> list:
        return [c.evaluate(point) for c in self.coeffs]

    def scalar_vector(self) -> list:
        return [c.to_scalar() for c in self.coeffs]

    def total_degree(self) -> int:
        return max((c.total_degree() for c in self.coeffs), default=-1)

    def format(self, n: int | None = None, names: Sequence[str] | None = None) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({c.format(names)}) {self.basis.label(i, n)}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"VectorForm(deg {self.degree}: {self.format()})"


_BASES: dict = {}


def _basis(dim: int, degree: int) -> TensorBasis:
    key = (dim, degree)
    b = _BASES.get(key)
    if b is None:
        b = _BASES[key] = TensorBasis(dim, degree)
    return b


def tensor_basis(spec: AlgebraSpec, k: int) -> TensorBasis:
    return _basis(spec.dim, k)


def generic_form(dim: int, degree: int = 1) -> VectorForm:
    """The form with one independent parameter per basis coordinate."""
    size = len(_basis(dim, degree))
    return VectorForm(dim, degree, [Poly.var(size, i) for i in range(size)], size)


def span_form(vectors: Sequence[Sequence[object]], dim: int, degree: int = 1) -> VectorForm:
    """``sum_k t_k v_k`` with one parameter per given coordinate vector."""
    nv = len(vectors)
    size = len(_basis(dim, degree))
    coeffs = [Poly.zero(nv)] * size
    for k, v in enumerate(vectors):
        t = Poly.var(nv, k)
        for i, x in enumerate(v):
            if x:
                coeffs[i] = coeffs[i] + t * x
    return VectorForm(dim, degree, coeffs, nv)


def apply_linear(matrix: Matrix, form: VectorForm, degree: int) -> VectorForm:
    """Apply a scalar matrix to a polynomial coefficient vector."""
    if matrix.ncols != len(form.coeffs):
        raise InputError("matrix does not act on this degree")
    by_mono: dict = {}
    for i, c in enumerate(form.coeffs):
        for e, x in c.terms.items():
            by_mono.setdefault(e, {})[i] = x
    out: list = [dict() for _ in range(matrix.nrows)]
    for e, sparse in by_mono.items():
        for r, row in enumerate(matrix.rows):
            s = ZERO
            for i, x in sparse.items():
                a = row[i]
                if a:
                    s = s + a * x
            if s:
                out[r][e] = s
    return VectorForm(form.dim, degree, [Poly._wrap(form.nvars, t) for t in out], form.nvars)


def apply_scalar_map(fn: Callable[[list], list], form: VectorForm, out_degree: int) -> VectorForm:
    """Apply a linear map on scalar vectors monomial by monomial."""
    by_mono: dict = {}
    size = len(form.coeffs)
    for i, c in enumerate(form.coeffs):
        for e, x in c.terms.items():
            by_mono.setdefault(e, [ZERO] * size)[i] = x
    out_size = len(_basis(form.dim, out_degree))
    out = [dict() for _ in range(out_size)]
    for e, vec in by_mono.items():
        for r, y in enumerate(fn(vec)):
            if y:
                out[r][e] = y
    return VectorForm(form.dim, out_degree, [Poly._wrap(form.nvars, t) for t in out], form.nvars)


# ---------------------------------------------------------------------------
# the differential


def dbar_matrix(spec: AlgebraSpec, k: int) -> Matrix:
    """Matrix of ``dbar: C^k -> C^(k+1)`` in the tensor bases."""
    N = spec.dim
    if not 0 <= k <= N:
        raise InputError(f"degree {k} out of range 0..{N}")
    src = _basis(N, k)
    dst = _basis(N, k + 1)
    rows = [[ZERO] * len(src) for _ in range(len(dst))]
    outer = -1 if k % 2 else 1
    for col, (P, j) in enumerate(src):
        if j > spec.n:
            continue
        for kp in spec.noncentral:
            if kp in P:
                continue
            above = sum(1 for p in P if p > kp)
            sign = outer * (-1 if above % 2 else 1)
            newP = tuple(sorted(P + (kp,)))
            for alpha in spec.central:
                e = spec.e(alpha, kp, j)
                if e:
                    r = dst.position(newP, alpha)
                    rows[r][col] = rows[r][col] + (e if sign > 0 else -e)
    return Matrix(rows, len(src))


def closedness_conditions(spec: AlgebraSpec, mu: VectorForm) -> list:
    """Componentwise closedness equations of a degree-1 form.

    One polynomial per ``(j < k, alpha)`` and per ``(j, alpha, beta)``;
    identically zero ones are dropped.
    """
    return _linear_conditions(spec, mu, spec.e)


def _linear_conditions(spec: AlgebraSpec, mu: VectorForm, const) -> list:
    if mu.degree != 1:
        raise InputError("closedness conditions need a degree-1 form")
    nv = mu.nvars
    c = lambda p, q: mu.coefficient(p, q)
    out = []
    ts = list(spec.noncentral)
    for j in ts:
        for k in ts:
            if j >= k:
                continue
            for alpha in spec.central:
                s = Poly.zero(nv)
                for i in ts:
                    a, b = const(alpha, k, i), const(alpha, j, i)
                    if a:
                        s = s + c(j, i) * a
                    if b:
                        s = s - c(k, i) * b
                if s:
                    out.append(s)
    for j in ts:
        for alpha in spec.central:
            for beta in spec.central:
                s = Poly.zero(nv)
                for i in ts:
                    a = const(beta, j, i)
                    if a:
                        s = s + c(alpha, i) * a
                if s:
                    out.append(s)
    return out


# ---------------------------------------------------------------------------
# the complex with its metric


def tensor_weights(spec: AlgebraSpec, k: int, metric: str = "standard") -> list:
    """Diagonal Gram entries of the tensor basis in degree ``k``."""
    basis = _basis(spec.dim, k)
    if metric == "standard":
        return [ONE] * len(basis)
    if metric != "perturbed":
        raise InputError(f"unknown metric {metric!r}")
    out = []
    for P, q in basis:
        w = 1
        for idx in P + (q,):
            if idx > spec.n:
                w *= 2
        out.append(GaussQ(w))
    return out


def _first_one(v):
    lead = next((x for x in v if x), None)
    if lead is None or lead == ONE:
        return list(v)
    inv = lead.inverse()
    return [x * inv for x in v]


class DolbeaultComplex:
    """Matrices, adjoints, Laplacians and harmonic spaces of the dbar-complex."""

    def __init__(self, spec: AlgebraSpec, metric: str = "standard"):
        self.spec = spec
        self.dim = spec.dim
        self.metric = metric
        self._cache: dict = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def size(self, k: int) -> int:
        if k < 0 or k > self.dim:
            return 0
        return len(_basis(self.dim, k))

    def basis(self, k: int) -> TensorBasis:
        return _basis(self.dim, k)

    def weights(self, k: int) -> list:
        return self._memo(("w", k), lambda: tensor_weights(self.spec, k, self.metric) if 0 <= k <= self.dim else [])

    def D(self, k: int) -> Matrix:
        """``dbar_k``; degrees outside ``0..N`` give zero maps."""
        def build():
            if 0 <= k <= self.dim:
                return dbar_matrix(self.spec, k)
            return Matrix.zeros(self.size(k + 1), self.size(k))
        return self._memo(("D", k), build)

    def adjoint(self, k: int) -> Matrix:
        """Adjoint of ``D_(k-1)``, a map ``C^k -> C^(k-1)``."""
        def build():
            d = self.D(k - 1)
            if d.nrows == 0 or d.ncols == 0:
                return Matrix.zeros(d.ncols, d.nrows)
            g_src = self.weights(k - 1)
            g_dst = self.weights(k)
            h = d.H.scale_cols(g_dst)
            return h.scale_rows([w.inverse() for w in g_src])
        return self._memo(("A", k), build)

    def laplacian(self, k: int) -> Matrix:
        def build():
            n = self.size(k)
            total = Matrix.zeros(n, n)
            if k >= 1:
                total = total + self.D(k - 1) @ self.adjoint(k)
            if k + 1 <= self.dim:
                total = total + self.adjoint(k + 1) @ self.D(k)
            return total
        return self._memo(("L", k), build)

    def kernel(self, k: int) -> list:
        return self._memo(("ker", k), lambda: kernel_basis(self.D(k)) if self.size(k + 1) else _identity(self.size(k)))

    def image(self, k: int) -> list:
        """Basis of ``im D_(k-1)`` inside ``C^k``."""
        def build():
            d = self.D(k - 1)
            if d.ncols == 0:
                return []
            return span_basis(d.columns(), d.nrows)
        return self._memo(("im", k), build)

    def harmonic_basis(self, k: int) -> list:
        """Basis of ``ker D_k`` intersected with ``ker D_(k-1)^*``."""
        def build():
            rows = list(self.D(k).rows) + (list(self.adjoint(k).rows) if k >= 1 else [])
            if not rows:
                return _identity(self.size(k))
            return [_first_one(v) for v in kernel_basis(Matrix(rows, self.size(k)))]
        return self._memo(("harm", k), build)

    def harmonic_by_complement(self, k: int) -> list:
        """The same space as the orthogonal complement of the image inside the kernel."""
        ker = self.kernel(k)
        img = self.image(k)
        if not ker:
            return []
        w = self.weights(k)
        # x = sum c_i ker_i with <x, img_j> = 0
        cons = [[sum((kv[t] * w[t] * iv[t].conjugate() for t in range(len(kv)) if kv[t] and iv[t]), ZERO)
                 for kv in ker] for iv in img]
        if not cons:
            return [list(v) for v in ker]
        out = []
        for c in kernel_basis(Matrix(cons, len(ker))):
            v = [ZERO] * self.size(k)
            for ci, kv in zip(c, ker):
                if ci:
                    v = [a + ci * b for a, b in zip(v, kv)]
            out.append(v)
        return out

    def laplacian_kernel(self, k: int) -> list:
        lap = self.laplacian(k)
        if lap.nrows == 0:
            return []
        return kernel_basis(lap)

    def cohomology_dim(self, k: int) -> int:
        return len(self.harmonic_basis(k))

    def betti(self, k: int) -> int:
        """``dim ker D_k - rank D_(k-1)``, computed without the metric."""
        return len(self.kernel(k)) - len(self.image(k))

    def harmonic_projection(self, k: int, y: Sequence[GaussQ]) -> list:
        return orthogonal_projection(self.harmonic_basis(k), y, self.weights(k))

    def green(self, k: int, y: Sequence[GaussQ]) -> list:
        """``x`` orthogonal to the harmonic space with ``Delta x = y - H(y)``."""
        return hermitian_solve(self.laplacian(k), list(y), self.weights(k))

    def inner(self, k: int, u, v) -> GaussQ:
        w = self.weights(k)
        s = ZERO
        for a, b, c in zip(u, v, w):
            if a and b:
                s = s + c * a * b.conjugate()
        return s

    def forms(self, k: int, vectors) -> list:
        return [VectorForm.from_vector(self.dim, k, v) for v in vectors]


def _identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


class Cohomology:
    """Dimension and harmonic representatives in one degree."""

    def __init__(self, dim: int, harmonic_basis: list):
        self.dim = dim
        self.harmonic_basis = harmonic_basis

    def __repr__(self):
        return f"Cohomology(dim={self.dim})"


def cohomology(spec: AlgebraSpec, k: int, metric: str = "standard", complex_: DolbeaultComplex | None = None) -> Cohomology:
    if not 0 <= k <= spec.dim:
        raise InputError(f"degree {k} out of range 0..{spec.dim}")
    cx = complex_ or DolbeaultComplex(spec, metric)
    basis = cx.harmonic_basis(k)
    if len(basis) != cx.betti(k):
        raise InvariantViolation("harmonic space does not match kernel modulo image")
    return Cohomology(len(basis), cx.forms(k, basis))


def dim_ker_dbar1(spec: AlgebraSpec) -> int:
    if spec.dim < 1:
        return 0
    return spec.dim * spec.dim - rank(dbar_matrix(spec, 1))


def generic_d(spec: AlgebraSpec, h0: int, h1: int) -> int:
    return spec.dim - h0 + h1
