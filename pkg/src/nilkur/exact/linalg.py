"""Exact linear algebra over Q(i): elimination, kernels, complements, solves.

Vectors are plain lists of :class:`GaussQ`. Elimination is Gauss-Jordan in
exact arithmetic on sparse rows; the pivot in each column is the first
remaining row (in row order) with a nonzero entry, so every result is
reproducible.
"""

from __future__ import annotations

from typing import Sequence

from nilkur.errors import InputError, InvariantViolation
from nilkur.exact.gaussian import ONE, ZERO, GaussQ

Vector = list


class Matrix:
    """Dense immutable matrix with Gaussian-rational entries."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows: Sequence[Sequence[object]], ncols: int | None = None):
        data = tuple(tuple(GaussQ.coerce(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise InputError("cannot infer column count of an empty matrix")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise InputError("ragged matrix rows")
        self.nrows = len(data)
        self.ncols = ncols
        self.rows = data

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[ZERO] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[GaussQ]], nrows: int) -> "Matrix":
        return cls([[c[i] for c in columns] for i in range(nrows)], len(columns))

    @classmethod
    def diagonal(cls, entries: Sequence[object]) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return [r[j] for r in self.rows]

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def H(self) -> "Matrix":
        """Conjugate transpose."""
        return Matrix([[self.rows[i][j].conjugate() for i in range(self.nrows)] for j in range(self.ncols)], self.nrows)

    @property
    def T(self) -> "Matrix":
        return Matrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.nrows)

    def apply(self, v: Sequence[GaussQ]) -> Vector:
        if len(v) != self.ncols:
            raise InputError(f"vector length {len(v)} != {self.ncols}")
        nz = [(j, x) for j, x in enumerate(v) if x]
        out = []
        for r in self.rows:
            s = ZERO
            for j, x in nz:
                a = r[j]
                if a:
                    s = s + a * x
            out.append(s)
        return out

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise InputError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = [self.apply(c) for c in other.columns()]
            return Matrix.from_columns(cols, self.nrows) if cols else Matrix.zeros(self.nrows, 0)
        return self.apply(other)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise InputError("shape mismatch in matrix sum")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def scale_rows(self, weights: Sequence[object]) -> "Matrix":
        return Matrix([[w * x for x in r] for w, r in zip(weights, self.rows)], self.ncols)

    def scale_cols(self, weights: Sequence[object]) -> "Matrix":
        return Matrix([[x * w for x, w in zip(r, weights)] for r in self.rows], self.ncols)

    def stack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise InputError("column mismatch in stack")
        return Matrix(self.rows + other.rows, self.ncols)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: {body})"


def _as_matrix(m) -> Matrix:
    return m if isinstance(m, Matrix) else Matrix(m)


def rref(m) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form as sparse rows ``{col: value}`` and pivot columns."""
    m = _as_matrix(m)
    rows = [{j: x for j, x in enumerate(r) if x} for r in m.rows]
    rows = [r for r in rows if r]
    pivots: list[int] = []
    done: list[dict] = []
    for col in range(m.ncols):
        k = next((i for i, r in enumerate(rows) if col in r), None)
        if k is None:
            continue
        prow = rows.pop(k)
        inv = prow[col].inverse()
        prow = {j: x * inv for j, x in prow.items()}
        for group in (rows, done):
            for idx, r in enumerate(group):
                f = r.get(col)
                if f is None:
                    continue
                new = dict(r)
                for j, x in prow.items():
                    v = new.get(j, ZERO) - f * x
                    if v:
                        new[j] = v
                    else:
                        new.pop(j, None)
                group[idx] = new
        rows = [r for r in rows if r]
        done.append(prow)
        pivots.append(col)
    return done, pivots


def rank(m) -> int:
    return len(rref(m)[1])


def kernel_basis(m) -> list[Vector]:
    """Basis of the null space, one vector per free column (free entry = 1)."""
    m = _as_matrix(m)
    reduced, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = [ZERO] * m.ncols
        v[free] = ONE
        for r, p in zip(reduced, pivots):
            x = r.get(free)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


def solve(m, y: Sequence[GaussQ]) -> Vector | None:
    """One solution of ``m x = y`` (free variables zero), or ``None``."""
    m = _as_matrix(m)
    if len(y) != m.nrows:
        raise InputError("right-hand side length mismatch")
    aug = Matrix([list(r) + [b] for r, b in zip(m.rows, y)], m.ncols + 1)
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [ZERO] * m.ncols
    for r, p in zip(reduced, pivots):
        x[p] = r.get(m.ncols, ZERO)
    return x


def inner(u: Sequence[GaussQ], v: Sequence[GaussQ], weights: Sequence[object] | None = None) -> GaussQ:
    """Hermitian product, conjugate-linear in the second slot."""
    s = ZERO
    if weights is None:
        for a, b in zip(u, v):
            if a and b:
                s = s + a * b.conjugate()
    else:
        for a, b, w in zip(u, v, weights):
            if a and b:
                s = s + w * a * b.conjugate()
    return s


def independent_subset(vectors: Sequence[Sequence[GaussQ]], dim: int) -> list[int]:
    """Indices of a greedy maximal independent subset, in input order."""
    if not vectors:
        return []
    _, pivots = rref(Matrix.from_columns(vectors, dim))
    return pivots


def span_basis(vectors: Sequence[Sequence[GaussQ]], dim: int) -> list[Vector]:
    """Reduced basis (RREF rows) of the span."""
    if not vectors:
        return []
    reduced, _ = rref(Matrix(vectors, dim))
    return [[r.get(j, ZERO) for j in range(dim)] for r in reduced]


def span_rank(vectors: Sequence[Sequence[GaussQ]], dim: int) -> int:
    return len(span_basis(vectors, dim))


def same_span(a, b, dim: int) -> bool:
    return span_basis(a, dim) == span_basis(b, dim)


def in_span(v, vectors, dim: int) -> bool:
    return span_rank(list(vectors) + [v], dim) == span_rank(vectors, dim)


def hermitian_complement(vectors: Sequence[Sequence[GaussQ]], dim: int, weights: Sequence[object] | None = None) -> list[Vector]:
    """Basis of ``{v : <v, s> = 0 for all s}`` for the (weighted) Hermitian product."""
    for s in vectors:
        if len(s) != dim:
            raise InputError(f"vector of length {len(s)} in ambient dimension {dim}")
    if not vectors:
        return [[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)]
    if weights is None:
        rows = [[x.conjugate() for x in s] for s in vectors]
    else:
        rows = [[w * x.conjugate() for x, w in zip(s, weights)] for s in vectors]
    return kernel_basis(Matrix(rows, dim))


def intersect(a: Sequence[Sequence[GaussQ]], b: Sequence[Sequence[GaussQ]], dim: int) -> list[Vector]:
    """Basis of span(a) ∩ span(b)."""
    if not a or not b:
        return []
    cols = list(a) + [[-x for x in v] for v in b]
    out = []
    for k in kernel_basis(Matrix.from_columns(cols, dim)):
        v = [ZERO] * dim
        for c, vec in zip(k[: len(a)], a):
            if c:
                v = [x + c * y for x, y in zip(v, vec)]
        out.append(v)
    return span_basis(out, dim)


def orthogonal_projection(basis: Sequence[Sequence[GaussQ]], y: Sequence[GaussQ], weights=None) -> Vector:
    """Orthogonal projection of ``y`` onto span(basis); basis must be independent."""
    if not basis:
        return [ZERO] * len(y)
    k = len(basis)
    gram = Matrix([[inner(basis[j], basis[i], weights) for j in range(k)] for i in range(k)], k)
    rhs = [inner(y, basis[i], weights) for i in range(k)]
    c = solve(gram, rhs)
    out = [ZERO] * len(y)
    for cj, bj in zip(c, basis):
        if cj:
            out = [x + cj * z for x, z in zip(out, bj)]
    return out


def hermitian_solve(a, y: Sequence[GaussQ], weights: Sequence[object] | None = None) -> Vector:
    """The unique ``x`` orthogonal to ker A with ``A x = y - proj_{ker A}(y)``.

    ``A`` must be self-adjoint for the product given by ``weights`` (standard
    Hermitian product when ``None``).
    """
    a = _as_matrix(a)
    if a.nrows != a.ncols or len(y) != a.nrows:
        raise InputError("hermitian_solve needs a square matrix and matching vector")
    n = a.ncols
    ker = kernel_basis(a)
    p = orthogonal_projection(ker, y, weights)
    rhs = [u - v for u, v in zip(y, p)]
    if weights is None:
        cons = [[x.conjugate() for x in k] for k in ker]
    else:
        cons = [[w * x.conjugate() for x, w in zip(k, weights)] for k in ker]
    system = Matrix(list(a.rows) + cons, n) if cons else a
    x = solve(system, rhs + [ZERO] * len(cons))
    if x is None:
        raise InvariantViolation("hermitian_solve: operator is not self-adjoint for the given product")
    return x


def matrix_inverse(m) -> Matrix:
    m = _as_matrix(m)
    n = m.nrows
    if m.ncols != n or rank(m) != n:
        raise InputError("matrix is singular")
    cols = []
    for j in range(n):
        e = [ONE if i == j else ZERO for i in range(n)]
        cols.append(solve(m, e))
    return Matrix.from_columns(cols, n)
