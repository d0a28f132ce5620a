"""Invariant exterior algebra on the complexified dual of the algebra.

A form is a sparse map from strictly increasing tuples of generator indices
to polynomial coefficients. Generator ``q - 1`` is ``omega^q`` and generator
``N + q - 1`` is ``omegabar^q`` (the duals of ``e_q`` and ``ebar_q``). The
conventions are ``d sigma(A, B) = -sigma([A, B])`` and
``(sigma ^ tau)(A, B) = sigma(A) tau(B) - sigma(B) tau(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from nilkur.algebra import AlgebraSpec, complex_structure_constants
from nilkur.errors import InputError
from nilkur.exact import ONE, ZERO, GaussQ, Matrix, Poly, rank


def _merge_sign(a: tuple, b: tuple):
    """Sign and sorted union of two increasing index tuples, or ``(0, None)``."""
    if set(a) & set(b):
        return 0, None
    inversions = 0
    j = 0
    # count pairs (x in a, y in b) with x > y
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inversions += j
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


class InvariantForm:
    """Left-invariant complex form with coefficients in a polynomial ring."""

    __slots__ = ("dim", "nvars", "terms")

    def __init__(self, dim: int, terms: Mapping[tuple, object] | None = None, nvars: int = 0):
        self.dim = dim
        self.nvars = nvars
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if any(not 0 <= g < 2 * dim for g in idx):
                raise InputError(f"generator index out of range in {idx}")
            if len(set(idx)) != len(idx):
                continue
            order = sorted(range(len(idx)), key=lambda i: idx[i])
            sign = _perm_sign(order)
            c = Poly.lift(c, nvars)
            if sign < 0:
                c = -c
            key = tuple(sorted(idx))
            c = clean[key] + c if key in clean else c
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self.terms = clean

    @classmethod
    def _wrap(cls, dim, terms, nvars):
        obj = object.__new__(cls)
        obj.dim = dim
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def generator(cls, dim: int, index: int, nvars: int = 0, coeff=ONE) -> "InvariantForm":
        return cls(dim, {(index,): Poly.lift(coeff, nvars)}, nvars)

    @classmethod
    def zero(cls, dim: int, nvars: int = 0) -> "InvariantForm":
        return cls._wrap(dim, {}, nvars)

    @classmethod
    def one(cls, dim: int, nvars: int = 0) -> "InvariantForm":
        return cls._wrap(dim, {(): Poly.const(nvars, ONE)}, nvars)

    def _check(self, other):
        if self.dim != other.dim or self.nvars != other.nvars:
            raise InputError("forms live in different algebras or parameter rings")

    def __add__(self, other: "InvariantForm") -> "InvariantForm":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out[k] + c if k in out else c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return InvariantForm._wrap(self.dim, out, self.nvars)

    def __neg__(self):
        return InvariantForm._wrap(self.dim, {k: -c for k, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "InvariantForm":
        c = Poly.lift(c, self.nvars) if isinstance(c, Poly) else GaussQ.coerce(c)
        out = {}
        for k, v in self.terms.items():
            w = v * c
            if w:
                out[k] = w
        return InvariantForm._wrap(self.dim, out, self.nvars)

    def __eq__(self, other):
        return isinstance(other, InvariantForm) and (self.dim, self.nvars, self.terms) == (other.dim, other.nvars, other.terms)

    def __hash__(self):
        return hash((self.dim, self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        return {len(k) for k in self.terms}

    def type_part(self, p: int, q: int) -> "InvariantForm":
        """Component with ``p`` factors omega and ``q`` factors omegabar."""
        out = {}
        for k, c in self.terms.items():
            hol = sum(1 for g in k if g < self.dim)
            if hol == p and len(k) - hol == q:
                out[k] = c
        return InvariantForm._wrap(self.dim, out, self.nvars)

    def coefficient(self, idx: Sequence[int]) -> Poly:
        return self.terms.get(tuple(idx), Poly.zero(self.nvars))

    def label(self, idx: tuple) -> str:
        names = []
        for g in idx:
            names.append(f"w{g + 1}" if g < self.dim else f"wb{g - self.dim + 1}")
        return "^".join(names) or "1"

    def __repr__(self):
        if not self.terms:
            return "InvariantForm(0)"
        parts = [f"({c})*{self.label(k)}" for k, c in sorted(self.terms.items())]
        return "InvariantForm(" + " + ".join(parts) + ")"


def _perm_sign(order):
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def omega(dim: int, q: int, nvars: int = 0) -> InvariantForm:
    """The (1,0)-form dual to ``e_q`` (1-based ``q``)."""
    return InvariantForm.generator(dim, q - 1, nvars)


def omegabar(dim: int, q: int, nvars: int = 0) -> InvariantForm:
    """The (0,1)-form dual to ``ebar_q`` (1-based ``q``)."""
    return InvariantForm.generator(dim, dim + q - 1, nvars)


def wedge(a: InvariantForm, b: InvariantForm) -> InvariantForm:
    a._check(b)
    out: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            sign, key = _merge_sign(ka, kb)
            if not sign:
                continue
            c = ca * cb
            if sign < 0:
                c = -c
            s = out[key] + c if key in out else c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return InvariantForm._wrap(a.dim, out, a.nvars)


def wedge_all(forms: Sequence[InvariantForm]) -> InvariantForm:
    result = InvariantForm.one(forms[0].dim, forms[0].nvars)
    for f in forms:
        result = wedge(result, f)
    return result


def contract(vector, form: InvariantForm) -> InvariantForm:
    """Interior product by a basis vector index or a coordinate vector of length ``2N``."""
    if isinstance(vector, int):
        vector = [ONE if i == vector else ZERO for i in range(2 * form.dim)]
    out: dict = {}
    for k, c in form.terms.items():
        for pos, g in enumerate(k):
            x = vector[g]
            if not x:
                continue
            key = k[:pos] + k[pos + 1:]
            v = c * x
            if pos % 2:
                v = -v
            s = out[key] + v if key in out else v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return InvariantForm._wrap(form.dim, out, form.nvars)


class Differential:
    """Exterior derivative of invariant forms for a fixed algebra."""

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.dim = spec.dim
        consts = complex_structure_constants(spec)
        self._dgen: dict = {}
        for (a, b), vec in consts.items():
            if a < b:
                for c, val in vec.items():
                    self._dgen.setdefault(c, {})[(a, b)] = -val

    def of_generator(self, g: int, nvars: int = 0) -> InvariantForm:
        terms = self._dgen.get(g, {})
        return InvariantForm._wrap(self.dim, {k: Poly.const(nvars, v) for k, v in terms.items()}, nvars)

    def __call__(self, form: InvariantForm) -> InvariantForm:
        out = InvariantForm.zero(form.dim, form.nvars)
        for k, c in form.terms.items():
            for pos, g in enumerate(k):
                dg = self.of_generator(g, form.nvars)
                if not dg:
                    continue
                left = InvariantForm._wrap(form.dim, {k[:pos]: c}, form.nvars)
                right = InvariantForm._wrap(form.dim, {k[pos + 1:]: Poly.const(form.nvars, ONE)}, form.nvars)
                piece = wedge(wedge(left, dg), right)
                out = out + (piece if pos % 2 == 0 else -piece)
        return out


def d(spec: AlgebraSpec, form: InvariantForm) -> InvariantForm:
    return Differential(spec)(form)


def conjugate(form: InvariantForm, var_map: Sequence[int] | None = None, nvars: int | None = None) -> InvariantForm:
    """Complex conjugate; ``var_map`` sends each parameter to its conjugate variable."""
    N = form.dim
    nv = form.nvars if nvars is None else nvars
    terms = {}
    for k, c in form.terms.items():
        idx = tuple(g + N if g < N else g - N for g in k)
        c = c.conjugate_coefficients()
        if var_map is not None:
            c = c.remap(nv, var_map)
        terms[idx] = c
    return InvariantForm(N, terms, nv)


# ---------------------------------------------------------------------------
# coframe tests


@dataclass(frozen=True)
class CoframeConditions:
    """Integrability and abelian-ness conditions of a deformed (1,0) coframe.

    ``integrable`` lives in the parameter ring of Phi. ``abelian`` lives in the
    doubled ring whose variables ``nvars..2*nvars-1`` are the conjugates of the
    original ones.
    """

    nvars: int
    integrable: tuple
    abelian: tuple


def reduce_conditions(polys) -> tuple:
    """Normalise, dedupe and drop polynomial multiples of other conditions."""
    normed = []
    for p in polys:
        if p:
            q = p.normalized()
            if q not in normed:
                normed.append(q)
    normed.sort(key=lambda p: (p.total_degree(), len(p.terms), p.format()))
    kept = []
    for p in normed:
        if any(p.divisible_by(q) for q in kept):
            continue
        kept.append(p)
    return tuple(kept)


def coframe_integrability(spec: AlgebraSpec, phi: Mapping[tuple, object], nvars: int | None = None) -> CoframeConditions:
    """Conditions on ``alpha^p = omega^p + sum_q Phi[p, q] omegabar^q``.

    ``phi`` maps 1-based ``(p, q)`` to a scalar or a :class:`Poly`.
    """
    N = spec.dim
    if nvars is None:
        nvars = next((v.nvars for v in phi.values() if isinstance(v, Poly)), 0)
    for (p, q) in phi:
        if not (1 <= p <= N and 1 <= q <= N):
            raise InputError(f"coframe coefficient index ({p}, {q}) out of range 1..{N}")
    big = 2 * nvars
    to_big = list(range(nvars))
    conj_map = [nvars + i for i in range(nvars)]
    coeff = {k: Poly.lift(v, nvars) if isinstance(v, Poly) else Poly.const(nvars, v) for k, v in phi.items()}

    const = [[ZERO] * (2 * N) for _ in range(2 * N)]
    for p in range(N):
        const[p][p] = ONE
        const[N + p][N + p] = ONE
    for (p, q), c in coeff.items():
        c0 = c.constant()
        const[p - 1][N + q - 1] = c0
        const[N + p - 1][q - 1] = c0.conjugate()
    if rank(Matrix(const, 2 * N)) != 2 * N:
        raise InputError("deformed coframe is degenerate at the origin")

    def alpha(p, nv, mapping):
        f = omega(N, p, nv)
        for q in range(1, N + 1):
            c = coeff.get((p, q))
            if c:
                if mapping is not None:
                    c = c.remap(nv, mapping)
                f = f + omegabar(N, q, nv).scale(c)
        return f

    dfun = Differential(spec)
    alphas = [alpha(p, nvars, None) for p in range(1, N + 1)]
    top = wedge_all(alphas)
    integ = []
    for a in alphas:
        integ.extend(wedge(dfun(a), top).terms.values())

    alphas_big = [alpha(p, big, to_big) for p in range(1, N + 1)]
    conj_top = wedge_all([conjugate(a, conj_map + to_big, big) for a in alphas_big])
    abel = []
    for a in alphas_big:
        abel.extend(wedge(dfun(a), conj_top).terms.values())
    return CoframeConditions(nvars, reduce_conditions(integ), reduce_conditions(abel))
