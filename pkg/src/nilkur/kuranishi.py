"""Kuranishi series, obstruction polynomials and dimension certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from nilkur.algebra import AlgebraSpec
from nilkur.dolbeault import DolbeaultComplex, VectorForm, _basis, apply_linear, span_form
from nilkur.errors import InputError, InvariantViolation
from nilkur.exact import HALF, ONE, ZERO, GaussQ, Matrix, Poly, rank
from nilkur.schouten import schouten

EXACT = "exact_solution"
UNOBSTRUCTED = "unobstructed_to_order"
OBSTRUCTED = "obstructed"

SAMPLE_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


def adjoint_matrix(spec: AlgebraSpec, k: int, complex_: DolbeaultComplex | None = None) -> Matrix:
    """Adjoint of ``D_(k-1)`` for the tensor metric, as a map ``C^k -> C^(k-1)``."""
    if not 1 <= k <= spec.dim:
        raise InputError(f"degree {k} out of range 1..{spec.dim}")
    cx = complex_ or DolbeaultComplex(spec)
    return cx.adjoint(k)


def green_matrix(cx: DolbeaultComplex, k: int) -> Matrix:
    """Matrix of the Green operator in degree ``k``."""
    def build():
        n = cx.size(k)
        cols = []
        for i in range(n):
            e = [ONE if j == i else ZERO for j in range(n)]
            cols.append(cx.green(k, e))
        return Matrix.from_columns(cols, n) if cols else Matrix.zeros(0, 0)
    return cx._memo(("G", k), build)


def greens_apply(spec: AlgebraSpec, k: int, y: VectorForm, complex_: DolbeaultComplex | None = None) -> VectorForm:
    """Green operator applied coefficientwise to a polynomial form."""
    if y.degree != k:
        raise InputError(f"form has degree {y.degree}, expected {k}")
    cx = complex_ or DolbeaultComplex(spec)
    return apply_linear(green_matrix(cx, k), y, k)


def dbar(cx: DolbeaultComplex, form: VectorForm) -> VectorForm:
    return apply_linear(cx.D(form.degree), form, form.degree + 1)


def maurer_cartan_residual(spec: AlgebraSpec, phi: VectorForm, complex_: DolbeaultComplex | None = None) -> VectorForm:
    """``D_1 Phi + 1/2 {Phi, Phi}``."""
    if phi.degree != 1:
        raise InputError("Maurer-Cartan residual needs a degree-1 form")
    cx = complex_ or DolbeaultComplex(spec)
    return dbar(cx, phi) + schouten(spec, phi, phi).scale(HALF)


def param_labels(spec: AlgebraSpec, vectors: Sequence[Sequence[GaussQ]]) -> list:
    """``mu[p->q]`` for unit harmonic vectors, ``b<k>`` otherwise."""
    basis = _basis(spec.dim, 1)
    out = []
    for k, v in enumerate(vectors):
        nz = [i for i, x in enumerate(v) if x]
        if len(nz) == 1 and v[nz[0]] == ONE:
            (p,), q = basis.elements[nz[0]]
            out.append(f"mu[{p}->{q}]")
        else:
            out.append(f"b{k + 1}")
    return out


@dataclass(frozen=True)
class KuranishiSeries:
    """Terms ``phi_1 .. phi_R`` in parameters ``t_1 .. t_N`` along ``basis``."""

    nvars: int
    order: int
    terms: tuple
    basis: tuple
    labels: tuple

    def total(self, upto: int | None = None) -> VectorForm:
        upto = self.order if upto is None else upto
        out = self.terms[0]
        for t in self.terms[1:upto]:
            out = out + t
        return out

    def term(self, r: int) -> VectorForm:
        return self.terms[r - 1]


def series(spec: AlgebraSpec, order: int, params: Sequence[int] | None = None,
           basis: Sequence[Sequence[object]] | None = None,
           complex_: DolbeaultComplex | None = None) -> KuranishiSeries:
    """Kuranishi recursion ``phi_r = -1/2 sum_s dbar* G {phi_s, phi_(r-s)}``.

    The parameters run over the harmonic degree-1 basis, a subset of it
    given by ``params`` (indices), or an explicit list of ``basis`` vectors.
    """
    if order < 1:
        raise InputError("series order must be at least 1")
    cx = complex_ or DolbeaultComplex(spec)
    if basis is None:
        harm = cx.harmonic_basis(1)
        if params is not None:
            for p in params:
                if not 0 <= p < len(harm):
                    raise InputError(f"parameter index {p} out of range 0..{len(harm) - 1}")
            harm = [harm[p] for p in params]
        basis = harm
    basis = [[GaussQ.coerce(x) for x in v] for v in basis]
    phi1 = span_form(basis, spec.dim, 1)
    terms = [phi1]
    if order >= 2 and spec.dim >= 2:
        op = cx.adjoint(2) @ green_matrix(cx, 2)
        for r in range(2, order + 1):
            acc = VectorForm(spec.dim, 2, None, phi1.nvars)
            for s in range(1, r // 2 + 1):
                b = schouten(spec, terms[s - 1], terms[r - s - 1])
                acc = acc + (b if 2 * s == r else b.scale(2))
            terms.append(apply_linear(op, acc, 1).scale(-HALF))
    elif order >= 2:
        terms.extend(VectorForm(spec.dim, 1, None, phi1.nvars) for _ in range(order - 1))
    return KuranishiSeries(phi1.nvars, order, tuple(terms), tuple(tuple(v) for v in basis),
                           tuple(param_labels(spec, basis)))


@dataclass(frozen=True)
class ObstructionSystem:
    """``f_k = <{Phi, Phi}, gamma_k>`` through total degree ``degree``."""

    polys: tuple
    degree: int
    gamma: tuple
    labels: tuple = ()

    def is_zero(self) -> bool:
        return not any(self.polys)

    def format(self) -> list:
        names = list(self.labels) or None
        return [f"f{k + 1} = {p.format(names)}" for k, p in enumerate(self.polys)]


def obstructions(spec: AlgebraSpec, ser: KuranishiSeries, complex_: DolbeaultComplex | None = None) -> ObstructionSystem:
    cx = complex_ or DolbeaultComplex(spec)
    top = ser.order + 1
    phi = ser.total()
    br = schouten(spec, phi, phi).truncate(top) if spec.dim >= 2 else VectorForm(spec.dim, 2, None, ser.nvars)
    gamma = cx.harmonic_basis(2) if spec.dim >= 2 else []
    w = cx.weights(2)
    polys = []
    for g in gamma:
        f = Poly.zero(ser.nvars)
        for c, x, wt in zip(br.coeffs, g, w):
            if c and x:
                f = f + c * (wt * x.conjugate())
        polys.append(f)
    return ObstructionSystem(tuple(polys), top, tuple(tuple(g) for g in gamma), ser.labels)


@dataclass(frozen=True)
class KurCertificate:
    status: str
    lower: int
    upper: int
    order: int
    witness: dict = field(default_factory=dict)
    warnings: tuple = ()

    @property
    def status_text(self) -> str:
        return f"{UNOBSTRUCTED} {self.order}" if self.status == UNOBSTRUCTED else self.status


def jacobian_rank(polys: Sequence[Poly], point: Sequence[object]) -> int:
    if not polys:
        return 0
    nv = polys[0].nvars
    rows = [[p.derivative(i).evaluate(point) for i in range(nv)] for p in polys]
    return rank(Matrix(rows, nv))


def vanishing_set(polys: Sequence[Poly], nvars: int):
    """Smallest coordinate subset whose vanishing kills every polynomial."""
    live = [p for p in polys if p]
    if not live:
        return ()
    for size in range(1, nvars + 1):
        for S in combinations(range(nvars), size):
            zero = {i: ZERO for i in S}
            if all(not p.substitute(zero) for p in live):
                return S
    return None


def certificate(spec: AlgebraSpec, order: int = 4, complex_: DolbeaultComplex | None = None,
                dim_abel: int | None = None) -> KurCertificate:
    if order < 2:
        raise InputError("certificate needs order at least 2")
    cx = complex_ or DolbeaultComplex(spec)
    ser = series(spec, order, complex_=cx)
    N = ser.nvars
    if dim_abel is None:
        from nilkur.deform import dim_abel as _dim_abel
        dim_abel = _dim_abel(spec, complex_=cx)
    obs = obstructions(spec, ser, cx)
    shown = [line for line, f in zip(obs.format(), obs.polys) if f]
    residual = maurer_cartan_residual(spec, ser.total(), cx)
    if residual.is_zero():
        return KurCertificate(EXACT, N, N, order, {"phi_terms": sum(1 for t in ser.terms if t), "obstructions": shown})
    if obs.is_zero():
        return KurCertificate(UNOBSTRUCTED, dim_abel, N, order, {"obstructions": shown})
    S = vanishing_set(obs.polys, N)
    warnings = []
    if S is None:
        warnings.append("no coordinate subspace annihilates the obstructions; upper bound is trivial")
        return KurCertificate(OBSTRUCTED, dim_abel, N, order, {"obstructions": shown}, tuple(warnings))
    live = [p for p in obs.polys if p]
    points = []
    for seq in (range(1, N + 1), SAMPLE_PRIMES):
        free = iter(seq)
        points.append([ZERO if i in S else GaussQ(next(free)) for i in range(N)])
    ranks = [jacobian_rank(live, pt) for pt in points]
    if ranks[0] != ranks[1]:
        warnings.append(f"Jacobian rank differs at the two sample points: {ranks}")
    upper = N - max(ranks)
    lower = max(dim_abel, N - len(S))
    if lower > upper:
        raise InvariantViolation(f"Kuranishi bounds are inconsistent: {lower} > {upper}")
    witness = {
        "vanishing": [ser.labels[i] for i in S],
        "jacobian_ranks": ranks,
        "sample_points": [[str(x) for x in pt] for pt in points],
        "obstructions": shown,
    }
    return KurCertificate(OBSTRUCTED, lower, upper, order, witness, tuple(warnings))
