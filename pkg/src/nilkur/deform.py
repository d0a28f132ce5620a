"""Deformed frames, abelian deformation counts, Heisenberg recognition and reports."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from nilkur.algebra import (AlgebraSpec, bracket, center_basis, complex_structure_constants,
                            real_to_complex, validate)
from nilkur.dolbeault import DolbeaultComplex, VectorForm, _basis, dim_ker_dbar1
from nilkur.errors import InputError, InvariantViolation
from nilkur.exact import ONE, ZERO, GaussQ, Matrix, kernel_basis, rank
from nilkur.exact.linalg import in_span, intersect, solve, span_basis
from nilkur.kuranishi import certificate, maurer_cartan_residual  # noqa: F401
from nilkur.schouten import condition_a_matrix


# ---------------------------------------------------------------------------
# abelian deformation count


def _matvec_rank(rows, vectors):
    if not rows or not vectors:
        return 0
    img = [[sum((r[i] * v[i] for i in range(len(v)) if r[i] and v[i]), ZERO) for r in rows] for v in vectors]
    return rank(Matrix.from_columns(img, len(rows)))


def dim_abel(spec: AlgebraSpec, complex_: DolbeaultComplex | None = None) -> int:
    """Dimension of the Condition A subspace of the harmonic degree-1 space.

    Also computed as ``dim(ker D_1 cap CondA) - rank D_0``; the two must agree.
    """
    cx = complex_ or DolbeaultComplex(spec)
    harm = cx.harmonic_basis(1)
    cond = condition_a_matrix(spec)
    on_harmonic = len(harm) - _matvec_rank(cond, harm)
    rows = list(cx.D(1).rows) + cond
    on_kernel = len(kernel_basis(Matrix(rows, cx.size(1)))) if rows else cx.size(1)
    exact = len(cx.image(1))
    if _matvec_rank(cond, cx.image(1)):
        raise InvariantViolation("an exact degree-1 form violates Condition A")
    if on_harmonic != on_kernel - exact:
        raise InvariantViolation(f"abelian count differs between harmonic ({on_harmonic}) and quotient ({on_kernel - exact}) routes")
    return on_harmonic


def abelian_harmonic_basis(spec: AlgebraSpec, complex_: DolbeaultComplex | None = None) -> list:
    """Basis of harmonic degree-1 vectors satisfying Condition A."""
    cx = complex_ or DolbeaultComplex(spec)
    harm = cx.harmonic_basis(1)
    cond = condition_a_matrix(spec)
    if not harm:
        return []
    if not cond:
        return [list(h) for h in harm]
    img = [[sum((r[i] * v[i] for i in range(len(v)) if r[i] and v[i]), ZERO) for r in cond] for v in harm]
    out = []
    for c in kernel_basis(Matrix.from_columns(img, len(cond))):
        v = [ZERO] * cx.size(1)
        for ci, h in zip(c, harm):
            if ci:
                v = [a + ci * b for a, b in zip(v, h)]
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# deformed frames


def _phi_matrix(spec: AlgebraSpec, phi) -> list:
    """``Phi[a][q]``: coefficient of ``omegabar^a (x) e_q`` as scalars."""
    N = spec.dim
    if isinstance(phi, VectorForm):
        if phi.degree != 1 or phi.dim != N:
            raise InputError("Phi must be a degree-1 form on this algebra")
        vec = phi.scalar_vector()
    else:
        vec = [GaussQ.coerce(x) for x in phi]
        if len(vec) != N * N:
            raise InputError(f"Phi needs {N * N} coefficients")
    basis = _basis(N, 1)
    out = [[ZERO] * N for _ in range(N)]
    for i, ((a,), q) in enumerate(basis.elements):
        out[a - 1][q - 1] = vec[i]
    return out


@dataclass(frozen=True)
class DeformedFrame:
    """Rows ``Sbar_a = ebar_a + Phi(ebar_a)`` and their conjugates ``S_a``."""

    dim: int
    sbar: tuple
    s: tuple

    def invertible(self) -> bool:
        return rank(Matrix(list(self.sbar) + list(self.s), 2 * self.dim)) == 2 * self.dim


def deformed_frame(spec: AlgebraSpec, phi) -> DeformedFrame:
    N = spec.dim
    P = _phi_matrix(spec, phi)
    sbar, s = [], []
    for a in range(N):
        v = [ZERO] * (2 * N)
        v[N + a] = ONE
        w = [ZERO] * (2 * N)
        w[a] = ONE
        for q in range(N):
            if P[a][q]:
                v[q] = P[a][q]
                w[N + q] = P[a][q].conjugate()
        sbar.append(tuple(v))
        s.append(tuple(w))
    return DeformedFrame(N, tuple(sbar), tuple(s))


@dataclass(frozen=True)
class FrameResidual:
    """Brackets of the deformed (0,1) frame.

    ``mc_equivalent`` is the degree-2 form whose ``(a, b)`` component is the
    part of ``[Sbar_a, Sbar_b]`` along ``g^(1,0)`` in the splitting
    ``span(Sbar) + g^(1,0)``; ``abelian_defect`` holds the full brackets.
    """

    mc_equivalent: VectorForm
    abelian_defect: dict

    @property
    def integrable(self) -> bool:
        return self.mc_equivalent.is_zero()

    @property
    def abelian(self) -> bool:
        return not any(any(v) for v in self.abelian_defect.values())


def frame_bracket_residual(spec: AlgebraSpec, phi) -> FrameResidual:
    N = spec.dim
    frame = deformed_frame(spec, phi)
    if not frame.invertible():
        raise InputError("deformed frame does not span the complexified algebra")
    consts = complex_structure_constants(spec)
    P = _phi_matrix(spec, phi)
    terms = {}
    defect = {}
    for a in range(N):
        for b in range(a + 1, N):
            v = bracket(consts, frame.sbar[a], frame.sbar[b])
            defect[(a + 1, b + 1)] = tuple(v)
            w = list(v[:N])
            for c in range(N):
                x = v[N + c]
                if x:
                    for q in range(N):
                        if P[c][q]:
                            w[q] = w[q] - x * P[c][q]
            for q in range(N):
                if w[q]:
                    terms[((a + 1, b + 1), q + 1)] = w[q]
    return FrameResidual(VectorForm.from_terms(N, 2, terms, 0), defect)


class DeformationError(InputError):
    """The requested deformation is not integrable or not abelian."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class DeformResult:
    spec: AlgebraSpec
    integrable: bool
    abelian: bool
    frame: tuple  # (1,0) vectors T'_1..T'_n', W'_(n'+1)..W'_N' in complex coordinates


def deform(spec: AlgebraSpec, phi, name: str | None = None) -> DeformResult:
    """Structural constants of the deformed abelian structure in an adapted frame."""
    N = spec.dim
    res = frame_bracket_residual(spec, phi)
    if not res.integrable:
        raise DeformationError("deformation is not integrable (mc_equivalent is nonzero)", res.mc_equivalent)
    if not res.abelian:
        raise DeformationError("deformed structure is not abelian (abelian_defect is nonzero)", res.abelian_defect)
    frame = deformed_frame(spec, phi)
    new10 = [list(v) for v in frame.s]
    center = [real_to_complex(N, v) for v in center_basis(spec)]
    c10 = intersect(new10, center, 2 * N) if center else []
    if 2 * len(c10) != len(center):
        raise InvariantViolation("center is not invariant under the deformed complex structure")
    chosen = list(c10)
    tprime = []
    for v in new10:
        if not in_span(v, chosen, 2 * N):
            chosen.append(v)
            tprime.append(v)
    n2, m2 = len(tprime), len(c10)
    if n2 + m2 != N:
        raise InvariantViolation("adapted frame does not span the new (1,0) space")
    consts = complex_structure_constants(spec)
    for a in range(n2):
        for b in range(a + 1, n2):
            if any(bracket(consts, tprime[a], tprime[b])):
                raise InvariantViolation("deformed (1,0) space is not abelian")
    conj = lambda v: [v[N + i].conjugate() for i in range(N)] + [v[i].conjugate() for i in range(N)]
    wbar = [conj(w) for w in c10]
    central_basis = [list(w) for w in c10] + wbar
    frame_matrix = Matrix.from_columns(central_basis, 2 * N) if central_basis else None
    coords = {}
    for k in range(n2):
        tk_bar = conj(tprime[k])
        for j in range(n2):
            v = bracket(consts, tk_bar, tprime[j])
            if not any(v):
                continue
            c = solve(frame_matrix, v)
            if c is None:
                raise InvariantViolation("bracket of the adapted frame leaves the center")
            coords[(k, j)] = c
    E = {}
    zero = [ZERO] * (2 * m2)
    for (k, j), c in coords.items():
        other = coords.get((j, k), zero)
        for a in range(m2):
            if c[m2 + a] != -other[a].conjugate():
                raise InvariantViolation("deformed constants violate the reality relation")
            if c[a]:
                E[(n2 + a + 1, k + 1, j + 1)] = c[a]
    new = AlgebraSpec(n2, m2, E, name or (f"{spec.name}'" if spec.name else None))
    return DeformResult(new, True, True, tuple(tuple(v) for v in tprime + [list(w) for w in c10]))


# ---------------------------------------------------------------------------
# Heisenberg recognition

HEISENBERG = "heisenberg"
NOT_HEISENBERG = "not_heisenberg"
INAPPLICABLE = "inapplicable"


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def gauss_sqrt(w: GaussQ):
    """A square root of ``w`` inside Q(i), or ``None``."""
    if not w:
        return ZERO
    mod = _rational_sqrt(w.abs2())
    if mod is None:
        return None
    x = _rational_sqrt((w.re + mod) / 2)
    y = _rational_sqrt((mod - w.re) / 2)
    if x is None or y is None:
        return None
    for sy in (y, -y):
        z = GaussQ(x, sy)
        if z * z == w:
            return z
    return None


@dataclass(frozen=True)
class HeisenbergCertificate:
    verdict: str
    unit: GaussQ | None = None
    D: tuple | None = None
    diagnostics: tuple = ()


def recognize_heisenberg(spec: AlgebraSpec) -> HeisenbergCertificate:
    if spec.m != 1:
        return HeisenbergCertificate(INAPPLICABLE, diagnostics=(f"center has complex dimension {spec.m}, not 1",))
    n = spec.n
    alpha = n + 1
    E = [[spec.e(alpha, k, j) for j in range(1, n + 1)] for k in range(1, n + 1)]
    if not any(x for row in E for x in row):
        return HeisenbergCertificate(NOT_HEISENBERG, diagnostics=("all constants vanish: the algebra is abelian",))
    v = validate(spec)
    if not v.center_matches:
        return HeisenbergCertificate(INAPPLICABLE, diagnostics=v.warnings)
    diags = []
    for k in range(n):
        for m in range(n):
            if E[k][m].abs2() != E[m][k].abs2():
                diags.append(f"|E{k + 1}{m + 1}|^2 != |E{m + 1}{k + 1}|^2")
    if diags:
        return HeisenbergCertificate(NOT_HEISENBERG, diagnostics=tuple(diags))
    u = None
    for j in range(n):
        for l in range(n):
            if E[j][l]:
                r = E[l][j].conjugate() / E[j][l]
                if u is None:
                    u = r
                elif r != u:
                    return HeisenbergCertificate(NOT_HEISENBERG, diagnostics=("ratio conj(E_lj)/E_jl is not constant",))
    zeta = gauss_sqrt(-u)
    D = None
    if zeta is not None:
        D = [[zeta * x for x in row] for row in E]
        for j in range(n):
            for l in range(n):
                if D[l][j].conjugate() != -D[j][l]:
                    return HeisenbergCertificate(NOT_HEISENBERG, u, diagnostics=("D is not skew-Hermitian",))
    else:
        diags.append("no square root of -u in Q(i); skew-Hermitian test done through the ratio conditions")
    gram = [[sum((E[j][k] * E[l][k].conjugate() for k in range(n)), ZERO) for l in range(n)] for j in range(n)]
    lam = gram[0][0]
    scalar = all(gram[j][l] == (lam if j == l else ZERO) for j in range(n) for l in range(n))
    if not scalar or not lam.is_real() or lam.re <= 0:
        return HeisenbergCertificate(NOT_HEISENBERG, u, _tuple(D), tuple(diags + ["E E* is not a positive multiple of the identity"]))
    return HeisenbergCertificate(HEISENBERG, u, _tuple(D), tuple(diags))


def _tuple(D):
    return None if D is None else tuple(tuple(r) for r in D)


# ---------------------------------------------------------------------------
# reports


@dataclass
class AnalysisReport:
    h0: int
    h1: int
    h2: int
    dim_ker_dbar1: int
    generic_d: int
    dim_abel: int
    obstructions: list = field(default_factory=list)
    kur: dict = field(default_factory=dict)
    heisenberg: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "AnalysisReport":
        expected = {"h0", "h1", "h2", "dim_ker_dbar1", "generic_d", "dim_abel", "obstructions", "kur", "heisenberg", "warnings"}
        if set(obj) != expected:
            raise InputError(f"report fields differ from {sorted(expected)}")
        return cls(**obj)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "AnalysisReport":
        return cls.from_json(json.loads(text))


def analyze(spec: AlgebraSpec, order: int = 4, metric: str = "standard") -> AnalysisReport:
    cx = DolbeaultComplex(spec, metric)
    N = spec.dim
    h = [cx.cohomology_dim(k) for k in range(min(N, 2) + 1)]
    h0, h1 = h[0], h[1]
    h2 = h[2] if N >= 2 else 0
    kerd = dim_ker_dbar1(spec)
    gd = N - h0 + h1
    abel = dim_abel(spec, cx)
    cert = certificate(spec, order, cx, abel)
    warnings = list(validate(spec).warnings)
    if kerd != gd:
        warnings.append(f"dim ker dbar_1 = {kerd} differs from (n+m) - h0 + h1 = {gd}")
    if cert.upper < h1:
        warnings.append(f"structure is obstructed: Kuranishi dimension bound {cert.upper} < h1 = {h1}")
    warnings.extend(cert.warnings)
    obs = cert.witness.get("obstructions", [])
    return AnalysisReport(
        h0=h0, h1=h1, h2=h2, dim_ker_dbar1=kerd, generic_d=gd, dim_abel=abel,
        obstructions=list(obs),
        kur={"status": cert.status_text, "lower": cert.lower, "upper": cert.upper},
        heisenberg={"verdict": recognize_heisenberg(spec).verdict},
        warnings=warnings,
    )
