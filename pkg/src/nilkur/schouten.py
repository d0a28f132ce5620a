"""Schouten-Nijenhuis bracket of vector-valued (0,1)-forms and Condition A."""

from __future__ import annotations

from nilkur.algebra import AlgebraSpec
from nilkur.dolbeault import VectorForm, _basis, _linear_conditions
from nilkur.errors import InputError
from nilkur.exact import ZERO, Poly
from nilkur.forms import Differential, contract, omegabar, wedge


def _check_args(mu: VectorForm, nu: VectorForm):
    if mu.degree != 1 or nu.degree != 1:
        raise InputError("the bracket is defined here for degree-1 forms only")
    if mu.dim != nu.dim or mu.nvars != nu.nvars:
        raise InputError("bracket arguments live in different spaces or parameter rings")


def _add_wedge(out: dict, p: int, k: int, q: int, value: Poly):
    """Accumulate ``value * omegabar^p ^ omegabar^k (x) e_q`` into ``out``."""
    if p == k or not value:
        return
    if p > k:
        p, k = k, p
        value = -value
    key = ((p, k), q)
    s = out[key] + value if key in out else value
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def schouten(spec: AlgebraSpec, mu: VectorForm, nu: VectorForm) -> VectorForm:
    """Bracket from the closed-form coefficient formula.

    Only ``ebar-conjugate E`` terms survive: a central form ``omegabar^a``
    paired with a T-valued component of the other argument. Grouping by the
    types of the remaining form index and vector index gives four sums;
    each is accumulated with both argument orders, which makes the result
    symmetric.
    """
    _check_args(mu, nu)
    N = spec.dim
    out: dict = {}
    ts = list(spec.noncentral)
    cs = list(spec.central)
    ebar = {(a, i, k): v.conjugate() for (a, i, k), v in spec.E.items()}
    if not ebar:
        return VectorForm(N, 2, None, mu.nvars)

    def fill(x: VectorForm, y: VectorForm):
        # x supplies the central form index a and the vector q,
        # y supplies the remaining form index and a T-valued vector i
        for (a, i, k), eb in ebar.items():
            for q_group in (ts, cs):
                for q in q_group:
                    xa = x.coefficient(a, q)
                    if not xa:
                        continue
                    for p_group in (ts, cs):
                        for p in p_group:
                            yp = y.coefficient(p, i)
                            if yp:
                                _add_wedge(out, p, k, q, -(xa * yp) * eb)

    fill(mu, nu)
    fill(nu, mu)
    return VectorForm.from_terms(N, 2, out, mu.nvars)


def basic_bracket(spec: AlgebraSpec, p: int, q: int, p2: int, q2: int, diff: Differential | None = None) -> VectorForm:
    """``{omegabar^p (x) e_q, omegabar^p2 (x) e_q2}`` through contractions of ``d omegabar``."""
    N = spec.dim
    diff = diff or Differential(spec)
    terms: dict = {}
    for form_a, vec_b, form_b, vec_a in ((p, q2, p2, q), (p2, q, p, q2)):
        # omegabar^form_b ^ iota_{e_vec_b} d omegabar^form_a (x) e_vec_a
        dform = diff(omegabar(N, form_a))
        piece = wedge(omegabar(N, form_b), contract(vec_b - 1, dform))
        for idx, c in piece.terms.items():
            if any(g < N for g in idx):
                raise InputError("bracket produced a component of the wrong type")
            P = tuple(g - N + 1 for g in idx)
            key = (P, vec_a)
            terms[key] = terms[key] + c if key in terms else c
    return VectorForm.from_terms(N, 2, terms, 0)


def schouten_via_forms(spec: AlgebraSpec, mu: VectorForm, nu: VectorForm) -> VectorForm:
    """Bilinear extension of :func:`basic_bracket`."""
    _check_args(mu, nu)
    N = spec.dim
    diff = Differential(spec)
    b1 = _basis(N, 1)
    n2 = len(_basis(N, 2))
    coeffs = [Poly.zero(mu.nvars)] * n2
    cache: dict = {}
    for i, (P, q) in enumerate(b1):
        x = mu.coeffs[i]
        if not x:
            continue
        for j, (P2, q2) in enumerate(b1):
            y = nu.coeffs[j]
            if not y:
                continue
            key = (P[0], q, P2[0], q2)
            if key not in cache:
                cache[key] = basic_bracket(spec, *key, diff=diff)
            br = cache[key]
            if not br:
                continue
            xy = x * y
            for r, c in enumerate(br.coeffs):
                if c:
                    coeffs[r] = coeffs[r] + xy * c.constant()
    return VectorForm(N, 2, coeffs, mu.nvars)


def condition_a(spec: AlgebraSpec, mu: VectorForm) -> list:
    """Condition A equations: the closedness equations with ``F`` in place of ``E``."""
    return _linear_conditions(spec, mu, spec.f)


def condition_a_matrix(spec: AlgebraSpec):
    """Rows of the Condition A functionals on degree-1 coordinate vectors."""
    from nilkur.dolbeault import generic_form

    g = generic_form(spec.dim, 1)
    size = g.nvars
    rows = []
    for p in condition_a(spec, g):
        row = [ZERO] * size
        for e, c in p.terms.items():
            row[e.index(1)] = c
        rows.append(row)
    return rows
