"""Structural data of a 2-step nilpotent algebra with an abelian complex structure.

The complexified algebra has the (1,0) basis ``e_1..e_N`` (``N = n + m``),
with ``e_j = T_j`` for ``j <= n`` and ``e_a = W_a`` central for ``a > n``,
and the conjugates ``ebar_1..ebar_N``. The only nonzero brackets are

    [Tbar_k, T_j] = sum_a E[a,k,j] W_a + F[a,k,j] Wbar_a,   F[a,k,j] = -conj(E[a,j,k]).

In the complex coordinate vectors used throughout, index ``q - 1`` is ``e_q``
and index ``N + q - 1`` is ``ebar_q``. The real basis is ordered
``X_1, JX_1, X_2, JX_2, ...`` with ``X_q = e_q + ebar_q`` and
``JX_q = i (e_q - ebar_q)``; for central ``q`` these are ``Z_q, JZ_q``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from nilkur.errors import InputError, InvariantViolation
from nilkur.exact import HALF, I, ONE, ZERO, GaussQ, Matrix, kernel_basis

Key = tuple  # (alpha, k, j), 1-based


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    """``n`` non-central and ``m`` central (1,0) directions plus the constants E."""

    n: int
    m: int
    E: Mapping[Key, GaussQ] = field(default_factory=dict)
    name: str | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.m, int) or self.n < 0 or self.m < 0:
            raise InputError(f"n and m must be non-negative integers, got n={self.n!r}, m={self.m!r}")
        if self.n + self.m == 0:
            raise InputError("the algebra must have positive dimension")
        clean = {}
        for key, value in dict(self.E).items():
            try:
                alpha, k, j = key
            except (TypeError, ValueError):
                raise InputError(f"E key {key!r} is not an (alpha, k, j) triple") from None
            if not (self.n < alpha <= self.n + self.m):
                raise InputError(f"E entry (alpha={alpha}, k={k}, j={j}): alpha must lie in {self.n + 1}..{self.n + self.m}")
            if not (1 <= k <= self.n):
                raise InputError(f"E entry (alpha={alpha}, k={k}, j={j}): k must lie in 1..{self.n}")
            if not (1 <= j <= self.n):
                raise InputError(f"E entry (alpha={alpha}, k={k}, j={j}): j must lie in 1..{self.n}")
            value = GaussQ.coerce(value)
            if value:
                clean[(alpha, k, j)] = value
        object.__setattr__(self, "E", dict(sorted(clean.items())))

    @property
    def dim(self) -> int:
        """Complex dimension ``n + m`` of the (1,0) space."""
        return self.n + self.m

    def e(self, alpha: int, k: int, j: int) -> GaussQ:
        return self.E.get((alpha, k, j), ZERO)

    def f(self, alpha: int, k: int, j: int) -> GaussQ:
        return -self.e(alpha, j, k).conjugate()

    @property
    def central(self) -> range:
        return range(self.n + 1, self.n + self.m + 1)

    @property
    def noncentral(self) -> range:
        return range(1, self.n + 1)

    def label(self, q: int) -> str:
        return f"T{q}" if q <= self.n else f"W{q}"

    def __eq__(self, other):
        return isinstance(other, AlgebraSpec) and (self.n, self.m, self.E) == (other.n, other.m, other.E)

    def __hash__(self):
        return hash((self.n, self.m, tuple(self.E.items())))

    def __repr__(self):
        entries = ", ".join(f"E{a}_{k}{j}={v}" for (a, k, j), v in self.E.items())
        return f"AlgebraSpec({self.name or '?'}: n={self.n}, m={self.m}, {entries or 'E=0'})"

    # serialisation ------------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {}
        if self.name is not None:
            out["name"] = self.name
        out["n"] = self.n
        out["m"] = self.m
        out["E"] = [{"alpha": a, "k": k, "j": j, "value": str(v)} for (a, k, j), v in self.E.items()]
        return out

    @classmethod
    def from_json(cls, obj) -> "AlgebraSpec":
        if not isinstance(obj, dict):
            raise InputError("spec: top-level JSON value must be an object")
        unknown = set(obj) - {"name", "n", "m", "E"}
        if unknown:
            raise InputError(f"spec: unknown field(s) {sorted(unknown)}")
        for req in ("n", "m"):
            if req not in obj:
                raise InputError(f"spec: missing field {req!r}")
            if not isinstance(obj[req], int) or isinstance(obj[req], bool):
                raise InputError(f"spec: field {req!r} must be an integer")
        name = obj.get("name")
        if name is not None and not isinstance(name, str):
            raise InputError("spec: field 'name' must be a string")
        entries = obj.get("E", [])
        if not isinstance(entries, list):
            raise InputError("spec: field 'E' must be a list")
        E: dict = {}
        for pos, item in enumerate(entries):
            where = f"spec: E[{pos}]"
            if not isinstance(item, dict):
                raise InputError(f"{where} must be an object")
            extra = set(item) - {"alpha", "k", "j", "value"}
            if extra:
                raise InputError(f"{where}: unknown field(s) {sorted(extra)}")
            for fld in ("alpha", "k", "j"):
                if not isinstance(item.get(fld), int) or isinstance(item.get(fld), bool):
                    raise InputError(f"{where}: field {fld!r} must be an integer")
            if not isinstance(item.get("value"), str):
                raise InputError(f"{where}: field 'value' must be a Gaussian-rational string")
            try:
                value = GaussQ.parse(item["value"])
            except InputError as exc:
                raise InputError(f"{where}: field 'value': {exc}") from None
            key = (item["alpha"], item["k"], item["j"])
            _check_index(obj["n"], obj["m"], key, where)
            if key in E:
                raise InputError(f"{where}: duplicate entry for {key}")
            E[key] = value
        return cls(obj["n"], obj["m"], E, name)

    @classmethod
    def loads(cls, text: str) -> "AlgebraSpec":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"spec: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_json(obj)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _check_index(n, m, key, where):
    alpha, k, j = key
    if not (n < alpha <= n + m):
        raise InputError(f"{where}: field 'alpha'={alpha} out of range {n + 1}..{n + m}")
    if not (1 <= k <= n):
        raise InputError(f"{where}: field 'k'={k} out of range 1..{n}")
    if not (1 <= j <= n):
        raise InputError(f"{where}: field 'j'={j} out of range 1..{n}")


# ---------------------------------------------------------------------------
# complexified brackets


def complex_structure_constants(spec: AlgebraSpec) -> dict:
    """``{(a, b): {c: value}}`` for ``[u_a, u_b] = sum_c value u_c`` on the complex basis."""
    N = spec.dim
    out: dict = {}
    for k in spec.noncentral:
        for j in spec.noncentral:
            vec = {}
            for alpha in spec.central:
                e = spec.e(alpha, k, j)
                f = spec.f(alpha, k, j)
                if e:
                    vec[alpha - 1] = e
                if f:
                    vec[N + alpha - 1] = f
            if vec:
                a, b = N + k - 1, j - 1
                out[(a, b)] = vec
                out[(b, a)] = {c: -v for c, v in vec.items()}
    return out


def bracket(spec_or_constants, u, v):
    """Complex-bilinear bracket of two coordinate vectors of length ``2N``."""
    consts = spec_or_constants if isinstance(spec_or_constants, dict) else complex_structure_constants(spec_or_constants)
    out = [ZERO] * len(u)
    if not consts:
        return out
    nzu = [(a, x) for a, x in enumerate(u) if x]
    nzv = [(b, y) for b, y in enumerate(v) if y]
    for a, x in nzu:
        for b, y in nzv:
            vec = consts.get((a, b))
            if vec:
                xy = x * y
                for c, val in vec.items():
                    out[c] = out[c] + xy * val
    return out


def real_to_complex(N: int, r) -> list:
    """Coordinates in the real basis -> complex coordinate vector."""
    out = [ZERO] * (2 * N)
    for q in range(N):
        x, y = GaussQ.coerce(r[2 * q]), GaussQ.coerce(r[2 * q + 1])
        out[q] = out[q] + x + I * y
        out[N + q] = out[N + q] + x - I * y
    return out


def complex_to_real(N: int, c, check: bool = True) -> list:
    """Inverse of :func:`real_to_complex` for real vectors."""
    out = []
    for q in range(N):
        a, b = c[q], c[N + q]
        if check and a.conjugate() != b:
            raise InvariantViolation("vector is not real")
        s = (a + b) * HALF
        t = (a - b) * HALF * (-I)
        out.extend([s, t])
    return out


# ---------------------------------------------------------------------------
# real brackets


@dataclass(frozen=True)
class RealBrackets:
    """Rational structure constants on the real basis ``X_1, JX_1, ...``."""

    dim: int
    constants: Mapping[tuple, tuple]  # (r, s) -> tuple of Fractions, nonzero pairs only

    def bracket(self, r: int, s: int) -> tuple:
        return self.constants.get((r, s), (Fraction(0),) * self.dim)

    def bracket_vec(self, u, v) -> list:
        out = [ZERO] * self.dim
        for (r, s), vec in self.constants.items():
            x, y = u[r], v[s]
            if x and y:
                xy = GaussQ.coerce(x) * GaussQ.coerce(y)
                out = [o + xy * c for o, c in zip(out, vec)]
        return out

    def j_matrix(self) -> list:
        """Columns of J on the real basis."""
        cols = []
        for r in range(self.dim):
            col = [Fraction(0)] * self.dim
            if r % 2 == 0:
                col[r + 1] = Fraction(1)
            else:
                col[r - 1] = Fraction(-1)
            cols.append(col)
        return cols


def real_brackets(spec: AlgebraSpec) -> RealBrackets:
    N = spec.dim
    consts = complex_structure_constants(spec)
    basis = [real_to_complex(N, [ONE if i == r else ZERO for i in range(2 * N)]) for r in range(2 * N)]
    out = {}
    for r in range(2 * N):
        for s in range(2 * N):
            c = bracket(consts, basis[r], basis[s])
            if any(c):
                vec = complex_to_real(N, c)
                for x in vec:
                    if not x.is_real():
                        raise InvariantViolation("real bracket has an imaginary constant")
                out[(r, s)] = tuple(x.re for x in vec)
    return RealBrackets(2 * N, out)


def apply_j(v) -> list:
    """J on a real-basis coordinate vector."""
    out = [ZERO] * len(v)
    for q in range(0, len(v), 2):
        x, y = GaussQ.coerce(v[q]), GaussQ.coerce(v[q + 1])
        out[q] = -y
        out[q + 1] = x
    return out


def recover_E(rb: RealBrackets, n: int, m: int) -> dict:
    """Read the complex constants back off the real brackets."""
    N = n + m
    E = {}
    for k in range(1, n + 1):
        for j in range(1, n + 1):
            tbar_k = [ZERO] * (2 * N)
            t_j = [ZERO] * (2 * N)
            # T_q = (X_q - i JX_q)/2 and Tbar_q = (X_q + i JX_q)/2
            tbar_k[2 * (k - 1)], tbar_k[2 * (k - 1) + 1] = HALF, HALF * I
            t_j[2 * (j - 1)], t_j[2 * (j - 1) + 1] = HALF, -HALF * I
            val = rb.bracket_vec(tbar_k, t_j)
            c = _real_coords_to_complex(N, val)
            for alpha in range(n + 1, N + 1):
                if c[alpha - 1]:
                    E[(alpha, k, j)] = c[alpha - 1]
    return E


def _real_coords_to_complex(N, r):
    # linear over C: X_q -> e_q + ebar_q, JX_q -> i e_q - i ebar_q
    return real_to_complex(N, r)


def from_real_brackets(rb: RealBrackets, n: int, m: int, name: str | None = None) -> AlgebraSpec:
    return AlgebraSpec(n, m, recover_E(rb, n, m), name)


def derive_F(spec: AlgebraSpec) -> dict:
    """``F[a,k,j] = -conj(E[a,j,k])``, nonzero entries only."""
    out = {}
    for alpha in spec.central:
        for k in spec.noncentral:
            for j in spec.noncentral:
                v = spec.f(alpha, k, j)
                if v:
                    out[(alpha, k, j)] = v
    return out


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Validation:
    ok: bool
    declared_center_dim: int
    actual_center_dim: int
    warnings: tuple = ()

    @property
    def center_matches(self) -> bool:
        return self.declared_center_dim == self.actual_center_dim


def center_basis(spec: AlgebraSpec) -> list:
    """Real-basis coordinates of a basis of the center."""
    rb = real_brackets(spec)
    d = rb.dim
    rows = []
    for s in range(d):
        for t in range(d):
            rows.append([rb.bracket(r, s)[t] for r in range(d)])
    return kernel_basis(Matrix(rows, d))


def validate(spec) -> Validation:
    """Accept a spec (or its JSON object) and report center diagnostics."""
    if isinstance(spec, dict):
        spec = AlgebraSpec.from_json(spec)
    actual = len(center_basis(spec))
    declared = 2 * spec.m
    warnings = []
    if actual != declared:
        whole = " (the whole algebra)" if actual == 2 * spec.dim else ""
        warnings.append(f"actual center has real dimension {actual}{whole}, declared center has {declared}")
    return Validation(True, declared, actual, tuple(warnings))


# ---------------------------------------------------------------------------
# built-in families

_MINUS_HALF_I = GaussQ(0, Fraction(-1, 2))


def torus(n: int = 2, m: int = 1) -> AlgebraSpec:
    return AlgebraSpec(n, m, {}, f"torus({n},{m})")


def kodaira(n: int = 1) -> AlgebraSpec:
    return AlgebraSpec(n, 1, {(n + 1, j, j): _MINUS_HALF_I for j in range(1, n + 1)}, f"kodaira({n})")


def heisenberg_abelian(n: int = 2, m: int = 1) -> AlgebraSpec:
    if m < 1:
        raise InputError("heisenberg_abelian needs m >= 1")
    return AlgebraSpec(n, m, {(n + 1, j, j): _MINUS_HALF_I for j in range(1, n + 1)}, f"heisenberg_abelian({n},{m})")


def hxh(n1: int = 1, n2: int = 1) -> AlgebraSpec:
    n = n1 + n2
    E = {(n + 1, j, j): _MINUS_HALF_I for j in range(1, n1 + 1)}
    E.update({(n + 1, j, j): HALF for j in range(n1 + 1, n + 1)})
    return AlgebraSpec(n, 1, E, f"hxh({n1},{n2})")


def w6() -> AlgebraSpec:
    return AlgebraSpec(2, 1, {(3, 1, 2): -ONE}, "w6")


def p6() -> AlgebraSpec:
    return AlgebraSpec(2, 1, {(3, 1, 1): HALF * I, (3, 1, 2): HALF, (3, 2, 1): HALF}, "p6")


def kodaira_product() -> AlgebraSpec:
    return AlgebraSpec(2, 2, {(3, 1, 1): ONE, (4, 2, 2): ONE}, "kodaira_product")


BUILTINS = {
    "torus": torus,
    "kodaira": kodaira,
    "heisenberg_abelian": heisenberg_abelian,
    "hxh": hxh,
    "w6": w6,
    "p6": p6,
    "kodaira_product": kodaira_product,
}

# the six 6-dimensional examples, in table order
TABLE_ROWS = (
    ("T^6", lambda: torus(2, 1)),
    ("(G\\H5)xS^1", lambda: heisenberg_abelian(2, 1)),
    ("(G\\H3)xT^3", lambda: heisenberg_abelian(1, 2)),
    ("(G\\H3)x(G\\H3)", lambda: hxh(1, 1)),
    ("G\\W6", w6),
    ("G\\P6", p6),
)


def builtin(name: str, *params: int) -> AlgebraSpec:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise InputError(f"unknown built-in algebra {name!r}; choose from {sorted(BUILTINS)}") from None
    try:
        return factory(*params)
    except TypeError:
        raise InputError(f"bad parameters {params} for built-in {name!r}") from None
