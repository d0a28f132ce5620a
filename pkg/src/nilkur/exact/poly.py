"""Sparse multivariate polynomials with Gaussian-rational coefficients."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from nilkur.errors import InputError
from nilkur.exact.gaussian import ONE, ZERO, GaussQ


def _add_exp(e1, e2):
    return tuple(a + b for a, b in zip(e1, e2))


class Poly:
    """Polynomial in ``nvars`` variables stored as ``{exponent tuple: GaussQ}``.

    Zero coefficients are never stored. Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, GaussQ] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise InputError(f"exponent {exp} does not have {nvars} entries")
                c = GaussQ.coerce(c)
                if c:
                    clean[tuple(exp)] = c
        self.terms = clean

    @classmethod
    def _wrap(cls, nvars, terms):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        value = GaussQ.coerce(value)
        if not value:
            return cls._wrap(nvars, {})
        return cls._wrap(nvars, {(0,) * nvars: value})

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._wrap(nvars, {})

    @classmethod
    def var(cls, nvars: int, index: int, coeff=ONE) -> "Poly":
        if not 0 <= index < nvars:
            raise InputError(f"variable index {index} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): coeff})

    @classmethod
    def lift(cls, value, nvars: int) -> "Poly":
        """Coerce a scalar or a Poly with matching variable count."""
        if isinstance(value, Poly):
            if value.nvars != nvars:
                raise InputError(f"variable count mismatch: {value.nvars} != {nvars}")
            return value
        return cls.const(nvars, value)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise InputError(f"variable count mismatch: {self.nvars} != {other.nvars}")
            return other
        return Poly.const(self.nvars, other)

    # ring operations --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp)
            if s is None:
                out[exp] = c
            else:
                s = s + c
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return Poly._wrap(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._wrap(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, value) -> "Poly":
        value = GaussQ.coerce(value)
        if not value:
            return Poly.zero(self.nvars)
        if value == ONE:
            return self
        return Poly._wrap(self.nvars, {e: c * value for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.nvars)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                v = c1 * c2
                s = out.get(e)
                out[e] = v if s is None else s + v
        return Poly._wrap(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            q = self.exact_divide(other)
            if q is None:
                raise ValueError("polynomial division is not exact")
            return q
        return self.scale(GaussQ.coerce(other).inverse())

    def __pow__(self, k: int):
        result = Poly.const(self.nvars, ONE)
        for _ in range(k):
            result = result * self
        return result

    # queries ----------------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (GaussQ, int)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def total_degree(self) -> int:
        """Largest total degree of a term; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant(self) -> GaussQ:
        return self.terms.get((0,) * self.nvars, ZERO)

    def to_scalar(self) -> GaussQ:
        if not self.is_constant():
            raise InputError("polynomial is not constant")
        return self.constant()

    def coefficient(self, exp: Sequence[int]) -> GaussQ:
        return self.terms.get(tuple(exp), ZERO)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, a in enumerate(e) if a}

    # transformations --------------------------------------------------------

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly._wrap(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def truncate(self, max_degree: int) -> "Poly":
        return Poly._wrap(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= max_degree})

    def conjugate_coefficients(self) -> "Poly":
        return Poly._wrap(self.nvars, {e: c.conjugate() for e, c in self.terms.items()})

    def substitute(self, values: Mapping[int, object]) -> "Poly":
        """Set the variables in ``values`` (index -> scalar) and keep the rest."""
        vals = {i: GaussQ.coerce(v) for i, v in values.items()}
        for i in vals:
            if not 0 <= i < self.nvars:
                raise InputError(f"variable index {i} out of range")
        out: dict = {}
        for exp, c in self.terms.items():
            e = list(exp)
            for i, v in vals.items():
                if e[i]:
                    c = c * v ** e[i]
                    e[i] = 0
                    if not c:
                        break
            if c:
                key = tuple(e)
                s = out.get(key)
                out[key] = c if s is None else s + c
        return Poly._wrap(self.nvars, {e: c for e, c in out.items() if c})

    def evaluate(self, point: Sequence[object]) -> GaussQ:
        if len(point) != self.nvars:
            raise InputError(f"evaluation point has {len(point)} entries, expected {self.nvars}")
        return self.substitute(dict(enumerate(point))).constant()

    def derivative(self, index: int) -> "Poly":
        out = {}
        for exp, c in self.terms.items():
            a = exp[index]
            if a:
                e = list(exp)
                e[index] = a - 1
                out[tuple(e)] = c * a
        return Poly._wrap(self.nvars, out)

    def remap(self, nvars: int, mapping: Sequence[int]) -> "Poly":
        """Send variable ``i`` to variable ``mapping[i]`` of an ``nvars``-variable ring."""
        out: dict = {}
        for exp, c in self.terms.items():
            e = [0] * nvars
            for i, a in enumerate(exp):
                if a:
                    e[mapping[i]] += a
            key = tuple(e)
            s = out.get(key)
            out[key] = c if s is None else s + c
        return Poly._wrap(nvars, {e: c for e, c in out.items() if c})

    def monomial_content(self) -> tuple:
        """Componentwise minimum exponent over all terms."""
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def strip_monomial_content(self) -> "Poly":
        m = self.monomial_content()
        if not any(m):
            return self
        return Poly._wrap(self.nvars, {tuple(a - b for a, b in zip(e, m)): c for e, c in self.terms.items()})

    def leading_term(self):
        """Lexicographically largest exponent and its coefficient."""
        exp = max(self.terms)
        return exp, self.terms[exp]

    def normalized(self) -> "Poly":
        """Scale so the lexicographically leading coefficient is 1."""
        if not self.terms:
            return self
        return self.scale(self.leading_term()[1].inverse())

    def exact_divide(self, other: "Poly") -> "Poly | None":
        """Quotient ``self / other`` if it is a polynomial, else ``None``."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e, lead_c = other.leading_term()
        inv = lead_c.inverse()
        rem = self
        quot = Poly.zero(self.nvars)
        while rem.terms:
            e, c = rem.leading_term()
            diff = tuple(a - b for a, b in zip(e, lead_e))
            if any(d < 0 for d in diff):
                return None
            term = Poly._wrap(self.nvars, {diff: c * inv})
            quot = quot + term
            rem = rem - term * other
        return quot

    def divisible_by(self, other: "Poly") -> bool:
        return self.exact_divide(other) is not None

    # printing ---------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-a for a in t[0])))

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"t{i + 1}" for i in range(self.nvars)]
        pieces = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(exp) if a
            )
            if not mono:
                pieces.append(f"({c})")
            elif c == ONE:
                pieces.append(mono)
            elif c == -ONE:
                pieces.append(f"-{mono}")
            else:
                pieces.append(f"({c})*{mono}")
        out = " + ".join(pieces)
        return out.replace("+ -", "- ")

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.nvars}, {self.format()})"


def poly_vars(nvars: int) -> list[Poly]:
    """The ``nvars`` coordinate polynomials ``t1, ..., tN``."""
    return [Poly.var(nvars, i) for i in range(nvars)]


def poly_sum(items: Iterable[Poly], nvars: int) -> Poly:
    out: dict = {}
    for p in items:
        for e, c in p.terms.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
    return Poly._wrap(nvars, {e: c for e, c in out.items() if c})
