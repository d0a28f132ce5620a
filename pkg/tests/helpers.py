"""Random inputs shared by the property tests."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from nilkur.algebra import AlgebraSpec
from nilkur.dolbeault import VectorForm, _basis
from nilkur.exact import ZERO, GaussQ

VALUES = [GaussQ(0), GaussQ(1), GaussQ(-1), GaussQ(0, 1), GaussQ(0, -1),
          GaussQ(Fraction(1, 2)), GaussQ(Fraction(-1, 2)), GaussQ(0, Fraction(1, 2)), GaussQ(0, Fraction(-1, 2))]


def random_spec(rng: random.Random, max_n: int = 3, max_m: int = 2, fill: float = 0.5) -> AlgebraSpec:
    n = rng.randint(1, max_n)
    m = rng.randint(1, max_m)
    E = {}
    for alpha in range(n + 1, n + m + 1):
        for k in range(1, n + 1):
            for j in range(1, n + 1):
                if rng.random() < fill:
                    E[(alpha, k, j)] = rng.choice(VALUES)
    return AlgebraSpec(n, m, E, "random")


def random_vector(rng: random.Random, size: int, fill: float = 0.6) -> list:
    return [rng.choice(VALUES) if rng.random() < fill else ZERO for _ in range(size)]


def random_form(rng: random.Random, dim: int, degree: int = 1, fill: float = 0.6) -> VectorForm:
    return VectorForm.from_vector(dim, degree, random_vector(rng, len(_basis(dim, degree)), fill))


def combine(rng: random.Random, basis, size: int) -> list:
    v = [ZERO] * size
    for b in basis:
        c = rng.choice(VALUES)
        if c:
            v = [x + c * y for x, y in zip(v, b)]
    return v


gauss = st.sampled_from(VALUES)


@st.composite
def specs(draw, max_n: int = 3, max_m: int = 2):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    keys = [(a, k, j) for a in range(n + 1, n + m + 1) for k in range(1, n + 1) for j in range(1, n + 1)]
    E = {key: draw(gauss) for key in keys if draw(st.booleans())}
    return AlgebraSpec(n, m, E, "drawn")
