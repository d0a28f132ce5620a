import json
import random
from fractions import Fraction

import pytest
from hypothesis import given

from helpers import random_spec, specs
from nilkur.algebra import (AlgebraSpec, apply_j, builtin, complex_structure_constants, derive_F,
                            from_real_brackets, hxh, kodaira, kodaira_product, real_brackets, torus,
                            validate, w6)
from nilkur.errors import InputError
from nilkur.exact import HALF, I, ONE, ZERO, GaussQ, gq


def test_w6_valid_with_matching_center():
    v = validate(w6())
    assert v.ok and v.center_matches and v.actual_center_dim == 2 and not v.warnings


def test_abelian_spec_warns_about_center():
    v = validate(torus(2, 1))
    assert v.ok
    assert v.actual_center_dim == 6
    assert "whole algebra" in v.warnings[0]


def test_out_of_range_index_names_triple():
    with pytest.raises(InputError, match=r"alpha=3, k=3, j=1"):
        AlgebraSpec(2, 1, {(3, 3, 1): ONE})


def test_json_rejects_unknown_and_bad_fields():
    with pytest.raises(InputError, match="unknown field"):
        AlgebraSpec.from_json({"n": 1, "m": 1, "E": [], "colour": 1})
    with pytest.raises(InputError, match="'alpha'"):
        AlgebraSpec.from_json({"n": 2, "m": 1, "E": [{"alpha": 1, "k": 1, "j": 1, "value": "1"}]})
    with pytest.raises(InputError, match="'value'"):
        AlgebraSpec.from_json({"n": 1, "m": 1, "E": [{"alpha": 2, "k": 1, "j": 1, "value": "x"}]})
    with pytest.raises(InputError, match="line"):
        AlgebraSpec.loads('{"n": 1,')


def test_json_round_trip():
    s = builtin("p6")
    again = AlgebraSpec.loads(s.dumps())
    assert again == s and again.name == "p6"
    assert json.loads(s.dumps())["E"][0] == {"alpha": 3, "k": 1, "j": 1, "value": "1/2i"}


def test_derive_F_examples():
    assert derive_F(w6()) == {(3, 2, 1): ONE}
    assert derive_F(kodaira(1)) == {(2, 1, 1): gq("-1/2i")}
    assert derive_F(torus(2, 1)) == {}


def test_hxh_real_brackets():
    rb = real_brackets(hxh())
    # basis order X1, JX1, X2, JX2, Z, JZ
    z_coeffs = {(0, 1): rb.bracket(0, 1), (2, 3): rb.bracket(2, 3)}
    # [X1, JX1] and [X2, JX2] land on independent central directions
    v1, v2 = z_coeffs[(0, 1)], z_coeffs[(2, 3)]
    assert v1[:4] == (0,) * 4 and v2[:4] == (0,) * 4
    assert v1[4] * v2[5] - v1[5] * v2[4] != 0
    assert rb.bracket(0, 2) == (0,) * 6


def test_hxh_complex_brackets():
    c = complex_structure_constants(hxh())
    N = 3
    # [Tbar_1, T_1] = -i/2 (W + Wbar), [Tbar_2, T_2] = 1/2 (W - Wbar)
    assert c[(N + 0, 0)] == {2: gq("-1/2i"), N + 2: gq("-1/2i")}
    assert c[(N + 1, 1)] == {2: HALF, N + 2: -HALF}


def test_kodaira_product_brackets():
    c = complex_structure_constants(kodaira_product())
    N = 4
    assert c[(N + 0, 0)] == {2: ONE, N + 2: -ONE}
    assert c[(N + 1, 1)] == {3: ONE, N + 3: -ONE}


def test_torus_real_brackets_vanish():
    assert real_brackets(torus(2, 1)).constants == {}


def test_unknown_builtin():
    with pytest.raises(InputError):
        builtin("sl2")


def _structural_checks(spec):
    rb = real_brackets(spec)
    d = rb.dim
    zero = (Fraction(0),) * d
    center_dirs = set(range(2 * spec.n, d))
    for r in range(d):
        for s in range(d):
            v = rb.bracket(r, s)
            assert tuple(-x for x in rb.bracket(s, r)) == v
            assert all(x == 0 for i, x in enumerate(v) if i not in center_dirs)
            jr = apply_j([ONE if i == r else ZERO for i in range(d)])
            js = apply_j([ONE if i == s else ZERO for i in range(d)])
            assert rb.bracket_vec(jr, js) == [GaussQ(x) for x in v]
    # Jacobi: all double brackets vanish since brackets land in the center
    for r in range(d):
        for s in range(d):
            inner = rb.bracket(r, s)
            for t in range(d):
                ev = [ONE if i == t else ZERO for i in range(d)]
                assert not any(rb.bracket_vec([GaussQ(x) for x in inner], ev))
    # reality: conj([Tbar_k, T_j]) = [T_k, Tbar_j]
    c = complex_structure_constants(spec)
    N = spec.dim
    for k in range(spec.n):
        for j in range(spec.n):
            a = c.get((N + k, j), {})
            b = c.get((k, N + j), {})
            conj = {(x + N) % (2 * N): v.conjugate() for x, v in a.items()}
            assert conj == b
    assert from_real_brackets(rb, spec.n, spec.m) == spec


@pytest.mark.parametrize("name", ["torus", "kodaira", "heisenberg_abelian", "hxh", "w6", "p6", "kodaira_product"])
def test_builtin_structure(name):
    _structural_checks(builtin(name))


def test_random_spec_structure():
    rng = random.Random(21)
    for _ in range(30):
        _structural_checks(random_spec(rng, 2, 2))


@given(specs(2, 2))
def test_real_round_trip_property(spec):
    rb = real_brackets(spec)
    assert from_real_brackets(rb, spec.n, spec.m) == spec
