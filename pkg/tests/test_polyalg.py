import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from levellab.errors import InputError
from levellab.polyalg import (
    FORMS,
    IdealData,
    SparsePoly,
    contains_unit,
    form,
    groebner,
    ideal_member,
    irrelevant_by_leading_terms,
    jacobian_ideal,
    normal_form,
    projective_smooth,
    radical_member,
    singular_points_bruteforce,
    structural_checks_fisher9,
)

VARS = ("x", "y", "z")


def random_poly(rng, p, vars=VARS, terms=4, deg=3):
    out = SparsePoly(vars, None, p)
    for _ in range(terms):
        e = [rng.randrange(deg + 1) for _ in vars]
        c = rng.randrange(1, 7) if p == 0 else rng.randrange(1, p)
        mono = SparsePoly.constant(vars, c, p)
        for v, k in zip(vars, e):
            mono = mono * SparsePoly.variable(vars, v, p) ** k
        out = out + mono
    return out


def random_ideal(seed, p):
    rng = random.Random(seed)
    gens = [random_poly(rng, p, terms=rng.randrange(2, 4)) for _ in range(rng.randrange(2, 4))]
    gens = [g for g in gens if not g.is_zero()] or [SparsePoly.variable(VARS, "x", p)]
    return IdealData.of(gens)


def to_sympy(f: SparsePoly):
    return sympy.sympify(f.to_text().replace("^", "**"))


# -- text format -------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(FORMS))
def test_registry_text_round_trip(name):
    f = form(name)
    text = f.to_text()
    g = SparsePoly.from_text(text, f.vars)
    assert g == f
    assert g.to_text() == text


def test_parser_forms():
    f = SparsePoly.from_text("144[(y+z)x^3-3x^2yz] - 2·x*y/3", VARS)
    assert f.terms[(3, 1, 0)] == 144
    assert f.terms[(1, 1, 0)] == Fraction(-2, 3)
    with pytest.raises(InputError):
        SparsePoly.from_text("x^", VARS)
    with pytest.raises(InputError):
        SparsePoly.from_text("x + w", VARS)


def test_fisher_structure():
    rep = structural_checks_fisher9()
    assert rep["all_homogeneous_cubic"]
    c1 = form("fisher9-c1p")
    assert c1.terms[(0, 0, 2, 1, 0, 0)] == 3  # 3x^2y
    assert all(sum(e[2:]) == 3 for e in form("fisher9-c2m").terms)
    assert c1.evaluate([5, 7, 0, 0, 0, 0]) == 0


# -- Groebner bases against an independent implementation ----------------------


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("p", [0, 7])
def test_groebner_matches_sympy(seed, p):
    I = random_ideal(seed, p)
    G = groebner(I)
    kw = {"modulus": p} if p else {}
    ref = sympy.groebner([to_sympy(g) for g in I.gens], *sympy.symbols("x y z"), order="grevlex", **kw)
    xyz = sympy.symbols("x y z")

    def canon(exprs):
        return {frozenset(sympy.Poly(e, *xyz, **kw).monic().terms()) for e in exprs}

    assert canon(to_sympy(g) for g in G.gens) == canon(ref.exprs)
    assert len(G.gens) == len(ref.exprs)


@pytest.mark.parametrize("seed", range(8))
def test_groebner_idempotent(seed):
    G = groebner(random_ideal(seed, 0))
    assert groebner(G).gens == G.gens


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.sampled_from([0, 5, 11]))
def test_normal_form_is_linear(seed, p):
    rng = random.Random(seed)
    G = groebner(random_ideal(seed, p))
    f, g = random_poly(rng, p), random_poly(rng, p)
    assert normal_form(f + g, G) == normal_form(f, G) + normal_form(g, G)
    for h in G.gens:
        assert ideal_member(h * f, G)


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_radical_membership_monotone(seed):
    rng = random.Random(seed)
    I = random_ideal(seed, 5)
    bigger = IdealData.of(I.gens + [random_poly(rng, 5)])
    for v in VARS:
        f = SparsePoly.variable(VARS, v, 5)
        if radical_member(f, I):
            assert radical_member(f, bigger)


def test_radical_membership_examples():
    x, y = (SparsePoly.variable(("x", "y"), v) for v in ("x", "y"))
    I = IdealData.of([x**3, y**2])
    assert radical_member(x, I) and radical_member(x + y, I)
    assert not ideal_member(x, I)
    J = IdealData.of([x * y])
    assert not radical_member(x, J)
    assert contains_unit(IdealData.of([x, x + 1]))


# -- smoothness -----------------------------------------------------------------


def test_klein_quartic():
    f = form("klein")
    assert projective_smooth(f)
    for p in (2, 3, 5, 11, 13):
        assert projective_smooth(f, f"Fp:{p}")
    assert not projective_smooth(f, "Fp:7")


@pytest.mark.parametrize("field", ["Q", "Fp:2", "Fp:3", "Fp:5", "Fp:7", "Fp:11", "Fp:13"])
def test_smoothness_routes_agree_on_105a2(field):
    f = form("hk-105a2-min").change_field(field)
    assert projective_smooth(f) == irrelevant_by_leading_terms(jacobian_ideal(f))
    assert projective_smooth(f) == (field not in ("Fp:3", "Fp:5", "Fp:7"))


def test_both_105a2_models_smooth_over_q():
    assert projective_smooth(form("hk-105a2"))


def test_bruteforce_finds_the_node():
    f = SparsePoly.from_text("y^2*z - x^3 - x^2*z", VARS, "Fp:5")
    assert not projective_smooth(f)
    assert singular_points_bruteforce(f, 1) == 1
    g = SparsePoly.from_text("y^2*z - x^3 - x*z^2 - z^3", VARS, "Fp:5")
    assert projective_smooth(g)
    assert singular_points_bruteforce(g, 2) == 0


def test_smoothness_rejects_non_forms():
    with pytest.raises(InputError):
        projective_smooth(SparsePoly.from_text("x^2 + y", VARS))
