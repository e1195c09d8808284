import pytest
from hypothesis import given, strategies as st

from levellab.charp import (
    TriangularEndo,
    alternative_modulus,
    dieudonne_crosscheck,
    endo_checks,
    endo_compose,
    endo_det,
    field_tag,
    frobenius_stable,
    ordinary_aut_count,
    pairing_equality_check,
    pairing_tables,
    quaternion_associativity,
    quaternion_quotient_count,
    smallest_field_with_roots,
    ss_component_census,
    supersingular_j_enumeration,
    supersingularity_crosscheck,
)
from levellab.curve import EllipticCurve
from levellab.errors import InputError, ResourceError
from levellab.exactfield import GF, euler_phi


def test_smallest_fields():
    assert [smallest_field_with_roots(N).q for N in range(1, 9)] == [2, 3, 4, 5, 11, 7, 8, 9]


@given(st.integers(2, 8), st.tuples(*[st.integers(0, 100)] * 8))
def test_endo_det_multiplicative(N, v):
    tag = field_tag(smallest_field_with_roots(N))
    X = TriangularEndo(N, tag, *v[:4])
    Y = TriangularEndo(N, tag, *v[4:])
    assert endo_det(endo_compose(X, Y)) == endo_det(X) * endo_det(Y) % N
    I = TriangularEndo.identity(N, tag)
    assert endo_compose(I, X) == X == endo_compose(X, I)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_endo_checks_exhaustive(N):
    rep = endo_checks(N)
    assert rep["passed"]
    assert rep["elements"] == N**4


def test_endo_input_errors():
    with pytest.raises(InputError):
        TriangularEndo(4, "p-nilpotent", 1, 0, 1, 1)
    with pytest.raises(InputError):
        TriangularEndo(6, "p-nilpotent", 1, 0, 0, 1)
    with pytest.raises(InputError):
        endo_compose(TriangularEndo.identity(4, "Fq:5^1"), TriangularEndo.identity(4, "p-nilpotent"))
    with pytest.raises(InputError):
        endo_checks(4, 7)


@pytest.mark.parametrize("N", range(1, 9))
def test_pairings_equal(N):
    assert pairing_equality_check(N)


def test_pairing_with_trivial_first_argument_is_zero():
    b1, b2 = pairing_tables(6, 7)
    one = GF(7).one.code
    assert all(v == 0 for (u, _), v in b1.items() if u == one)
    assert len(b1) == 36
    with pytest.raises(InputError):
        pairing_tables(5, 7)


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_ordinary_aut_rank(p, r):
    N = p**r
    assert ordinary_aut_count(p, r) == N * euler_phi(N) ** 2


@pytest.mark.parametrize(
    "p,r,units,quotient", [(2, 1, 12, 3), (3, 1, 72, 8), (2, 2, 192, 48), (5, 1, 600, 24)]
)
def test_quaternion_quotients(p, r, units, quotient):
    rep = quaternion_quotient_count(p, r)
    assert (rep.units, rep.kernel, rep.quotient) == (units, p * p, quotient)
    assert rep.kernel_is_subgroup and rep.kernel_is_normal
    alt = alternative_modulus(p, r)
    if alt != rep.modulus:
        assert quaternion_quotient_count(p, r, alt).quotient == quotient


def test_only_one_quadratic_modulus_over_f2():
    assert alternative_modulus(2, 1) == (1, 1, 1)
    assert alternative_modulus(3, 1) != (1, 0, 1)


def test_quaternion_cap():
    with pytest.raises(ResourceError):
        quaternion_quotient_count(7, 2, cap=10**6)


def test_quaternion_associativity_sampled_beyond_cap():
    rep = quaternion_associativity(5, 1)
    assert rep["associative"] and rep["exhaustive"] is None and rep["sampled"]


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (2, 2)])
def test_quaternion_algebra_laws(p, r):
    rep = quaternion_associativity(p, r)
    assert rep["associative"] and rep["exhaustive"]
    assert dieudonne_crosscheck(p, r)["failures"] == 0


def naive_supersingular_j(p):
    """Every short model over F_{p^2} (p >= 5), j collected when #E = 1 mod p."""
    K = GF(p, 2)
    js = set()
    for A in K.elements():
        for B in K.elements():
            if (4 * A * A * A + 27 * B * B).is_zero():
                continue
            E = EllipticCurve(K, (A, B))
            if E.j in js:
                continue
            if E.count_points(method="direct") % p == 1:
                js.add(E.j)
    return sorted(js, key=lambda j: j.code)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_supersingular_j_matches_full_scan(p):
    assert supersingular_j_enumeration(p) == naive_supersingular_j(p)


def test_supersingular_j_small_characteristic():
    assert [j.text() for j in supersingular_j_enumeration(2)] == ["0,0"]
    assert [j.text() for j in supersingular_j_enumeration(3)] == ["0,0"]
    js = supersingular_j_enumeration(13)
    assert len(js) == 1 and js[0] == GF(13, 2)(5)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
def test_supersingular_count_and_stability(p):
    js = supersingular_j_enumeration(p)
    # number of supersingular j: floor(p/12) + (0, 1, 1, 2) by p mod 12 in (1, 5, 7, 11)
    expected = p // 12 + {1: 0, 5: 1, 7: 1, 11: 2}[p % 12]
    assert len(js) == expected
    assert frobenius_stable(js)


def test_supersingular_cap():
    with pytest.raises(ResourceError):
        supersingular_j_enumeration(211)


def test_census():
    rep = ss_component_census(13, 1, 1)
    assert rep["upper_bound"] == quaternion_quotient_count(13, 1).quotient == 168
    assert rep["exact"]
    assert ss_component_census(13, 1, 5)["upper_bound"] == 5 * 168
    rep11 = ss_component_census(11, 1, 1)
    assert not rep11["exact"]
    assert rep11["lower_bound"] <= rep11["upper_bound"] == 2 * 120


def test_supersingularity_crosscheck_small():
    for p in (5, 7):
        assert supersingularity_crosscheck(p)["first_disagreement"] is None
    with pytest.raises(InputError):
        supersingularity_crosscheck(3)


def test_square_criterion_misses_trace_three_curves_in_characteristic_3():
    # y^2 = x^3 - x + 1 over F_3 has a_3 = -3: supersingular, yet #E(F_9) = 7
    E = EllipticCurve(GF(3), (-1, 1))
    assert E.trace() == -3
    n2 = E.base_change(GF(3, 2)).count_points(method="direct")
    assert n2 == 7 and n2 not in (4, 16)
    assert n2 % 3 == 1
