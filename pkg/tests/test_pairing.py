import random

import pytest
from hypothesis import given, settings, strategies as st

from levellab.curve import EllipticCurve, torsion_basis
from levellab.errors import CharacteristicError, InputError
from levellab.exactfield import GF
from levellab.pairing import (
    CyclicSubgroup,
    is_primitive_root,
    push_subgroup,
    standard_subgroup,
    velu_quotient,
    weil_pairing,
    weil_pairing_shifted,
)

CASES = [(GF(31), (1, 0), 5), (GF(13), (2, 3), 3), (GF(11), (1, 1), 4), (GF(29), (3, 7), 7)]


def basis(case):
    F, ab, N = case
    E = EllipticCurve(F, ab)
    k, P, Q = torsion_basis(E, N)
    return P.E, N, P, Q


@pytest.fixture(scope="module", params=range(len(CASES)))
def tors(request):
    return basis(CASES[request.param])


def test_pairing_properties(tors):
    E, N, P, Q = tors
    e = weil_pairing(E, N, P, Q)
    assert is_primitive_root(e, N)
    assert weil_pairing(E, N, P, P) == 1
    assert weil_pairing(E, N, Q, P) == e.inverse()
    rng = random.Random(N)
    for _ in range(6):
        a, b, c, d = (rng.randrange(N) for _ in range(4))
        X, Y = a * P + b * Q, c * P + d * Q
        assert weil_pairing(E, N, X, Y) == e ** ((a * d - b * c) % N)


def test_pairing_routes_agree(tors):
    E, N, P, Q = tors
    e = weil_pairing(E, N, P, Q)
    for start in (0, 3, 11):
        assert weil_pairing_shifted(E, N, P, Q, start) == e


def test_pairing_is_frobenius_equivariant(tors):
    from levellab.moduli import frobenius_point

    E, N, P, Q = tors
    e = weil_pairing(E, N, P, Q)
    assert weil_pairing(E, N, frobenius_point(P), frobenius_point(Q)) == e.frobenius()


def test_cyclic_subgroup_canonical_generator(tors):
    E, N, P, Q = tors
    C1 = CyclicSubgroup(E, P, N)
    for u in range(2, N):
        if all((u * i) % N for i in range(1, N)) and u % N:
            C2 = CyclicSubgroup(E, u * P, N)
            assert C2 == C1 and C2.gen == C1.gen
    assert len(C1.points()) == N
    with pytest.raises(InputError):
        CyclicSubgroup(E, P, N + 1)


def test_standard_subgroups():
    E2, N2, P2, Q2 = basis((GF(11), (1, 1), 4))
    C = CyclicSubgroup(E2, P2, 4)
    S = standard_subgroup(C, 2)
    assert S.order == 2 and set(S.points()) <= set(C.points())
    with pytest.raises(InputError):
        standard_subgroup(C, 3)


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_velu_is_a_homomorphism_with_the_right_kernel(seed):
    rng = random.Random(seed)
    E, N, P, Q = basis(CASES[rng.randrange(len(CASES))])
    K = CyclicSubgroup(E, rng.choice([P, Q, P + Q]), N)
    phi = velu_quotient(E, K)
    assert phi.degree == N
    n = E.count_points()
    for _ in range(3):
        assert (n * phi.codomain.random_point(rng)).is_infinity  # isogenous curves have equal order
    for R in K.points():
        assert phi(R).is_infinity
    X, Y = E.random_point(rng), E.random_point(rng)
    assert phi(X + Y) == phi(X) + phi(Y)
    others = [R for R in (P, Q, P + Q) if R not in K]
    T = others[0]
    img = push_subgroup(phi, CyclicSubgroup(E, T, N))
    assert img.order == N


def test_velu_rejects_characteristic_kernel():
    F = GF(5)
    E = EllipticCurve(F, (1, 1))
    n = E.count_points()
    pts = [R for R in E.points() if not R.is_infinity and (5 * R).is_infinity]
    if pts:
        with pytest.raises(CharacteristicError):
            velu_quotient(E, CyclicSubgroup(E, pts[0], 5))
    else:
        assert n % 5
