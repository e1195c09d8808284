from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, strategies as st

from levellab.errors import InputError, MembershipError, ResourceError
from levellab.exactfield import (
    GF,
    QQ,
    GaloisRing,
    discrete_log,
    divisors,
    euler_phi,
    factorize,
    find_irreducible,
    is_irreducible,
    is_prime,
    parse_element,
    parse_field,
    primitive_root_of_unity,
    units_mod,
    valuation,
)

FIELDS = [GF(2), GF(5), GF(2, 3), GF(3, 2), GF(7, 2), GF(31)]


def field_and_codes(n):
    return st.sampled_from(FIELDS).flatmap(
        lambda F: st.tuples(st.just(F), *[st.integers(0, F.q - 1) for _ in range(n)])
    )


# -- integers ---------------------------------------------------------------


def test_small_primes_match_trial_division():
    naive = [n for n in range(2, 500) if all(n % d for d in range(2, n))]
    assert [n for n in range(500) if is_prime(n)] == naive


@given(st.integers(1, 10**6))
def test_factorize_multiplies_back(n):
    f = factorize(n)
    assert prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


@given(st.integers(1, 2000))
def test_euler_phi_counts_units(n):
    assert euler_phi(n) == len(units_mod(n))
    assert sorted(divisors(n)) == [d for d in range(1, n + 1) if n % d == 0]


def test_valuation():
    assert valuation(7448, 2) == 3
    assert valuation(7448, 7) == 2
    assert valuation(7448, 19) == 1


# -- finite fields ------------------------------------------------------------


def test_irreducible_modulus_is_smallest_by_code():
    assert find_irreducible(2, 2) == (1, 1, 1)
    assert find_irreducible(3, 2) == (1, 0, 1)
    for p, k in [(2, 3), (3, 2), (5, 2), (7, 3)]:
        h = find_irreducible(p, k)
        assert is_irreducible(list(h), p)
        code = sum(c * p**i for i, c in enumerate(h[:-1]))
        smaller = [
            [(c // p**i) % p for i in range(k)] + [1]
            for c in range(code)
        ]
        assert not any(is_irreducible(f, p) for f in smaller)


@given(field_and_codes(3))
def test_field_axioms(data):
    F, a, b, c = data
    x, y, z = F.from_code(a), F.from_code(b), F.from_code(c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
    assert x - x == F.zero
    if not x.is_zero():
        assert x * x.inverse() == F.one


@given(field_and_codes(2))
def test_frobenius_is_an_automorphism(data):
    F, a, b = data
    x, y = F.from_code(a), F.from_code(b)
    assert (x * y).frobenius() == x.frobenius() * y.frobenius()
    assert (x + y).frobenius() == x.frobenius() + y.frobenius()
    assert x.frobenius() == x**F.p
    assert x.frobenius(F.k) == x


def test_multiplicative_group_is_cyclic_of_order_q_minus_1():
    for F in FIELDS:
        orders = {x.multiplicative_order() for x in F.elements() if not x.is_zero()}
        assert max(orders) == F.q - 1


@given(field_and_codes(1))
def test_square_roots(data):
    F, a = data
    x = F.from_code(a)
    s = x * x
    assert s.is_square()
    r = s.sqrt()
    assert r * r == s


def test_primitive_root_is_smallest_code():
    F = GF(31)
    z = primitive_root_of_unity(F, 5)
    cands = [x for x in F.elements() if not x.is_zero() and x.multiplicative_order() == 5]
    assert z == min(cands, key=lambda x: x.code)
    with pytest.raises(MembershipError):
        primitive_root_of_unity(GF(7), 5)


@given(st.integers(0, 959))
def test_discrete_log_round_trip(e):
    F = GF(31, 2)
    g = primitive_root_of_unity(F, 960)
    assert discrete_log(g, g**e, 960) == e


def test_discrete_log_cap():
    F = GF(5)
    with pytest.raises(ResourceError):
        discrete_log(F(2), F(3), 10**20)


def test_text_round_trip():
    for F in FIELDS:
        for x in list(F.elements())[:30]:
            assert parse_element(F, x.text()) == x
    assert parse_element(QQ, "-7/3") == Fraction(-7, 3)
    assert parse_field("Fq:3^2") == GF(3, 2)
    assert parse_field("Q") is QQ
    with pytest.raises(InputError):
        parse_field("R")


# -- Galois rings -------------------------------------------------------------


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 2), (5, 1), (2, 3)])
def test_galois_ring_frobenius(p, r):
    R = GaloisRing(p, r)
    els = list(R.elements())
    assert len(els) == p ** (2 * r)
    for x in els[:: max(1, len(els) // 40)]:
        assert x.frobenius().frobenius() == x
        xp = x.frobenius()
        # reduces to the p-power map modulo p
        y = x
        for _ in range(p - 1):
            y = y * x
        assert (xp.c0 - y.c0) % p == 0 and (xp.c1 - y.c1) % p == 0
        for z in els[:: max(1, len(els) // 10)]:
            assert (x * z).frobenius() == xp * z.frobenius()
            assert (x + z).frobenius() == xp + z.frobenius()


@pytest.mark.parametrize("p,r", [(2, 2), (3, 1), (3, 2)])
def test_galois_ring_units(p, r):
    R = GaloisRing(p, r)
    units = [x for x in R.elements() if x.is_unit()]
    assert len(units) == (p * p - 1) * p ** (2 * (r - 1))
    for x in units:
        assert x * x.inverse() == R.one


def test_galois_ring_rejects_reducible_modulus():
    with pytest.raises(InputError):
        GaloisRing(3, 2, (2, 0, 1))  # u^2 + 2 = (u - 1)(u + 1) mod 3
