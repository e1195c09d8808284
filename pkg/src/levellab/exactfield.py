"""Exact arithmetic: Q, prime fields, extension fields F_{p^k}, and rank-2 Galois rings.

Rationals are plain :class:`fractions.Fraction` objects (always reduced, positive
denominator). Finite-field elements carry a reference to their :class:`FiniteField`
and a coefficient tuple ``(c0, ..., c_{k-1})`` in the power basis of the modulus.

Elements of F_{p^k} are totally ordered by their *code* ``sum c_i p^i``; every
"smallest element" choice in the package uses this order.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import InputError, MembershipError, ResourceError

DLOG_CAP = 10_000


# ---------------------------------------------------------------------------
# integers

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial division; only used on small orders (levels, kernel sizes, N)."""
    if n < 1:
        raise InputError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def valuation(n: int, ell: int) -> int:
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def euler_phi(n: int) -> int:
    out = n
    for ell in factorize(n):
        out = out // ell * (ell - 1)
    return out


def units_mod(n: int) -> list[int]:
    from math import gcd

    return [a for a in range(n) if gcd(a, n) == 1]


# ---------------------------------------------------------------------------
# dense polynomials over F_p: lists of ints, low degree first, no trailing zeros


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _ptrim([c % p for c in out])


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    b = _ptrim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            c = c * inv % p
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _ptrim(q), _ptrim([c % p for c in a[:db]])


def _pmod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    return _pdivmod(a, b, p)[1]


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(out)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, p), mod, p)
    return result


def _pinvmod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    r0, r1 = list(mod), _ptrim(list(a))
    s0, s1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0]


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test: x^(p^k) = x mod f and gcd(x^(p^(k/l)) - x, f) = 1 for primes l | k."""
    f = _ptrim(list(f))
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    for ell in prime_divisors(k):
        h = x
        for _ in range(k // ell):
            h = _ppowmod(h, p, f, p)
        if len(_pgcd(_psub(h, x, p), f, p)) != 1:
            return False
    h = x
    for _ in range(k):
        h = _ppowmod(h, p, f, p)
    return not _psub(h, x, p)


@lru_cache(maxsize=None)
def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k over F_p, as coefficients (c0, ..., c_{k-1}, 1).

    Candidates are scanned by the code ``sum c_i p^i`` of their lower coefficients.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if k < 1:
        raise InputError("degree must be >= 1")
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        f = low + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


def poly_text(f: Sequence[int], var: str = "u") -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mon:
            terms.append(str(c))
        elif c == 1:
            terms.append(mon)
        else:
            terms.append(f"{c}*{mon}")
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# fields


class RationalField:
    """Descriptor for Q; elements are Fractions."""

    characteristic = 0
    label = "Q"

    def __call__(self, v) -> Fraction:
        if isinstance(v, str):
            return Fraction(v.strip())
        return Fraction(v)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


QQ = RationalField()


class FiniteField:
    """F_{p^k} presented as F_p[u]/(modulus).

    With ``modulus=None`` the deterministic smallest irreducible is used, so two
    fields built from the same (p, k) are equal.
    """

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if k < 1:
            raise InputError("extension degree must be >= 1")
        if modulus is None:
            modulus = find_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise InputError("modulus must be monic of degree k")
        if k > 1 and not is_irreducible(modulus, p):
            raise InputError("modulus is not irreducible")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self.characteristic = p
        # x^(k+i) mod f, for reducing products of degree <= 2k-2
        self._red = []
        cur = [(-c) % p for c in modulus[:k]]
        for _ in range(max(k - 1, 0)):
            self._red.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(cur[j] - top * modulus[j]) % p for j in range(k)]
        # images (u^i)^p for the Frobenius
        frob = []
        up = _ppowmod([0, 1], p, list(modulus), p) if k > 1 else [1]
        acc = [1]
        for _ in range(k):
            frob.append(tuple(acc + [0] * (k - len(acc))))
            acc = _pmod(_pmul(acc, up, p), list(modulus), p) or [0]
        self._frob = frob
        self._zero = FieldElement(self, (0,) * k)
        self._one = FieldElement(self, (1,) + (0,) * (k - 1))
        self._nonresidue = None
        self._two_adic = None
        self._hash = hash((p, k, modulus))

    # -- construction ------------------------------------------------------
    def __call__(self, v) -> "FieldElement":
        if isinstance(v, FieldElement):
            if v.F is self or v.F == self:
                return v
            raise InputError("element belongs to a different field")
        if isinstance(v, int):
            return FieldElement(self, (v % self.p,) + (0,) * (self.k - 1))
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {v} vanishes mod {self.p}")
            return self(v.numerator) / self(v.denominator)
        if isinstance(v, str):
            return parse_element(self, v)
        if isinstance(v, (tuple, list)):
            if len(v) > self.k:
                raise InputError("too many coefficients")
            c = tuple(int(x) % self.p for x in v) + (0,) * (self.k - len(v))
            return FieldElement(self, c)
        raise InputError(f"cannot coerce {v!r} into {self}")

    @property
    def zero(self) -> "FieldElement":
        return self._zero

    @property
    def one(self) -> "FieldElement":
        return self._one

    @property
    def gen(self) -> "FieldElement":
        if self.k == 1:
            return self._one
        return FieldElement(self, (0, 1) + (0,) * (self.k - 2))

    def from_code(self, code: int) -> "FieldElement":
        p = self.p
        c = []
        for _ in range(self.k):
            code, r = divmod(code, p)
            c.append(r)
        return FieldElement(self, tuple(c))

    def elements(self) -> Iterator["FieldElement"]:
        for code in range(self.q):
            yield self.from_code(code)

    def random_element(self, rng: random.Random) -> "FieldElement":
        return FieldElement(self, tuple(rng.randrange(self.p) for _ in range(self.k)))

    @property
    def label(self) -> str:
        return f"Fp:{self.p}" if self.k == 1 else f"Fq:{self.p}^{self.k}"

    def prime_subfield_embed(self, c: int) -> "FieldElement":
        return self(c)

    # -- square roots ------------------------------------------------------
    def _ts_data(self):
        if self._two_adic is None:
            t, s = self.q - 1, 0
            while t % 2 == 0:
                t //= 2
                s += 1
            z = None
            for code in range(2, self.q):
                cand = self.from_code(code)
                if not cand.is_square():
                    z = cand
                    break
            self._two_adic = (s, t)
            self._nonresidue = z
        return self._two_adic, self._nonresidue

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.k}[u]/({poly_text(self.modulus)})"


@lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> FiniteField:
    """Cached field with the default (smallest irreducible) modulus."""
    return FiniteField(p, k)


class FieldElement:
    __slots__ = ("F", "c")

    def __init__(self, F: FiniteField, c: tuple):
        self.F = F
        self.c = c

    # -- coercion ----------------------------------------------------------
    def _coerce(self, other) -> tuple | None:
        if isinstance(other, FieldElement):
            if other.F is not self.F and other.F != self.F:
                raise InputError("field descriptor mismatch")
            return other.c
        if isinstance(other, int):
            F = self.F
            return (other % F.p,) + (0,) * (F.k - 1)
        if isinstance(other, Fraction):
            return self.F(other).c
        return None

    # -- ring operations -----------------------------------------------------
    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        p = self.F.p
        return FieldElement(self.F, tuple((x + y) % p for x, y in zip(self.c, b)))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        p = self.F.p
        return FieldElement(self.F, tuple((x - y) % p for x, y in zip(self.c, b)))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        p = self.F.p
        return FieldElement(self.F, tuple((y - x) % p for x, y in zip(self.c, b)))

    def __neg__(self):
        p = self.F.p
        return FieldElement(self.F, tuple((-x) % p for x in self.c))

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.F.p
            return FieldElement(self.F, tuple(x * other % p for x in self.c))
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.F, _mul_coeffs(self.F, self.c, b))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        F = self.F
        if F.k == 1:
            if self.c[0] == 0:
                raise ZeroDivisionError("division by zero in finite field")
            return FieldElement(F, (pow(self.c[0], -1, F.p),))
        if not any(self.c):
            raise ZeroDivisionError("division by zero in finite field")
        inv = _pinvmod(_ptrim(list(self.c)), list(F.modulus), F.p)
        return FieldElement(F, tuple(inv) + (0,) * (F.k - len(inv)))

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self * FieldElement(self.F, b).inverse()

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.F, b) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        F = self.F
        if F.k == 1:
            return FieldElement(F, (pow(self.c[0], e, F.p),))
        result = F.one.c
        base = self.c
        while e:
            if e & 1:
                result = _mul_coeffs(F, result, base)
            e >>= 1
            if e:
                base = _mul_coeffs(F, base, base)
        return FieldElement(F, result)

    # -- comparisons -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.c == other.c and (self.F is other.F or self.F == other.F)
        if isinstance(other, int):
            return self.c == self._coerce(other)
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    @property
    def code(self) -> int:
        p = self.F.p
        out = 0
        for x in reversed(self.c):
            out = out * p + x
        return out

    def sort_key(self) -> int:
        return self.code

    def __lt__(self, other: "FieldElement") -> bool:
        return self.code < other.code

    # -- structure -----------------------------------------------------------
    def frobenius(self, times: int = 1) -> "FieldElement":
        """x -> x^(p^times), via the precomputed linear map."""
        F = self.F
        if F.k == 1:
            return self
        c = self.c
        p, k, frob = F.p, F.k, F._frob
        for _ in range(times % k):
            out = [0] * k
            for i, ci in enumerate(c):
                if ci:
                    col = frob[i]
                    for j in range(k):
                        out[j] += ci * col[j]
            c = tuple(x % p for x in out)
        return FieldElement(F, c)

    def norm(self) -> int:
        """Norm to F_p as an int."""
        F = self.F
        if F.k == 1:
            return self.c[0]
        acc = self
        conj = self
        for _ in range(F.k - 1):
            conj = conj.frobenius()
            acc = acc * conj
        assert not any(acc.c[1:])
        return acc.c[0]

    def is_square(self) -> bool:
        if not any(self.c):
            return True
        F = self.F
        if F.p == 2:
            return True
        n = self.norm()
        return pow(n, (F.p - 1) // 2, F.p) == 1

    def sqrt(self) -> "FieldElement":
        """A square root; of the two roots, the one with the smaller code."""
        F = self.F
        if not any(self.c):
            return self
        if F.p == 2:
            r = self ** (F.q // 2)
            return r
        if not self.is_square():
            raise MembershipError("not a square")
        if F.q % 4 == 3:
            r = self ** ((F.q + 1) // 4)
        else:
            (s, t), z = F._ts_data()
            m = s
            c = z**t
            tt = self**t
            r = self ** ((t + 1) // 2)
            while tt != 1:
                i, t2 = 0, tt
                while t2 != 1:
                    t2 = t2 * t2
                    i += 1
                b = c
                for _ in range(m - i - 1):
                    b = b * b
                m = i
                c = b * b
                tt = tt * c
                r = r * b
        other = -r
        return r if r.code <= other.code else other

    def multiplicative_order(self, bound: int | None = None) -> int:
        """Order dividing ``bound`` (defaults to q - 1)."""
        n = self.F.q - 1 if bound is None else bound
        if self**n != 1:
            raise MembershipError("element order does not divide the given bound")
        for ell in factorize(n):
            while n % ell == 0 and self ** (n // ell) == 1:
                n //= ell
        return n

    def text(self) -> str:
        if self.F.k == 1:
            return str(self.c[0])
        return ",".join(str(x) for x in self.c)

    def __repr__(self):
        if self.F.k == 1:
            return str(self.c[0])
        return "(" + poly_text(self.c) + ")"


def _mul_coeffs(F: FiniteField, a: tuple, b: tuple) -> tuple:
    p, k = F.p, F.k
    if k == 1:
        return (a[0] * b[0] % p,)
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    res = prod[:k]
    red = F._red
    for i in range(k - 1):
        h = prod[k + i]
        if h:
            row = red[i]
            for j in range(k):
                res[j] += h * row[j]
    return tuple(x % p for x in res)


# ---------------------------------------------------------------------------
# operations


def field_arith(a, b, op: str):
    """Exact a (op) b for op in add/sub/mul/div, for Fractions or FieldElements."""
    if isinstance(a, FieldElement) and isinstance(b, FieldElement) and a.F != b.F:
        raise InputError("field descriptor mismatch")
    if isinstance(a, FieldElement) != isinstance(b, FieldElement):
        raise InputError("field descriptor mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b
    raise InputError(f"unknown op {op!r}")


def frobenius(a):
    if isinstance(a, FieldElement):
        return a.frobenius()
    if isinstance(a, GaloisRingElement):
        return a.frobenius()
    raise InputError("Frobenius is only defined on finite fields and Galois rings")


def discrete_log(base: FieldElement, target: FieldElement, order: int) -> int:
    """Smallest e >= 0 with base^e = target, by baby-step giant-step."""
    if order > DLOG_CAP:
        raise ResourceError(f"discrete log order {order} exceeds cap {DLOG_CAP}")
    if target == 1:
        return 0
    m = 1
    while m * m < order:
        m += 1
    baby = {}
    cur = base.F.one
    for j in range(m):
        baby.setdefault(cur, j)
        cur = cur * base
    step = base ** (-m)
    gamma = target
    for i in range(m + 1):
        j = baby.get(gamma)
        if j is not None:
            e = (i * m + j) % order
            if base**e == target:
                return e
        gamma = gamma * step
    raise MembershipError("target is not a power of base")


def primitive_root_of_unity(F: FiniteField, n: int) -> FieldElement:
    """The smallest (by code) primitive n-th root of unity in F."""
    from math import gcd

    if (F.q - 1) % n:
        raise MembershipError(f"F_{F.q} contains no primitive {n}-th root of unity")
    if n == 1:
        return F.one
    e = (F.q - 1) // n
    zeta = None
    for code in range(1, F.q):
        z = F.from_code(code) ** e
        if all(z ** (n // ell) != 1 for ell in factorize(n)):
            zeta = z
            break
    assert zeta is not None
    roots = [zeta**i for i in range(1, n) if gcd(i, n) == 1] if n > 1 else [zeta]
    return min(roots, key=lambda r: r.code)


# ---------------------------------------------------------------------------
# Galois ring Z/p^r [u]/(h), h a monic quadratic lift of an irreducible over F_p


class GaloisRing:
    def __init__(self, p: int, r: int, h: Sequence[int] | None = None):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if r < 1:
            raise InputError("precision must be >= 1")
        if h is None:
            h = find_irreducible(p, 2)
        h = tuple(int(c) for c in h)
        if len(h) != 3 or h[2] != 1:
            raise InputError("h must be monic quadratic")
        if not is_irreducible([c % p for c in h], p):
            raise InputError("h does not reduce to an irreducible quadratic")
        self.p, self.r = p, r
        self.mod = p**r
        self.h = tuple(c % self.mod for c in h)
        self._conj = self._lift_conjugate_root()

    def _lift_conjugate_root(self) -> tuple[int, int]:
        """Root of h other than u, Hensel-lifted from u^p in F_{p^2}."""
        p, M = self.p, self.mod
        Fp2 = FiniteField(p, 2, [c % p for c in self.h])
        up = Fp2.gen ** p
        x = GaloisRingElement(self, up.c[0], up.c[1])
        h0, h1 = self.h[0], self.h[1]
        for _ in range(self.r + 1):
            hx = x * x + x * h1 + h0
            dh = x * 2 + h1
            x = x - hx * dh.inverse()
        hx = x * x + x * h1 + h0
        assert hx.c0 == 0 and hx.c1 == 0
        return x.c0 % M, x.c1 % M

    def __call__(self, c0: int, c1: int = 0) -> "GaloisRingElement":
        return GaloisRingElement(self, c0, c1)

    def elements(self) -> Iterator["GaloisRingElement"]:
        M = self.mod
        for c1 in range(M):
            for c0 in range(M):
                yield GaloisRingElement(self, c0, c1)

    @property
    def zero(self):
        return GaloisRingElement(self, 0, 0)

    @property
    def one(self):
        return GaloisRingElement(self, 1, 0)

    def __eq__(self, other):
        return isinstance(other, GaloisRing) and (self.p, self.r, self.h) == (other.p, other.r, other.h)

    def __hash__(self):
        return hash((self.p, self.r, self.h))

    def __repr__(self):
        return f"GR({self.p}^{self.r}, {poly_text(self.h)})"


class GaloisRingElement:
    __slots__ = ("R", "c0", "c1")

    def __init__(self, R: GaloisRing, c0: int, c1: int):
        self.R = R
        self.c0 = c0 % R.mod
        self.c1 = c1 % R.mod

    def _lift(self, other):
        if isinstance(other, GaloisRingElement):
            return other
        if isinstance(other, int):
            return GaloisRingElement(self.R, other, 0)
        raise InputError(f"cannot coerce {other!r}")

    def __add__(self, other):
        o = self._lift(other)
        return GaloisRingElement(self.R, self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return GaloisRingElement(self.R, self.c0 - o.c0, self.c1 - o.c1)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return GaloisRingElement(self.R, -self.c0, -self.c1)

    def __mul__(self, other):
        o = self._lift(other)
        h0, h1 = self.R.h[0], self.R.h[1]
        a, b, c, d = self.c0, self.c1, o.c0, o.c1
        # u^2 = -h1 u - h0
        bd = b * d
        return GaloisRingElement(self.R, a * c - bd * h0, a * d + b * c - bd * h1)

    __rmul__ = __mul__

    def conj_norm(self) -> int:
        """Norm to Z/p^r, the determinant of multiplication by self."""
        h0, h1 = self.R.h[0], self.R.h[1]
        a, b = self.c0, self.c1
        return (a * a - a * b * h1 + b * b * h0) % self.R.mod

    def is_unit(self) -> bool:
        return self.conj_norm() % self.R.p != 0

    def inverse(self) -> "GaloisRingElement":
        n = self.conj_norm()
        if n % self.R.p == 0:
            raise ZeroDivisionError("not a unit of the Galois ring")
        # adjugate of the multiplication matrix [[a, -b h0], [b, a - b h1]]
        h1 = self.R.h[1]
        ninv = pow(n, -1, self.R.mod)
        return GaloisRingElement(self.R, (self.c0 - self.c1 * h1) * ninv, -self.c1 * ninv)

    def frobenius(self) -> "GaloisRingElement":
        u0, u1 = self.R._conj
        return GaloisRingElement(self.R, self.c0 + self.c1 * u0, self.c1 * u1)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._lift(other)
        if not isinstance(other, GaloisRingElement):
            return NotImplemented
        return self.c0 == other.c0 and self.c1 == other.c1 and self.R == other.R

    def __hash__(self):
        return hash((self.c0, self.c1))

    def __repr__(self):
        return f"({self.c0} + {self.c1}*u)"


# ---------------------------------------------------------------------------
# text forms


def parse_field(text: str):
    """'Q' | 'Fp:p' | 'Fq:p^k'."""
    t = text.strip()
    if t == "Q":
        return QQ
    if t.startswith("Fp:"):
        try:
            p = int(t[3:])
        except ValueError:
            raise InputError(f"bad field selector {text!r}") from None
        return GF(p)
    if t.startswith("Fq:"):
        body = t[3:]
        try:
            if "^" in body:
                p, k = (int(x) for x in body.split("^"))
            else:
                p, k = int(body), 1
        except ValueError:
            raise InputError(f"bad field selector {text!r}") from None
        return GF(p, k)
    raise InputError(f"bad field selector {text!r}")


def parse_element(F, text: str):
    t = text.strip()
    if isinstance(F, RationalField):
        try:
            return Fraction(t)
        except ValueError:
            raise InputError(f"bad rational literal {text!r}") from None
    try:
        parts = [int(x) for x in t.split(",")]
    except ValueError:
        raise InputError(f"bad field literal {text!r}") from None
    if F.k == 1 and len(parts) == 1:
        return F(parts[0])
    if len(parts) != F.k:
        raise InputError(f"expected {F.k} coefficients, got {len(parts)}")
    return F(tuple(parts))


def element_text(a) -> str:
    if isinstance(a, Fraction):
        return str(a)
    return a.text()
