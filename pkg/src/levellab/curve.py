"""Weierstrass curves over Q and finite fields.

Group law (affine for long models, Jacobian scalar multiplication for short
models), invariants, point counting, Frobenius traces, supersingularity,
division polynomials and N-torsion bases over extension fields.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import (
    CharacteristicError,
    ConsistencyError,
    InputError,
    InvalidBasisError,
    MembershipError,
    ResourceError,
    SingularCurveError,
    UnsupportedError,
)
from .exactfield import (
    QQ,
    FieldElement,
    FiniteField,
    GF,
    RationalField,
    factorize,
    parse_field,
    valuation,
)

COUNT_CAP = 10**6
DIVPOLY_CAP = 50
EXTENSION_CAP = 24
STREAM_SEED = 20240607


class EllipticCurve:
    """Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    __slots__ = ("F", "a", "short", "_inv", "_hash", "_order_cache")

    def __init__(self, F, coeffs: Sequence):
        if isinstance(F, str):
            F = parse_field(F)
        if len(coeffs) == 2:
            coeffs = (0, 0, 0, coeffs[0], coeffs[1])
        elif len(coeffs) != 5:
            raise InputError("expected 2 (short) or 5 (long) Weierstrass coefficients")
        self.F = F
        self.a = tuple(F(c) for c in coeffs)
        a1, a2, a3, a4, a6 = self.a
        self.short = a1 == 0 and a2 == 0 and a3 == 0
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if disc == 0:
            raise SingularCurveError(f"singular Weierstrass model {self.a} over {F!r}")
        self._inv = dict(b2=b2, b4=b4, b6=b6, b8=b8, c4=c4, c6=c6, disc=disc)
        self._hash = hash((F, tuple(_key(c) for c in self.a)))
        self._order_cache = {}

    # -- basic data --------------------------------------------------------
    @classmethod
    def short_form(cls, F, A, B) -> "EllipticCurve":
        return cls(F, (0, 0, 0, A, B))

    @property
    def A(self):
        return self.a[3]

    @property
    def B(self):
        return self.a[4]

    @property
    def characteristic(self) -> int:
        return self.F.characteristic

    def b(self, name: str):
        return self._inv[name]

    @property
    def discriminant(self):
        return self._inv["disc"]

    @property
    def j(self):
        c4 = self._inv["c4"]
        return c4 * c4 * c4 / self._inv["disc"]

    def invariants(self):
        """(discriminant, c4, c6, j)."""
        return self._inv["disc"], self._inv["c4"], self._inv["c6"], self.j

    def __eq__(self, other):
        return isinstance(other, EllipticCurve) and self.F == other.F and self.a == other.a

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.short:
            return f"EllipticCurve(y^2 = x^3 + ({self.A!r})x + ({self.B!r}) over {self.F!r})"
        return f"EllipticCurve({list(self.a)!r} over {self.F!r})"

    def coefficients_text(self) -> str:
        from .exactfield import element_text

        if self.short:
            return ",".join(element_text(c) for c in (self.A, self.B))
        return ",".join(element_text(c) for c in self.a)

    # -- points --------------------------------------------------------------
    @property
    def O(self) -> "CurvePoint":
        return CurvePoint(self, None, None)

    def is_on_curve(self, x, y) -> bool:
        a1, a2, a3, a4, a6 = self.a
        return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6

    def point(self, x, y) -> "CurvePoint":
        x, y = self.F(x), self.F(y)
        if not self.is_on_curve(x, y):
            raise InputError(f"({x!r}, {y!r}) is not on {self!r}")
        return CurvePoint(self, x, y)

    def rhs(self, x):
        a2, a4, a6 = self.a[1], self.a[3], self.a[4]
        return ((x + a2) * x + a4) * x + a6

    def lift_x(self, x) -> list["CurvePoint"]:
        """All points with the given x-coordinate, ordered by y code."""
        F = self.F
        x = F(x)
        a1, a2, a3, a4, a6 = self.a
        if isinstance(F, RationalField):
            raise UnsupportedError("lift_x is implemented over finite fields only")
        if F.p == 2:
            lin = a1 * x + a3
            r = self.rhs(x)
            if F.q > 4096:
                raise ResourceError("characteristic-2 lift_x capped at q = 4096")
            return [CurvePoint(self, x, y) for y in F.elements() if y * y + lin * y == r]
        lin = a1 * x + a3
        d = lin * lin + 4 * self.rhs(x)
        if not d.is_square():
            return []
        s = d.sqrt()
        ys = {(-lin + s) / 2, (-lin - s) / 2}
        return [CurvePoint(self, x, y) for y in sorted(ys, key=lambda t: t.code)]

    def points(self) -> list["CurvePoint"]:
        """All points over a finite field (small fields only), with O first."""
        F = self.F
        if isinstance(F, RationalField) or F.q > COUNT_CAP:
            raise ResourceError("point enumeration needs a finite field below the cap")
        out = [self.O]
        for x in F.elements():
            out.extend(self.lift_x(x))
        return out

    def random_point(self, rng: random.Random) -> "CurvePoint":
        F = self.F
        while True:
            pts = self.lift_x(F.random_element(rng))
            if pts:
                return pts[rng.randrange(len(pts))]

    def point_stream(self, seed: int = STREAM_SEED) -> Iterator["CurvePoint"]:
        """Deterministic pseudo-random stream of affine points."""
        rng = random.Random(seed)
        while True:
            yield self.random_point(rng)

    # -- group law -----------------------------------------------------------
    def neg(self, P: "CurvePoint") -> "CurvePoint":
        if P.x is None:
            return P
        a1, a3 = self.a[0], self.a[2]
        if self.short:
            return CurvePoint(self, P.x, -P.y)
        return CurvePoint(self, P.x, -P.y - a1 * P.x - a3)

    def add(self, P: "CurvePoint", Q: "CurvePoint") -> "CurvePoint":
        if P.x is None:
            return Q
        if Q.x is None:
            return P
        a1, a2, a3, a4, a6 = self.a
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            den = y1 + y2 + a1 * x2 + a3
            if den == 0:
                return self.O
            den = 2 * y1 + a1 * x1 + a3
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = lam * (x1 - x3) - y1 - a1 * x3 - a3
        return CurvePoint(self, x3, y3)

    def mul(self, n: int, P: "CurvePoint") -> "CurvePoint":
        if n < 0:
            return self.mul(-n, self.neg(P))
        if n == 0 or P.x is None:
            return self.O
        if n == 1:
            return P
        if self.short and isinstance(P.x, FieldElement):
            return _jacobian_mul(self, n, P)
        R = self.O
        T = P
        while n:
            if n & 1:
                R = self.add(R, T)
            n >>= 1
            if n:
                T = self.add(T, T)
        return R

    def order_of(self, P: "CurvePoint", multiple: int) -> int:
        """Exact order of P, given a multiple of it."""
        if self.mul(multiple, P).x is not None:
            raise ConsistencyError("given multiple does not kill the point")
        n = multiple
        for ell in factorize(multiple):
            while n % ell == 0 and self.mul(n // ell, P).x is None:
                n //= ell
        return n

    # -- fields --------------------------------------------------------------
    def base_change(self, K: FiniteField) -> "EllipticCurve":
        """The same curve over an extension of its (prime) field."""
        F = self.F
        if K == F:
            return self
        if not isinstance(F, FiniteField) or F.k != 1 or K.p != F.p:
            raise UnsupportedError("base change is implemented from prime fields only")
        return EllipticCurve(K, tuple(int(c.c[0]) for c in self.a))

    def defined_over_prime_field(self) -> bool:
        return isinstance(self.F, FiniteField) and all(not any(c.c[1:]) for c in self.a)

    def prime_field_model(self) -> "EllipticCurve":
        if not self.defined_over_prime_field():
            raise InputError("curve is not defined over the prime field")
        return EllipticCurve(GF(self.F.p), tuple(c.c[0] for c in self.a))

    def reduce(self, p: int) -> "EllipticCurve":
        """Reduction mod p of a curve over Q with integral coefficients."""
        if not isinstance(self.F, RationalField):
            raise InputError("reduction needs a curve over Q")
        if any(c.denominator != 1 for c in self.a):
            raise InputError("reduction needs integral coefficients")
        if self.discriminant.numerator % p == 0:
            raise SingularCurveError(f"p = {p} divides the discriminant")
        return EllipticCurve(GF(p), tuple(int(c) % p for c in self.a))

    def to_short(self) -> tuple["EllipticCurve", "callable"]:
        """Short model y^2 = x^3 - 27 c4 x - 54 c6 with (x, y) -> (36x + 3b2, 108(2y + a1 x + a3))."""
        if self.F.characteristic in (2, 3):
            raise UnsupportedError("short models need 6 invertible")
        if self.short:
            return self, (lambda P: P)
        c4, c6, b2 = self._inv["c4"], self._inv["c6"], self._inv["b2"]
        Es = EllipticCurve(self.F, (0, 0, 0, -27 * c4, -54 * c6))
        a1, a3 = self.a[0], self.a[2]

        def iso(P: CurvePoint) -> CurvePoint:
            if P.x is None:
                return Es.O
            return CurvePoint(Es, 36 * P.x + 3 * b2, 108 * (2 * P.y + a1 * P.x + a3))

        return Es, iso

    # -- counting --------------------------------------------------------------
    def count_points(self, method: str = "auto") -> int:
        """#E(F_q). ``method='auto'`` uses the trace recurrence for base-changed curves."""
        F = self.F
        if not isinstance(F, FiniteField):
            raise InputError("point counting needs a finite field")
        if method in self._order_cache:
            return self._order_cache[method]
        if method == "auto" and F.k > 1 and self.defined_over_prime_field():
            base = self.prime_field_model()
            n = F.q + 1 - trace_power(base.trace(), F.p, F.k)
        elif method in ("auto", "direct"):
            if F.q > COUNT_CAP:
                raise ResourceError(f"field size {F.q} exceeds counting cap {COUNT_CAP}")
            n = _count_direct(self)
        else:
            raise InputError(f"unknown counting method {method!r}")
        a = F.q + 1 - n
        if a * a > 4 * F.q:
            raise ConsistencyError(f"Hasse bound violated: a = {a}, q = {F.q}")
        self._order_cache[method] = n
        return n

    def trace(self) -> int:
        return self.F.q + 1 - self.count_points()

    def is_supersingular(self, cross_check: bool = True) -> bool:
        F = self.F
        if not isinstance(F, FiniteField) or F.k != 1:
            raise InputError("is_supersingular needs a prime field")
        p = F.p
        ss = self.trace() % p == 0
        if cross_check and p * p <= COUNT_CAP:
            n2 = self.base_change(GF(p, 2)).count_points(method="direct")
            ss2 = n2 in ((p - 1) ** 2, (p + 1) ** 2)
            if ss2 != ss:
                raise ConsistencyError("supersingularity criteria disagree")
        return ss


class CurvePoint:
    """Affine point, or the point at infinity when ``x is None``."""

    __slots__ = ("E", "x", "y")

    def __init__(self, E: EllipticCurve, x, y):
        self.E = E
        self.x = x
        self.y = y

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def _same(self, other: "CurvePoint") -> EllipticCurve:
        if not isinstance(other, CurvePoint):
            raise InputError("expected a curve point")
        if other.E is not self.E and other.E != self.E:
            raise InputError("points lie on different curves")
        return self.E

    def __add__(self, other):
        return self._same(other).add(self, other)

    def __sub__(self, other):
        E = self._same(other)
        return E.add(self, E.neg(other))

    def __neg__(self):
        return self.E.neg(self)

    def __mul__(self, n: int):
        return self.E.mul(n, self)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y and (self.E is other.E or self.E == other.E)

    def __hash__(self):
        if self.x is None:
            return hash(None)
        return hash((_key(self.x), _key(self.y)))

    def sort_key(self):
        if self.x is None:
            return (-1, -1)
        return (_key(self.x), _key(self.y))

    def __repr__(self):
        if self.x is None:
            return "O"
        return f"({self.x!r}, {self.y!r})"


def _key(c):
    if isinstance(c, FieldElement):
        return c.code
    return c


def _jacobian_mul(E: EllipticCurve, n: int, P: CurvePoint) -> CurvePoint:
    """Left-to-right double-and-add in Jacobian coordinates (x = X/Z^2, y = Y/Z^3)."""
    A = E.a[3]
    px, py = P.x, P.y
    X, Y, Z = px, py, E.F.one
    inf = False
    for bit in bin(n)[3:]:
        if not inf:
            if Y.is_zero():
                inf = True
            else:
                XX = X * X
                YY = Y * Y
                ZZ = Z * Z
                S = 4 * X * YY
                M = 3 * XX + A * ZZ * ZZ
                X3 = M * M - 2 * S
                Z = 2 * Y * Z
                Y = M * (S - X3) - 8 * YY * YY
                X = X3
        if bit == "1":
            if inf:
                X, Y, Z = px, py, E.F.one
                inf = False
                continue
            ZZ = Z * Z
            U2 = px * ZZ
            S2 = py * Z * ZZ
            H = U2 - X
            r = S2 - Y
            if H.is_zero():
                if r.is_zero():
                    # P + P: restart doubling from the affine point
                    XX = px * px
                    M = 3 * XX + A
                    if py.is_zero():
                        inf = True
                        continue
                    S = 4 * px * py * py
                    X3 = M * M - 2 * S
                    Z = 2 * py
                    Y = M * (S - X3) - 8 * py * py * py * py
                    X = X3
                else:
                    inf = True
                continue
            HH = H * H
            HHH = H * HH
            V = X * HH
            X3 = r * r - HHH - 2 * V
            Y = r * (V - X3) - Y * HHH
            Z = Z * H
            X = X3
    if inf:
        return E.O
    zi = Z.inverse()
    zi2 = zi * zi
    return CurvePoint(E, X * zi2, Y * zi2 * zi)


def trace_power(a: int, q: int, k: int) -> int:
    """a_{q^k} from a_q via s_j = a s_{j-1} - q s_{j-2}."""
    s0, s1 = 2, a
    for _ in range(k - 1):
        s0, s1 = s1, a * s1 - q * s0
    return s1 if k >= 1 else s0


# ---------------------------------------------------------------------------
# vectorised arithmetic on all of F_q at once (elements indexed by code)


def _vec_all(F: FiniteField) -> np.ndarray:
    codes = np.arange(F.q, dtype=np.int64)
    out = np.empty((F.k, F.q), dtype=np.int64)
    for i in range(F.k):
        out[i] = codes % F.p
        codes //= F.p
    return out


def _vec_const(c: FieldElement) -> np.ndarray:
    return np.array(c.c, dtype=np.int64).reshape(-1, 1)


def _vec_mul(F: FiniteField, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    p, k = F.p, F.k
    if k == 1:
        return (X * Y) % p
    n = max(X.shape[1], Y.shape[1])
    prod = np.zeros((2 * k - 1, n), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            prod[i + j] += (X[i] * Y[j]) % p
    res = prod[:k] % p
    for i in range(k - 1):
        h = prod[k + i] % p
        row = F._red[i]
        for j in range(k):
            if row[j]:
                res[j] = (res[j] + h * row[j]) % p
    return res


def _vec_norm(F: FiniteField, X: np.ndarray) -> np.ndarray:
    """Norm to F_p of each column, as a 1-d array."""
    p, k = F.p, F.k
    if k == 1:
        return X[0] % p
    acc = X
    conj = X
    frob = np.array(F._frob, dtype=np.int64)  # row i = image of u^i
    for _ in range(k - 1):
        conj = (frob.T @ conj) % p
        acc = _vec_mul(F, acc, conj)
    return acc[0]


def legendre_table(p: int) -> np.ndarray:
    leg = -np.ones(p, dtype=np.int64)
    leg[0] = 0
    sq = (np.arange(1, p, dtype=np.int64) ** 2) % p
    leg[sq] = 1
    return leg


def quadratic_character_sum(F: FiniteField, coeffs: Sequence[FieldElement]) -> int:
    """sum over x in F_q of chi(c0 + c1 x + ... ), chi the quadratic character (p odd)."""
    X = _vec_all(F)
    acc = np.broadcast_to(_vec_const(coeffs[-1]), (F.k, F.q)).copy()
    for c in reversed(coeffs[:-1]):
        acc = (_vec_mul(F, acc, X) + _vec_const(c)) % F.p
    leg = legendre_table(F.p)
    return int(leg[_vec_norm(F, acc)].sum())


def _count_direct(E: EllipticCurve) -> int:
    F = E.F
    if F.p == 2:
        a1, a2, a3, a4, a6 = E.a
        elems = list(F.elements())
        n = 1
        for x in elems:
            lin = a1 * x + a3
            r = E.rhs(x)
            n += sum(1 for y in elems if y * y + lin * y == r)
        return n
    b2, b4, b6 = E.b("b2"), E.b("b4"), E.b("b6")
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    return F.q + 1 + quadratic_character_sum(F, [b6, 2 * b4, b2, F(4)])


# ---------------------------------------------------------------------------
# dense univariate polynomials with field coefficients (low degree first)


def _utrim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _uadd(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _utrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _usub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _utrim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _umul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai != 0:
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
    return _utrim(out)


def poly_eval(f: list, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


class DivisionPolynomial(NamedTuple):
    """psi_n = y^(n even) * xpart(x) on a short model."""

    n: int
    xpart: list
    has_y: bool

    def torsion_poly(self, E: EllipticCurve) -> list:
        """Polynomial whose roots are the x-coordinates of the nonzero n-torsion."""
        if self.has_y:
            return _umul(self.xpart, [E.B, E.A, 0, 1])
        return list(self.xpart)

    def evaluate(self, P: CurvePoint):
        v = poly_eval(self.xpart, P.x)
        return v * P.y if self.has_y else v


def division_polynomials(E: EllipticCurve, n_max: int) -> list[DivisionPolynomial]:
    """[psi_0, ..., psi_{n_max}] by the standard doubling recursion."""
    if not E.short:
        raise UnsupportedError("division polynomials need a short Weierstrass model")
    if E.F.characteristic in (2, 3):
        raise UnsupportedError("division polynomials need characteristic >= 5")
    if n_max > DIVPOLY_CAP:
        raise ResourceError(f"division polynomial index {n_max} exceeds cap {DIVPOLY_CAP}")
    A, B = E.A, E.B
    one = E.F(1)
    Fx = [B, A, 0 * one, one]
    F2 = _umul(Fx, Fx)
    g: dict[int, list] = {
        0: [],
        1: [one],
        2: [2 * one],
        3: _utrim([-A * A, 12 * B, 6 * A, 0 * one, 3 * one]),
        4: _utrim([4 * (-8 * B * B - A * A * A), -16 * A * B, -20 * A * A, 80 * B, 20 * A, 0 * one, 4 * one]),
    }
    half = one / 2

    def get(i: int) -> list:
        if i in g:
            return g[i]
        m = i // 2
        if i % 2:
            t1 = _umul(get(m + 2), _umul(get(m), _umul(get(m), get(m))))
            t2 = _umul(get(m - 1), _umul(get(m + 1), _umul(get(m + 1), get(m + 1))))
            if m % 2 == 0:
                t1 = _umul(F2, t1)
            else:
                t2 = _umul(F2, t2)
            g[i] = _usub(t1, t2)
        else:
            inner = _usub(
                _umul(get(m + 2), _umul(get(m - 1), get(m - 1))),
                _umul(get(m - 2), _umul(get(m + 1), get(m + 1))),
            )
            g[i] = [c * half for c in _umul(get(m), inner)]
        return g[i]

    return [DivisionPolynomial(i, get(i), i % 2 == 0) for i in range(n_max + 1)]


def division_polynomial(E: EllipticCurve, n: int) -> DivisionPolynomial:
    if n < 0:
        raise InputError("n must be >= 0")
    return division_polynomials(E, max(n, 4))[n]


# ---------------------------------------------------------------------------
# torsion structure


def smith_normal_form(rows: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Smith form of an integer r x n relation matrix (rows are relations on n generators).

    Returns (d, Vinv) with len(d) == n: the group Z^n / rowspace is the direct sum of
    Z/d_i (d_i = 0 meaning Z), generator i being sum_j Vinv[i][j] e_j.
    """
    r = len(rows)
    n = len(rows[0])
    A = [list(row) for row in rows]
    Vinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(i, j, q):  # column j -= q * column i; generators: e'_i = e_i + q e_j
        for row in A:
            row[j] -= q * row[i]
        for c in range(n):
            Vinv[i][c] += q * Vinv[j][c]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_op(i, j, q):  # row j -= q * row i
        A[j] = [a - q * b for a, b in zip(A[j], A[i])]

    for t in range(min(r, n)):
        while True:
            piv = [(abs(A[i][c]), i, c) for i in range(t, r) for c in range(t, n) if A[i][c]]
            if not piv:
                break
            _, i0, c0 = min(piv)
            A[t], A[i0] = A[i0], A[t]
            if c0 != t:
                col_swap(t, c0)
            done = True
            for i in range(t + 1, r):
                q = A[i][t] // A[t][t]
                if q:
                    row_op(t, i, q)
                if A[i][t]:
                    done = False
            for c in range(t + 1, n):
                q = A[t][c] // A[t][t]
                if q:
                    col_op(t, c, q)
                if A[t][c]:
                    done = False
            if not done:
                continue
            bad = [i for i in range(t + 1, r) for c in range(t + 1, n) if A[i][c] % A[t][t]]
            if not bad:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
    d = [abs(A[i][i]) if i < r else 0 for i in range(n)]
    return d, Vinv


class SylowBasis(NamedTuple):
    ell: int
    P1: CurvePoint  # order ell^a
    a: int
    P2: CurvePoint  # order ell^b, a >= b
    b: int


def _ord_exp(E: EllipticCurve, R: CurvePoint, ell: int, bound: int) -> int:
    t = 0
    while R.x is not None:
        R = E.mul(ell, R)
        t += 1
        if t > bound:
            raise ConsistencyError("point order exceeds the Sylow bound")
    return t


def dlog2(E: EllipticCurve, ell: int, P1, a: int, P2, b: int, X) -> tuple[int, int] | None:
    """(x, y) with X = x P1 + y P2 in <P1> + <P2> (orders ell^a >= ell^b, direct sum), else None."""
    if a == 0:
        return (0, 0) if X.x is None else None
    G1 = E.mul(ell ** (a - 1), P1)
    G2 = E.mul(ell ** (b - 1), P2) if b else E.O
    table = {}
    for j2 in range(ell if b else 1):
        base = E.mul(j2, G2)
        cur = base
        for j1 in range(ell):
            table.setdefault(cur, (j1, j2))
            cur = E.add(cur, G1)
    x = y = 0
    for i in range(a):
        Z = E.add(X, E.neg(E.add(E.mul(x, P1), E.mul(y, P2))))
        W = E.mul(ell ** (a - 1 - i), Z)
        hit = table.get(W)
        if hit is None:
            return None
        j1, j2 = hit
        x += j1 * ell**i
        if i >= a - b:
            y += j2 * ell ** (i - (a - b))
        elif j2:
            return None
    if E.add(E.mul(x, P1), E.mul(y, P2)) != X:
        return None
    return x % ell**a, (y % ell**b if b else 0)


def sylow_basis(E: EllipticCurve, ell: int, order: int, stream=None) -> SylowBasis:
    """Basis of the ell-Sylow subgroup of E(F_q), given #E(F_q) = order."""
    v = valuation(order, ell)
    cof = order // ell**v
    if stream is None:
        stream = E.point_stream()
    gens: list[tuple[CurvePoint, int]] = []  # (point, exponent), exponents decreasing
    size = 0
    guard = 0
    while size < v:
        guard += 1
        if guard > 200 + 20 * v:
            raise ConsistencyError("Sylow basis search did not terminate")
        R = E.mul(cof, next(stream))
        if R.x is None:
            continue
        (P1, a), (P2, b) = (gens + [(E.O, 0), (E.O, 0)])[:2]
        t = 0
        Rt = R
        while True:
            coords = dlog2(E, ell, P1, a, P2, b, Rt)
            if coords is not None:
                break
            Rt = E.mul(ell, Rt)
            t += 1
        if t == 0:
            continue
        x, y = coords
        rel = [[ell**a, 0, 0], [0, ell**b, 0], [-x, -y, ell**t]]
        d, Vinv = smith_normal_form(rel)
        base = [P1, P2, R]
        new = []
        for i in range(3):
            if d[i] == 1:
                continue
            if d[i] == 0:
                raise ConsistencyError("infinite order in a finite group")
            pt = E.O
            for j in range(3):
                pt = E.add(pt, E.mul(Vinv[i][j], base[j]))
            new.append((pt, valuation(d[i], ell)))
        if len(new) > 2:
            raise ConsistencyError("rank > 2 in an elliptic curve group")
        new.sort(key=lambda g: -g[1])
        gens = new
        size = sum(e for _, e in gens)
    (P1, a), (P2, b) = (gens + [(E.O, 0), (E.O, 0)])[:2]
    return SylowBasis(ell, P1, a, P2, b)


def torsion_basis_over(E: EllipticCurve, N: int, order: int | None = None, seed: int = STREAM_SEED):
    """Basis (P, Q) of E[N] if E[N] is rational over the curve's field, else None."""
    F = E.F
    if not isinstance(F, FiniteField):
        raise InputError("torsion bases need a finite field")
    if N % F.p == 0:
        raise CharacteristicError(f"characteristic {F.p} divides the level {N}")
    if order is None:
        order = E.count_points()
    if (F.q - 1) % N or order % (N * N):
        return None
    if N == 1:
        return E.O, E.O
    stream = E.point_stream(seed)
    P, Q = E.O, E.O
    for ell, e in factorize(N).items():
        sb = sylow_basis(E, ell, order, stream)
        if sb.b < e:
            return None
        P = E.add(P, E.mul(ell ** (sb.a - e), sb.P1))
        Q = E.add(Q, E.mul(ell ** (sb.b - e), sb.P2))
    return P, Q


def torsion_basis(E: EllipticCurve, N: int, k_cap: int = EXTENSION_CAP):
    """(k, P, Q): smallest k with E[N] inside E(F_{p^k}) and a basis over that field.

    ``E`` must be defined over a prime field.
    """
    F = E.F
    if not isinstance(F, FiniteField) or F.k != 1:
        raise InputError("torsion_basis expects a curve over a prime field")
    p = F.p
    if N % p == 0:
        raise CharacteristicError(f"characteristic {p} divides the level {N}")
    a = E.trace()
    for k in range(1, k_cap + 1):
        q = p**k
        if (q - 1) % N:
            continue
        order = q + 1 - trace_power(a, p, k)
        if order % (N * N):
            continue
        Ek = E.base_change(GF(p, k))
        Ek._order_cache["auto"] = order
        basis = torsion_basis_over(Ek, N, order)
        if basis is None:
            continue
        P, Q = basis
        from .pairing import weil_pairing

        z = weil_pairing(Ek, N, P, Q)
        if any(z ** (N // ell) == 1 for ell in factorize(N)):
            raise InvalidBasisError("torsion basis pairing is not primitive")
        return k, P, Q
    raise ResourceError(f"E[{N}] is not rational over any F_{{p^k}} with k <= {k_cap}")


def full_torsion_degree(E: EllipticCurve, N: int, k_cap: int = EXTENSION_CAP) -> int | None:
    try:
        return torsion_basis(E, N, k_cap)[0]
    except ResourceError:
        return None


# ---------------------------------------------------------------------------
# text forms and named curves

REGISTRY: dict[str, tuple] = {
    "105a2-min": (1, 0, 1, -8, -7),
    # y^2 = (x+33)(x+78)(x-111)
    "105a2-red": (0, 0, 0, -9747, -285714),
    "KO-A": (0, 7, 0, 0, 28),
    "KO-B": (0, 1, 0, -1, 3),
}


def parse_curve(text: str, field="Q") -> EllipticCurve:
    """Registry name, "a1,a2,a3,a4,a6" or "A,B" over the given field selector."""
    F = parse_field(field) if isinstance(field, str) else field
    t = text.strip()
    if t in REGISTRY:
        coeffs = REGISTRY[t]
        if isinstance(F, RationalField):
            return EllipticCurve(QQ, coeffs)
        return EllipticCurve(QQ, coeffs).reduce(F.p).base_change(F) if F.k > 1 else EllipticCurve(QQ, coeffs).reduce(F.p)
    parts = [s for s in t.replace(" ", "").split(",")]
    if len(parts) not in (2, 5):
        raise InputError(f"bad curve text {text!r}")
    try:
        if isinstance(F, RationalField):
            coeffs = [Fraction(s) for s in parts]
        else:
            coeffs = [int(s) for s in parts]
    except ValueError:
        raise InputError(f"bad curve coefficients {text!r}") from None
    return EllipticCurve(F, coeffs)
