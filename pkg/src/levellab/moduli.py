"""Moduli points (E, (P, Q), C) over finite fields and the operators acting on them.

A moduli point carries a short Weierstrass curve over a working field F_q, a basis
(P, Q) of E[N] and an optional cyclic subgroup C of order m, gcd(N, m) = 1.

Operators:
  [n]        act_unit        basis -> (nP, nQ)
  g          act_gl2         basis -> (aP + bQ, cP + dQ) for g = (a b; c d)
  D_{d,t}    degeneracy      quotient by C[d], keep the order-t part of the image of C
  w_d        atkin_lehner    quotient by C[d], new subgroup ker(dual) + image of C[m/d]

GL2 convention: act_gl2(g, act_gl2(h, M)) == act_gl2(g h, M).
Frobenius matrices: D (P; Q) = (phi P; phi Q), so D(phi^j) = D(phi)^j and in general
D(s s') = D(s') D(s).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable

from .curve import (
    CurvePoint,
    EllipticCurve,
    dlog2,
    smith_normal_form,
    torsion_basis,
    torsion_basis_over,
    trace_power,
)
from .errors import (
    CharacteristicError,
    ConsistencyError,
    InputError,
    InvalidBasisError,
    ResourceError,
    UnsupportedError,
)
from .exactfield import (
    GF,
    FiniteField,
    discrete_log,
    divisors,
    factorize,
    parse_element,
    parse_field,
    primitive_root_of_unity,
    units_mod,
    valuation,
)
from .pairing import CyclicSubgroup, Isogeny, standard_subgroup, velu_quotient, weil_pairing

Matrix = tuple[tuple[int, int], tuple[int, int]]
ENUM_CAP = 2_000_000


# ---------------------------------------------------------------------------
# 2x2 matrices mod N


def mat(a: int, b: int, c: int, d: int, N: int) -> Matrix:
    return ((a % N, b % N), (c % N, d % N))


def mat_mul(g: Matrix, h: Matrix, N: int) -> Matrix:
    (a, b), (c, d) = g
    (e, f), (k, l) = h
    return mat(a * e + b * k, a * f + b * l, c * e + d * k, c * f + d * l, N)


def mat_det(g: Matrix, N: int) -> int:
    (a, b), (c, d) = g
    return (a * d - b * c) % N


def mat_trace(g: Matrix, N: int) -> int:
    return (g[0][0] + g[1][1]) % N


def mat_pow(g: Matrix, e: int, N: int) -> Matrix:
    out = mat(1, 0, 0, 1, N)
    for _ in range(e):
        out = mat_mul(out, g, N)
    return out


def mat_identity(N: int) -> Matrix:
    return mat(1, 0, 0, 1, N)


def gl2(N: int) -> list[Matrix]:
    """All of GL2(Z/N) in lexicographic order of entries."""
    out = []
    for a in range(N):
        for b in range(N):
            for c in range(N):
                for d in range(N):
                    if gcd((a * d - b * c) % N, N) == 1:
                        out.append(((a, b), (c, d)))
    return out


def random_gl2(N: int, rng: random.Random) -> Matrix:
    while True:
        g = mat(rng.randrange(N), rng.randrange(N), rng.randrange(N), rng.randrange(N), N)
        if gcd(mat_det(g, N), N) == 1:
            return g


@lru_cache(maxsize=None)
def zeta_ref(F: FiniteField, N: int):
    """Reference primitive N-th root of unity: the smallest one in the field order."""
    return primitive_root_of_unity(F, N)


# ---------------------------------------------------------------------------
# prime-power torsion bases, pushed along isogenies on demand


class TorsionCache:
    """Bases of E[ell^e] for selected primes, derived lazily from a parent curve.

    Pushing a basis of E[ell^e] through an isogeny whose kernel has ell-part of
    order ell^f gives generators of a group containing E'[ell^(e-f)]; a basis of
    the latter is extracted with a Smith form of the relation lattice.
    Missing data falls back to a direct group-structure search.
    """

    def __init__(self, E: EllipticCurve, order: int | None = None, bases=None, parent=None, phi=None):
        self.E = E
        self.order = order
        self._bases: dict[int, tuple | None] = dict(bases or {})
        self._parent = parent
        self._phi = phi

    def child(self, phi: Isogeny) -> "TorsionCache":
        return TorsionCache(phi.codomain, self.order, parent=self, phi=phi)

    def _available(self, ell: int):
        if ell in self._bases:
            return self._bases[ell]
        out = None
        if self._parent is not None and self._phi.kernel_gen is not None:
            src = self._parent._available(ell)
            if src is not None:
                out = _push_ell_basis(self._parent.E, self._phi, ell, *src)
        self._bases[ell] = out
        return out

    def basis(self, n: int) -> tuple[CurvePoint, CurvePoint]:
        E = self.E
        P, Q = E.O, E.O
        for ell, e in factorize(n).items() if n > 1 else []:
            got = self._available(ell)
            if got is None or got[0] < e:
                if self.order is None:
                    self.order = E.count_points()
                b = torsion_basis_over(E, ell**e, self.order)
                if b is None:
                    raise UnsupportedError(f"E[{ell ** e}] is not rational over the working field")
                got = (e, b[0], b[1])
                self._bases[ell] = got
            e0, T1, T2 = got
            P = E.add(P, E.mul(ell ** (e0 - e), T1))
            Q = E.add(Q, E.mul(ell ** (e0 - e), T2))
        return P, Q


def _push_ell_basis(E: EllipticCurve, phi: Isogeny, ell: int, e0: int, T1: CurvePoint, T2: CurvePoint):
    delta = phi.degree
    f = valuation(delta, ell)
    if f == 0:
        return (e0, phi.push(T1), phi.push(T2))
    if f >= e0:
        return None
    Kl = E.mul(delta // ell**f, phi.kernel_gen)
    coords = dlog2(E, ell, T1, e0, T2, e0, Kl)
    if coords is None:
        return None
    k1, k2 = coords
    d, V = smith_normal_form([[ell**e0, 0], [0, ell**e0], [k1, k2]])
    U = (phi.push(T1), phi.push(T2))
    Eq = phi.codomain
    gens = []
    for i in range(2):
        g = Eq.add(Eq.mul(V[i][0], U[0]), Eq.mul(V[i][1], U[1]))
        gens.append((valuation(d[i], ell), g))
    gens.sort(key=lambda t: t[0])
    if [g[0] for g in gens] != [e0 - f, e0]:
        raise ConsistencyError("unexpected structure of the pushed torsion")
    return (e0 - f, gens[0][1], Eq.mul(ell**f, gens[1][1]))


# ---------------------------------------------------------------------------
# moduli points


class ModuliPoint:
    __slots__ = ("E", "N", "P", "Q", "C", "torsion", "_pairing")

    def __init__(
        self,
        E: EllipticCurve,
        N: int,
        P: CurvePoint,
        Q: CurvePoint,
        C: CyclicSubgroup | None = None,
        torsion: TorsionCache | None = None,
        check: bool = True,
    ):
        self.E = E
        self.N = N
        self.P = P
        self.Q = Q
        self.C = C if C is not None else CyclicSubgroup.trivial(E)
        self.torsion = torsion if torsion is not None else TorsionCache(E)
        self._pairing = None
        if check:
            self.validate()

    @property
    def F(self) -> FiniteField:
        return self.E.F

    @property
    def m(self) -> int:
        return self.C.order

    def pairing(self):
        if self._pairing is None:
            self._pairing = weil_pairing(self.E, self.N, self.P, self.Q)
        return self._pairing

    def validate(self) -> None:
        E, N = self.E, self.N
        if not isinstance(E.F, FiniteField):
            raise InputError("moduli points live over finite fields")
        if not E.short:
            raise InputError("moduli points use short Weierstrass models")
        p = E.F.p
        if p in (2, 3):
            raise UnsupportedError("moduli points need characteristic >= 5")
        if N < 3:
            raise InputError("level N must be >= 3")
        if gcd(N, self.m) != 1:
            raise InputError("N and m must be coprime")
        if (N * self.m) % p == 0:
            raise CharacteristicError("level orders must be invertible in the field")
        for T in (self.P, self.Q):
            if T.E != E:
                raise InputError("basis point is not on the curve")
            if E.mul(N, T).x is not None or any(E.mul(N // ell, T).x is None for ell in factorize(N)):
                raise InvalidBasisError(f"basis point does not have exact order {N}")
        if self.C.E != E:
            raise InputError("subgroup is not on the curve")
        z = self.pairing()
        if any(z ** (N // ell) == 1 for ell in factorize(N)):
            raise InvalidBasisError("Weil pairing of the basis is not primitive")

    def with_basis(self, P: CurvePoint, Q: CurvePoint) -> "ModuliPoint":
        return ModuliPoint(self.E, self.N, P, Q, self.C, self.torsion)

    def __eq__(self, other):
        return (
            isinstance(other, ModuliPoint)
            and self.N == other.N
            and self.E == other.E
            and self.P == other.P
            and self.Q == other.Q
            and self.m == other.m
            and self.C.gen == other.C.gen
        )

    def __hash__(self):
        return hash((self.N, self.E, self.P, self.Q, self.C.gen))

    def __repr__(self):
        return f"ModuliPoint(N={self.N}, m={self.m}, E={self.E!r}, P={self.P!r}, Q={self.Q!r}, C={self.C.gen!r})"

    # -- serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        def pt(T):
            return None if T.x is None else [T.x.text(), T.y.text()]

        return {
            "field": self.F.label,
            "N": self.N,
            "m": self.m,
            "curve": [self.E.A.text(), self.E.B.text()],
            "P": pt(self.P),
            "Q": pt(self.Q),
            "C": pt(self.C.gen),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModuliPoint":
        try:
            F = parse_field(data["field"])
            if not isinstance(F, FiniteField):
                raise InputError("moduli points need a finite field")
            E = EllipticCurve(F, [parse_element(F, c) for c in data["curve"]])
            N = int(data["N"])
            m = int(data.get("m", 1))

            def pt(v):
                if v is None:
                    return E.O
                return E.point(parse_element(F, v[0]), parse_element(F, v[1]))

            P, Q = pt(data["P"]), pt(data["Q"])
            C = CyclicSubgroup(E, pt(data.get("C")), m)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed moduli point: {exc}") from None
        return cls(E, N, P, Q, C)


# ---------------------------------------------------------------------------
# operators


def det_index(M: ModuliPoint) -> int:
    """dlog of e_N(P, Q) to the reference root zeta_ref(F, N)."""
    z = M.pairing()
    zeta = zeta_ref(M.F, M.N)
    e = discrete_log(zeta, z, M.N)
    if gcd(e, M.N) != 1:
        raise InvalidBasisError("pairing index is not a unit")
    return e


def act_unit(n: int, M: ModuliPoint) -> ModuliPoint:
    """[n]: basis multiplied by n."""
    if gcd(n, M.N) != 1:
        raise InputError(f"{n} is not a unit mod {M.N}")
    E = M.E
    return ModuliPoint(E, M.N, E.mul(n, M.P), E.mul(n, M.Q), M.C, M.torsion)


def act_gl2(g: Matrix, M: ModuliPoint) -> ModuliPoint:
    N = M.N
    if gcd(mat_det(g, N), N) != 1:
        raise InputError("matrix is not invertible mod N")
    (a, b), (c, d) = g
    E = M.E
    P = E.add(E.mul(a, M.P), E.mul(b, M.Q))
    Q = E.add(E.mul(c, M.P), E.mul(d, M.Q))
    return ModuliPoint(E, N, P, Q, M.C, M.torsion)


def _quotient(M: ModuliPoint, d: int) -> Isogeny:
    return velu_quotient(M.E, standard_subgroup(M.C, d))


def degeneracy(d: int, t: int, M: ModuliPoint) -> ModuliPoint:
    """D_{d,t}: (E, (P,Q), C) -> (E/C[d], (pi P, pi Q), pi(C)[t])."""
    m = M.m
    if d < 1 or t < 1 or m % (d * t):
        raise InputError(f"D_{{{d},{t}}} needs d*t | m = {m}")
    phi = _quotient(M, d)
    Eq = phi.codomain
    image = CyclicSubgroup(Eq, phi.push(M.C.gen), m // d)
    C2 = standard_subgroup(image, t)
    return ModuliPoint(Eq, M.N, phi.push(M.P), phi.push(M.Q), C2, M.torsion.child(phi))


def atkin_lehner(d: int, M: ModuliPoint) -> ModuliPoint:
    """w_d: quotient by C[d]; new subgroup = ker(dual isogeny) + image of C[m/d]."""
    m = M.m
    if d < 1 or m % d or gcd(d, m // d) != 1:
        raise InputError(f"w_{d} needs d | m = {m} with gcd(d, m/d) = 1")
    E = M.E
    phi = _quotient(M, d)
    Eq = phi.codomain
    g1 = Eq.O
    if d > 1:
        T1, T2 = M.torsion.basis(d)
        for ell, f in factorize(d).items():
            s = d // ell**f
            cands = [phi.push(E.mul(s, T1)), phi.push(E.mul(s, T2))]
            gen = None
            for c in cands:
                if Eq.mul(ell ** (f - 1), c).x is not None:
                    gen = c
                    break
            if gen is None:
                raise ConsistencyError("image of E[d] is not cyclic of order d")
            g1 = Eq.add(g1, gen)
    g2 = phi.push(standard_subgroup(M.C, m // d).gen)
    C2 = CyclicSubgroup(Eq, Eq.add(g1, g2), m)
    return ModuliPoint(Eq, M.N, phi.push(M.P), phi.push(M.Q), C2, M.torsion.child(phi))


def basis_coordinates(E: EllipticCurve, N: int, P: CurvePoint, Q: CurvePoint, X: CurvePoint) -> tuple[int, int]:
    """(a, b) mod N with X = aP + bQ, for a basis (P, Q) of E[N]."""
    a = b = 0
    mod = 1
    for ell, e in factorize(N).items():
        s = N // ell**e
        got = dlog2(E, ell, E.mul(s, P), e, E.mul(s, Q), e, E.mul(s, X))
        if got is None:
            raise ConsistencyError("point is not in the span of the basis")
        x, y = got
        n = ell**e
        # CRT merge
        a = a + mod * (((x - a) * pow(mod, -1, n)) % n)
        b = b + mod * (((y - b) * pow(mod, -1, n)) % n)
        mod *= n
    return a % N, b % N


def frobenius_point(T: CurvePoint, power: int = 1) -> CurvePoint:
    if T.x is None:
        return T
    return CurvePoint(T.E, T.x.frobenius(power), T.y.frobenius(power))


def frobenius_matrix(M: ModuliPoint, power: int = 1) -> Matrix:
    """D with D (P; Q) = (phi P; phi Q), phi = p^power-Frobenius on coordinates."""
    E = M.E
    if any(c.frobenius(power) != c for c in E.a):
        raise InputError("curve is not defined over the Frobenius fixed field")
    N = M.N
    fP, fQ = frobenius_point(M.P, power), frobenius_point(M.Q, power)
    a, b = basis_coordinates(E, N, M.P, M.Q, fP)
    c, d = basis_coordinates(E, N, M.P, M.Q, fQ)
    D = mat(a, b, c, d, N)
    # the matrix must reproduce the images
    if E.add(E.mul(a, M.P), E.mul(b, M.Q)) != fP or E.add(E.mul(c, M.P), E.mul(d, M.Q)) != fQ:
        raise ConsistencyError("Frobenius image not in the span of the basis")
    return D


def scale_point(T: CurvePoint, E2: EllipticCurve, u) -> CurvePoint:
    if T.x is None:
        return E2.O
    u2 = u * u
    return CurvePoint(E2, u2 * T.x, u2 * u * T.y)


def _maps_onto(M1: ModuliPoint, M2: ModuliPoint, u) -> bool:
    E1, E2 = M1.E, M2.E
    u2 = u * u
    u4 = u2 * u2
    if u4 * E1.A != E2.A or u4 * u2 * E1.B != E2.B:
        return False
    if scale_point(M1.P, E2, u) != M2.P or scale_point(M1.Q, E2, u) != M2.Q:
        return False
    if M1.m != M2.m:
        return False
    return scale_point(M1.C.gen, E2, u) in M2.C


def isomorphic(M1: ModuliPoint, M2: ModuliPoint) -> tuple[bool, object]:
    """Whether some (x, y) -> (u^2 x, u^3 y) carries M1 to M2; returns (flag, u or None).

    Any such u must send P1 to P2, which pins u = (y2/y1) / (x2/x1) (or uses Q when
    x(P1) = 0), so the candidate set is exhausted by a single check.
    """
    if M1.N != M2.N or M1.m != M2.m or M1.F != M2.F:
        return False, None
    if M1.E.j != M2.E.j:
        return False, None
    for T1, T2 in ((M1.P, M2.P), (M1.Q, M2.Q)):
        if T1.x.is_zero() or T2.x.is_zero():
            continue
        u2 = T2.x / T1.x
        u3 = T2.y / T1.y
        u = u3 / u2
        if u * u != u2:
            return False, None
        return (True, u) if _maps_onto(M1, M2, u) else (False, None)
    return False, None


# ---------------------------------------------------------------------------
# enumeration and census


def _field_from_order(q: int) -> FiniteField:
    f = factorize(q)
    if len(f) != 1:
        raise InputError(f"{q} is not a prime power")
    (p, k), = f.items()
    return GF(p, k)


def _curve_points(E: EllipticCurve) -> list[CurvePoint]:
    return E.points()


def enumerate_points(N: int, m: int, q: int, cap: int = ENUM_CAP) -> list[ModuliPoint]:
    """One representative per isomorphism class of (E, (P, Q), C) over F_q with E[N] rational."""
    F = _field_from_order(q)
    if F.p in (2, 3):
        raise UnsupportedError("enumeration needs characteristic >= 5")
    if (N * m) % F.p == 0:
        raise CharacteristicError("level orders must be invertible")
    if gcd(N, m) != 1:
        raise InputError("N and m must be coprime")
    if (F.q - 1) % N:
        return []
    units = [u for u in F.elements() if not u.is_zero()]
    work = 0
    reps: dict[tuple, ModuliPoint] = {}
    for A in F.elements():
        for B in F.elements():
            if (4 * A * A * A + 27 * B * B).is_zero():
                continue
            E = EllipticCurve(F, (A, B))
            n = E.count_points()
            if n % (N * N):
                continue
            pts = _curve_points(E)
            tors = [T for T in pts if E.mul(N, T).x is None]
            if len(tors) != N * N:
                continue
            order_N = [T for T in tors if all(E.mul(N // ell, T).x is not None for ell in factorize(N))]
            subgroups = _cyclic_subgroups(E, pts, m)
            work += len(order_N) ** 2 * len(subgroups)
            if work > cap:
                raise ResourceError("enumeration exceeds the configured cap")
            for P in order_N:
                for Q in order_N:
                    z = weil_pairing(E, N, P, Q)
                    if any(z ** (N // ell) == 1 for ell in factorize(N)):
                        continue
                    for C in subgroups:
                        key = _canonical_key(E, P, Q, C, units)
                        if key not in reps:
                            reps[key] = None
                        if _point_key(E, P, Q, C) == key:
                            reps[key] = ModuliPoint(E, N, P, Q, C)
    out = [reps[k] for k in sorted(reps)]
    if any(M is None for M in out):
        raise ConsistencyError("an isomorphism class has no canonical member")
    return out


def _cyclic_subgroups(E: EllipticCurve, pts: list[CurvePoint], m: int) -> list[CyclicSubgroup]:
    if m == 1:
        return [CyclicSubgroup.trivial(E)]
    seen = {}
    for T in pts:
        if E.mul(m, T).x is None and all(E.mul(m // ell, T).x is not None for ell in factorize(m)):
            C = CyclicSubgroup(E, T, m)
            seen[C.gen.sort_key()] = C
    return [seen[k] for k in sorted(seen)]


def _point_key(E, P, Q, C) -> tuple:
    return (E.A.code, E.B.code, P.sort_key(), Q.sort_key(), C.gen.sort_key())


def _canonical_key(E, P, Q, C, units) -> tuple:
    best = None
    for u in units:
        u2 = u * u
        u4 = u2 * u2
        E2 = EllipticCurve(E.F, (u4 * E.A, u4 * u2 * E.B))
        C2 = CyclicSubgroup(E2, scale_point(C.gen, E2, u), C.order)
        key = _point_key(E2, scale_point(P, E2, u), scale_point(Q, E2, u), C2)
        if best is None or key < best:
            best = key
    return best


def det_fibre_census(N: int, q: int, m: int = 1) -> dict[int, int]:
    """Number of enumerated classes in each det_index fibre (all units listed)."""
    counts = {u: 0 for u in units_mod(N)}
    for M in enumerate_points(N, m, q):
        counts[det_index(M)] += 1
    return counts


# ---------------------------------------------------------------------------
# property suites


@dataclass
class SuiteReport:
    name: str
    config: dict
    checks: dict = field(default_factory=dict)  # law -> [checked, violations]
    first_violation: dict | None = None
    seconds: float = 0.0
    info: dict = field(default_factory=dict)

    def record(self, law: str, ok: bool, witness) -> None:
        c = self.checks.setdefault(law, [0, 0])
        c[0] += 1
        if not ok:
            c[1] += 1
            if self.first_violation is None:
                self.first_violation = {"law": law, **(witness() if callable(witness) else witness)}

    @property
    def violations(self) -> int:
        return sum(v[1] for v in self.checks.values())

    @property
    def passed(self) -> bool:
        return self.violations == 0 and bool(self.checks)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "config": self.config,
            "checks": {k: {"checked": v[0], "violations": v[1]} for k, v in sorted(self.checks.items())},
            "violations": self.violations,
            "first_violation": self.first_violation,
            "info": self.info,
        }


@dataclass
class RootCurve:
    E: EllipticCurve  # over the working field
    basis_N: tuple
    torsion: TorsionCache
    basis_m: tuple


def moduli_pool(N: int, m: int, q: int, size: int = 4, k_cap: int = 24) -> list[RootCurve]:
    """Curves over F_q (prime) with E[N m^2] rational over F_{q^k}, k minimal over all curves.

    Root curves carry E[ell^(2 v_ell(m))] so that Atkin-Lehner operators can be applied
    twice without leaving the working field.
    """
    F = _field_from_order(q)
    if F.k != 1:
        raise UnsupportedError("moduli pools are built over prime fields")
    L = N * m * m
    by_k: dict[int, list] = {}
    for A in range(q):
        for B in range(q):
            if (4 * A**3 + 27 * B * B) % q == 0:
                continue
            E = EllipticCurve(F, (A, B))
            a = E.trace()
            for k in range(1, k_cap + 1):
                if (q**k - 1) % L:
                    continue
                n = q**k + 1 - trace_power(a, q, k)
                if n % (L * L) == 0:
                    by_k.setdefault(k, []).append((E, n))
                    break
    for k in sorted(by_k):
        pool: list[RootCurve] = []
        js = set()
        failed = set()  # same j and same order over F_{q^k}: skip repeats of a failed search
        K = GF(q, k)
        for E, n in by_k[k]:
            if E.j in js or (E.j, n) in failed:
                continue
            Ek = E.base_change(K)
            Ek._order_cache["auto"] = n
            b = torsion_basis_over(Ek, L, n)
            if b is None:
                failed.add((E.j, n))
                continue
            js.add(E.j)
            TL1, TL2 = b
            bases = {}
            for ell, v in factorize(m).items() if m > 1 else []:
                s = L // ell ** (2 * v)
                bases[ell] = (2 * v, Ek.mul(s, TL1), Ek.mul(s, TL2))
            cache = TorsionCache(Ek, n, bases)
            basis_N = (Ek.mul(m * m, TL1), Ek.mul(m * m, TL2))
            basis_m = (Ek.mul(N * m, TL1), Ek.mul(N * m, TL2))
            pool.append(RootCurve(Ek, basis_N, cache, basis_m))
            if len(pool) == size:
                return pool
        if pool:
            return pool
    raise ResourceError(f"no curve over F_{q} has E[{L}] rational with k <= {k_cap}")


def _random_point(root: RootCurve, N: int, m: int, rng: random.Random) -> ModuliPoint:
    E = root.E
    g = random_gl2(N, rng)
    (a, b), (c, d) = g
    P0, Q0 = root.basis_N
    P = E.add(E.mul(a, P0), E.mul(b, Q0))
    Q = E.add(E.mul(c, P0), E.mul(d, Q0))
    T1, T2 = root.basis_m
    while True:
        x, y = rng.randrange(m), rng.randrange(m)
        if m == 1 or all((x % ell) or (y % ell) for ell in factorize(m)):
            break
    C = CyclicSubgroup(E, E.add(E.mul(x, T1), E.mul(y, T2)), m)
    torsion = TorsionCache(E, root.torsion.order, root.torsion._bases)
    return ModuliPoint(E, N, P, Q, C, torsion)


def identity_suite(N: int, m: int, q: int, trials: int = 200, seed: int = 0, pool_size: int = 4) -> SuiteReport:
    """Randomised check of the degeneracy / Atkin-Lehner / det identities."""
    t0 = time.perf_counter()
    report = SuiteReport("moduli-identities", {"N": N, "m": m, "q": q, "trials": trials, "seed": seed})
    pool = moduli_pool(N, m, q, pool_size)
    report.info["working_field"] = pool[0].E.F.label
    report.info["pool"] = [r.E.coefficients_text() for r in pool]
    divs = divisors(m)
    exact = [d for d in divs if gcd(d, m // d) == 1]
    dt_pairs = [(d, t) for d in divs for t in divs if m % (d * t) == 0]
    units = units_mod(N)
    coprime_pairs = [(a, b) for a in divs for b in divs if gcd(a, b) == 1]

    clean = 0
    for i in range(trials):
        before = report.violations
        rng = random.Random(f"{seed}:{N}:{m}:{q}:{i}")
        root = pool[rng.randrange(len(pool))]
        M = _random_point(root, N, m, rng)
        det0 = det_index(M)

        def wit(**kw):
            return lambda: {"trial": i, "curve": root.E.coefficients_text(), "point": M.to_json(), **kw}

        # D_{r,s} o D_{d,t} = D_{dr,s}
        d, t = rng.choice(dt_pairs)
        r, s = rng.choice([(r, s) for r in divisors(t) for s in divisors(t) if t % (r * s) == 0])
        Ddt = degeneracy(d, t, M)
        lhs = degeneracy(r, s, Ddt)
        rhs = degeneracy(d * r, s, M)
        report.record("degeneracy_composition", isomorphic(lhs, rhs)[0], wit(d=d, t=t, r=r, s=s))
        report.record("det_degeneracy", det_index(Ddt) == d * det0 % N, wit(d=d, t=t))

        # D_{d,t} commutes with [n]
        n = rng.choice(units)
        report.record(
            "degeneracy_commutes_unit",
            isomorphic(degeneracy(d, t, act_unit(n, M)), act_unit(n, Ddt))[0],
            wit(d=d, t=t, n=n),
        )
        report.record("det_unit", det_index(act_unit(n, M)) == n * n * det0 % N, wit(n=n))

        # w_d o w_d' = [delta] o w_{dd'/delta^2}
        d1, d2 = rng.choice(exact), rng.choice(exact)
        delta = gcd(d1, d2)
        w2 = atkin_lehner(d2, M)
        lhs = atkin_lehner(d1, w2)
        rhs = act_unit(delta, atkin_lehner(d1 * d2 // (delta * delta), M))
        report.record("atkin_lehner_composition", isomorphic(lhs, rhs)[0], wit(d=d1, d_prime=d2))
        report.record("det_atkin_lehner", det_index(w2) == d2 * det0 % N, wit(d=d2))

        # D_{d,t} = D_{1,t} o w_d
        d3 = rng.choice(exact)
        t3 = rng.choice([t for t in divs if m % (d3 * t) == 0])
        lhs = degeneracy(d3, t3, M)
        rhs = degeneracy(1, t3, atkin_lehner(d3, M))
        report.record("degeneracy_via_atkin_lehner", isomorphic(lhs, rhs)[0], wit(d=d3, t=t3))

        # two-sided degeneracy square
        sp, tp = rng.choice(coprime_pairs)
        s4, t4 = rng.choice(divisors(sp)), rng.choice(divisors(tp))
        lhs = degeneracy(t4, m // (sp * tp), degeneracy(s4, m // sp, M))
        rhs = degeneracy(s4, m // (sp * tp), degeneracy(t4, m // tp, M))
        report.record("degeneracy_square", isomorphic(lhs, rhs)[0], wit(s_prime=sp, t_prime=tp, s=s4, t=t4))
        clean += report.violations == before

    report.info["trials_without_violation"] = clean
    report.seconds = time.perf_counter() - t0
    return report


def frobenius_suite(N: int, p: int, curves: int = 20, seed: int = 0, k_cap: int = 12) -> SuiteReport:
    """det D = p, trace D = a_p and D(phi^j) = D(phi)^j on seeded curves over F_p."""
    t0 = time.perf_counter()
    report = SuiteReport("frobenius-matrix", {"N": N, "p": p, "curves": curves, "seed": seed, "k_cap": k_cap})
    F = GF(p)
    rng = random.Random(f"frob:{seed}:{N}:{p}")
    used = set()
    tried = 0
    while len(used) < curves:
        tried += 1
        if tried > 50 * curves + p * p:
            raise ResourceError("not enough curves with small torsion degree")
        A, B = rng.randrange(p), rng.randrange(p)
        if (A, B) in used or (4 * A**3 + 27 * B * B) % p == 0:
            continue
        E = EllipticCurve(F, (A, B))
        try:
            k, P, Q = torsion_basis(E, N, k_cap)
        except ResourceError:
            continue
        used.add((A, B))
        Ek = P.E
        g = random_gl2(N, rng)
        M = act_gl2(g, ModuliPoint(Ek, N, P, Q))
        D = frobenius_matrix(M, 1)
        ap = E.trace()

        def wit(**kw):
            return lambda: {"curve": [A, B], "k": k, "D": D, **kw}

        report.record("det_is_p", mat_det(D, N) == p % N, wit())
        report.record("trace_is_ap", mat_trace(D, N) == ap % N, wit(a_p=ap))
        for j in range(1, k + 1):
            Dj = frobenius_matrix(M, j)
            report.record("power_law", Dj == mat_pow(D, j, N), wit(j=j, Dj=Dj))
        report.record("full_power_identity", mat_pow(D, k, N) == mat_identity(N), wit())
    report.info["curves"] = sorted(used)
    report.seconds = time.perf_counter() - t0
    return report
