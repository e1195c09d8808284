"""Weil pairing, cyclic subgroups and Velu quotient isogenies."""

from __future__ import annotations

from typing import Iterable

from .curve import CurvePoint, EllipticCurve
from .errors import CharacteristicError, ConsistencyError, InputError, UnsupportedError
from .exactfield import FiniteField, factorize

SHIFT_TRIES = 40


# ---------------------------------------------------------------------------
# Miller's algorithm


class _Degenerate(Exception):
    pass


def _line_step(E: EllipticCurve, T: CurvePoint, R: CurvePoint, Q: CurvePoint):
    """(T + R, l_{T,R}(Q), v_{T+R}(Q)) with normalised lines; raises _Degenerate on a zero."""
    a1, a2, a3, a4, a6 = E.a
    xq, yq = Q.x, Q.y
    if T.x is None or R.x is None:
        # l_{O,R} = v_R, so the factor is 1
        return (R if T.x is None else T), 1, None
    if T.x == R.x and (T.y + R.y + a1 * R.x + a3) == 0:
        num = xq - T.x
        if num == 0:
            raise _Degenerate
        return E.O, num, None
    if T.x == R.x:
        lam = (3 * T.x * T.x + 2 * a2 * T.x + a4 - a1 * T.y) / (2 * T.y + a1 * T.x + a3)
    else:
        lam = (R.y - T.y) / (R.x - T.x)
    x3 = lam * lam + a1 * lam - a2 - T.x - R.x
    y3 = lam * (T.x - x3) - T.y - a1 * x3 - a3
    num = yq - T.y - lam * (xq - T.x)
    den = xq - x3
    if num == 0 or den == 0:
        raise _Degenerate
    return CurvePoint(E, x3, y3), num, den


def miller(E: EllipticCurve, N: int, P: CurvePoint, Q: CurvePoint):
    """f_{N,P}(Q) for the normalised Miller function with divisor N(P) - N(O)."""
    num = E.F.one
    den = E.F.one
    T = P
    for bit in bin(N)[3:]:
        T2, l, v = _line_step(E, T, T, Q)
        num = num * num * l
        den = den * den * (v if v is not None else 1)
        T = T2
        if bit == "1":
            T2, l, v = _line_step(E, T, P, Q)
            num = num * l
            if v is not None:
                den = den * v
            T = T2
    if T.x is not None:
        raise ConsistencyError("Miller loop did not end at O")
    return num / den


def _check_torsion(E: EllipticCurve, N: int, P: CurvePoint):
    if not isinstance(E.F, FiniteField):
        raise UnsupportedError("Weil pairing implemented over finite fields")
    if N % E.F.p == 0:
        raise CharacteristicError(f"characteristic {E.F.p} divides {N}")
    if P.E != E or E.mul(N, P).x is not None:
        raise InputError(f"point is not {N}-torsion on the curve")


def weil_pairing(E: EllipticCurve, N: int, P: CurvePoint, Q: CurvePoint):
    """e_N(P, Q) = (-1)^N f_{N,P}(Q) / f_{N,Q}(P), with a shifted evaluation as fallback."""
    _check_torsion(E, N, P)
    _check_torsion(E, N, Q)
    one = E.F.one
    if P.x is None or Q.x is None or P == Q:
        return one
    try:
        val = miller(E, N, P, Q) / miller(E, N, Q, P)
        return -val if N % 2 else val
    except _Degenerate:
        pass
    return weil_pairing_shifted(E, N, P, Q)


def weil_pairing_shifted(E: EllipticCurve, N: int, P: CurvePoint, Q: CurvePoint, start: int = 0):
    """e_N(P,Q) = [f_P(Q+S)/f_P(S)] / [f_Q(P-S)/f_Q(-S)] for the first S that avoids all zeros."""
    one = E.F.one
    if P.x is None or Q.x is None:
        return one
    stream = E.point_stream(seed=7919 + start)
    for _ in range(SHIFT_TRIES):
        S = next(stream)
        try:
            QS, PS, mS = E.add(Q, S), E.add(P, E.neg(S)), E.neg(S)
            if QS.x is None or PS.x is None:
                continue
            a = miller(E, N, P, QS) / miller(E, N, P, S)
            b = miller(E, N, Q, PS) / miller(E, N, Q, mS)
            return a / b
        except (_Degenerate, ZeroDivisionError):
            continue
    raise ConsistencyError("no auxiliary point avoids the Miller divisors")


def is_primitive_root(z, N: int) -> bool:
    if z ** N != 1:
        return False
    return all(z ** (N // ell) != 1 for ell in factorize(N))


# ---------------------------------------------------------------------------
# cyclic subgroups


class CyclicSubgroup:
    """<generator> of exact order m. The stored generator is canonical (smallest sort key)."""

    __slots__ = ("E", "gen", "order", "_pts")

    def __init__(self, E: EllipticCurve, gen: CurvePoint, order: int | None = None):
        if gen.E != E:
            raise InputError("generator is not on the curve")
        if order is None:
            order = _exact_order_small(E, gen)
        elif E.mul(order, gen).x is not None or any(
            E.mul(order // ell, gen).x is None for ell in factorize(order)
        ):
            raise InputError(f"generator does not have exact order {order}")
        self.E = E
        self.order = order
        self._pts = None
        self.gen = gen
        pts = self.points()
        from math import gcd

        cands = [pts[i] for i in range(1, order) if gcd(i, order) == 1] if order > 1 else [E.O]
        best = min(cands, key=lambda R: R.sort_key())
        if best != gen:
            self.gen = best
            self._pts = None

    @classmethod
    def trivial(cls, E: EllipticCurve) -> "CyclicSubgroup":
        return cls(E, E.O, 1)

    def points(self) -> list[CurvePoint]:
        """[0*g, 1*g, ..., (m-1)*g] for the canonical generator g."""
        if self._pts is None:
            out = [self.E.O]
            cur = self.E.O
            for _ in range(self.order - 1):
                cur = self.E.add(cur, self.gen)
                out.append(cur)
            self._pts = out
        return self._pts

    def point_set(self) -> frozenset:
        return frozenset(self.points())

    def __contains__(self, P: CurvePoint) -> bool:
        return P in self.point_set()

    def __eq__(self, other):
        return (
            isinstance(other, CyclicSubgroup)
            and self.E == other.E
            and self.order == other.order
            and self.gen == other.gen
        )

    def __hash__(self):
        return hash((self.order, self.gen))

    def __repr__(self):
        return f"CyclicSubgroup(order={self.order}, gen={self.gen!r})"


def _exact_order_small(E: EllipticCurve, P: CurvePoint, cap: int = 10**5) -> int:
    n = 1
    cur = P
    while cur.x is not None:
        cur = E.add(cur, P)
        n += 1
        if n > cap:
            raise InputError("point order exceeds the subgroup cap")
    return n


def standard_subgroup(C: CyclicSubgroup, d: int) -> CyclicSubgroup:
    """The unique subgroup of order d, generated by (m/d) * generator."""
    if d < 1 or C.order % d:
        raise InputError(f"{d} does not divide the subgroup order {C.order}")
    return CyclicSubgroup(C.E, C.E.mul(C.order // d, C.gen), d)


# ---------------------------------------------------------------------------
# Velu isogenies


class Isogeny:
    """Separable isogeny with an explicit finite kernel, evaluated by Velu's formulas."""

    def __init__(self, domain: EllipticCurve, kernel_points: Iterable[CurvePoint]):
        E = domain
        if not E.short:
            raise UnsupportedError("Velu isogenies need a short Weierstrass domain")
        if E.F.characteristic in (2, 3):
            raise UnsupportedError("Velu isogenies need characteristic >= 5")
        pts = {P for P in kernel_points}
        pts.add(E.O)
        if len(pts) % E.F.characteristic == 0:
            raise CharacteristicError("characteristic divides the kernel order")
        self.domain = E
        self.kernel = frozenset(pts)
        self.kernel_gen: CurvePoint | None = None
        self.degree = len(pts)
        A, B = E.A, E.B
        reps = []
        seen = set()
        for T in sorted(pts, key=lambda R: R.sort_key()):
            if T.x is None or T in seen:
                continue
            negT = E.neg(T)
            if negT not in pts:
                raise InputError("kernel points do not form a subgroup")
            seen.add(T)
            seen.add(negT)
            gx = 3 * T.x * T.x + A
            if T.y == 0:
                reps.append((T.x, gx, 0 * gx))
            else:
                reps.append((T.x, 2 * gx, 4 * T.y * T.y))
        self._reps = reps
        v = sum((r[1] for r in reps), 0 * A)
        w = sum((r[2] + r[0] * r[1] for r in reps), 0 * A)
        self.codomain = EllipticCurve(E.F, (0, 0, 0, A - 5 * v, B - 7 * w))

    def __call__(self, P: CurvePoint) -> CurvePoint:
        return self.push(P)

    def push(self, P: CurvePoint) -> CurvePoint:
        if P.E != self.domain:
            raise InputError("point is not on the domain")
        if P.x is None or P in self.kernel:
            return self.codomain.O
        x, y = P.x, P.y
        X = x
        dX = 1
        for xt, vt, ut in self._reps:
            t = (x - xt).inverse()
            t2 = t * t
            X = X + vt * t + ut * t2
            dX = dX - vt * t2 - 2 * ut * t2 * t
        return CurvePoint(self.codomain, X, y * dX)

    def __repr__(self):
        return f"Isogeny(degree={self.degree}, {self.domain!r} -> {self.codomain!r})"


def identity_isogeny(E: EllipticCurve) -> Isogeny:
    return Isogeny(E, [E.O])


def velu_quotient(E: EllipticCurve, K: CyclicSubgroup) -> Isogeny:
    if K.E != E:
        raise InputError("kernel is not on the curve")
    phi = Isogeny(E, K.points())
    phi.kernel_gen = K.gen
    return phi


def push_point(phi: Isogeny, P: CurvePoint) -> CurvePoint:
    return phi.push(P)


def push_subgroup(phi: Isogeny, C: CyclicSubgroup) -> CyclicSubgroup:
    """phi(C), of order m / |C meet ker phi|."""
    inter = sum(1 for R in C.points() if R in phi.kernel)
    return CyclicSubgroup(phi.codomain, phi.push(C.gen), C.order // inter)


def subgroup_generated(E: EllipticCurve, gens: Iterable[CurvePoint]) -> frozenset:
    """All points of the (small) subgroup generated by gens."""
    pts = {E.O}
    frontier = [E.O]
    gens = [g for g in gens if g.x is not None]
    while frontier:
        new = []
        for R in frontier:
            for g in gens:
                S = E.add(R, g)
                if S not in pts:
                    pts.add(S)
                    new.append(S)
        frontier = new
    return frozenset(pts)
