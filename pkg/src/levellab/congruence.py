"""Mod-N congruence evidence for curves over Q.

Two tools:
  ap_congruence        compares a_p mod N at good primes by exact counting
  determinant_classes  searches GL2(Z/N) for Frobenius-equivariant isomorphisms
                       E1[N] -> E2[N] over a finite field and records their
                       pairing determinants alpha

Both are local evidence: agreement at finitely many primes is necessary for a
global isomorphism of Galois modules, not a proof of one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .curve import EXTENSION_CAP, EllipticCurve, torsion_basis, torsion_basis_over, trace_power
from .errors import InputError, ResourceError
from .exactfield import GF, QQ, FiniteField, RationalField, is_prime, units_mod
from .moduli import ModuliPoint, Matrix, det_index, frobenius_matrix, gl2, mat_det, mat_mul

DET_CLASS_MAX_N = 7


def _require_integral(E: EllipticCurve) -> None:
    if not isinstance(E.F, RationalField) or any(c.denominator != 1 for c in E.a):
        raise InputError("congruence tests need integral curves over Q")


def bad_primes(E: EllipticCurve) -> set[int]:
    return {p for p in _prime_factors(abs(E.discriminant.numerator))}


def _prime_factors(n: int) -> set[int]:
    from .exactfield import prime_divisors

    return set(prime_divisors(n)) if n > 1 else set()


@dataclass
class CongruenceReport:
    N: int
    p_max: int
    rows: list = field(default_factory=list)  # (p, a1, a2, verdict)

    @property
    def disagreements(self) -> list[int]:
        return [r[0] for r in self.rows if r[3] == "unequal"]

    @property
    def skipped(self) -> list[int]:
        return [r[0] for r in self.rows if r[3] == "skipped-bad-reduction"]

    @property
    def verdict(self) -> str:
        return "congruent" if not self.disagreements else "not-congruent"

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "p_max": self.p_max,
            "primes": [
                {"p": p, "a_p_1": a1, "a_p_2": a2, "verdict": v} for p, a1, a2, v in self.rows
            ],
            "good_primes": len(self.rows) - len(self.skipped),
            "skipped": self.skipped,
            "disagreements": self.disagreements,
            "verdict": self.verdict,
        }


def ap_congruence(E1: EllipticCurve, E2: EllipticCurve, N: int, p_max: int) -> CongruenceReport:
    """a_p(E1) vs a_p(E2) mod N for every prime p <= p_max not dividing N * disc1 * disc2."""
    _require_integral(E1)
    _require_integral(E2)
    if N < 2:
        raise InputError("N must be >= 2")
    bad = bad_primes(E1) | bad_primes(E2) | _prime_factors(N)
    report = CongruenceReport(N, p_max)
    for p in range(2, p_max + 1):
        if not is_prime(p):
            continue
        if p in bad:
            report.rows.append((p, None, None, "skipped-bad-reduction"))
            continue
        a1 = E1.reduce(p).trace()
        a2 = E2.reduce(p).trace()
        report.rows.append((p, a1, a2, "equal" if (a1 - a2) % N == 0 else "unequal"))
    return report


def quadratic_twist(E: EllipticCurve, d) -> EllipticCurve:
    """y^2 = x^3 + A d^2 x + B d^3 for a short model."""
    if not E.short:
        raise InputError("twists are built from short models")
    d = E.F(d)
    return EllipticCurve(E.F, (E.A * d * d, E.B * d * d * d))


# ---------------------------------------------------------------------------
# determinant classes


@dataclass
class DetClassReport:
    N: int
    p: int
    k: int
    D1: Matrix
    D2: Matrix
    isomorphisms: int
    determinants: list[int]
    alphas: list[int]
    centralizer_dets: list[int]
    index1: int
    index2: int

    @property
    def squares(self) -> set[int]:
        return {u * u % self.N for u in units_mod(self.N)}

    @property
    def symplectic_possible(self) -> bool:
        return any(a in self.squares for a in self.alphas)

    @property
    def antisymplectic_possible(self) -> bool:
        return any(a not in self.squares for a in self.alphas)

    @property
    def verdict(self) -> str:
        return "local-isomorphism" if self.alphas else "no local isomorphism"

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "p": self.p,
            "working_field": f"Fq:{self.p}^{self.k}",
            "frobenius_matrix_1": self.D1,
            "frobenius_matrix_2": self.D2,
            "isomorphisms": self.isomorphisms,
            "determinants": self.determinants,
            "alphas": self.alphas,
            "centralizer_dets": self.centralizer_dets,
            "pairing_index_1": self.index1,
            "pairing_index_2": self.index2,
            "symplectic_possible": self.symplectic_possible,
            "antisymplectic_possible": self.antisymplectic_possible,
            "verdict": self.verdict,
            "scope": "local at p: Frobenius data only",
        }


def _short_model_mod_p(E: EllipticCurve, p: int) -> EllipticCurve:
    if isinstance(E.F, RationalField):
        _require_integral(E)
        Ep = E.reduce(p)
    elif isinstance(E.F, FiniteField) and E.F.k == 1 and E.F.p == p:
        Ep = E
    else:
        raise InputError("curves must be over Q or over F_p")
    return Ep.to_short()[0]


def _common_degree(E1: EllipticCurve, E2: EllipticCurve, N: int, k_cap: int) -> int:
    k1 = torsion_basis(E1, N, k_cap)[0]
    k2 = torsion_basis(E2, N, k_cap)[0]
    k = k1 * k2 // gcd(k1, k2)
    if k > k_cap:
        raise ResourceError(f"common torsion field degree {k} exceeds the cap {k_cap}")
    return k


def _moduli_point(E: EllipticCurve, N: int, k: int) -> ModuliPoint:
    K = GF(E.F.p, k)
    Ek = E.base_change(K)
    order = K.q + 1 - trace_power(E.trace(), E.F.p, k)
    Ek._order_cache["auto"] = order
    b = torsion_basis_over(Ek, N, order)
    if b is None:
        raise ResourceError("torsion basis search failed at the common degree")
    return ModuliPoint(Ek, N, b[0], b[1])


def determinant_classes(
    E1: EllipticCurve,
    E2: EllipticCurve,
    N: int,
    p: int,
    k_cap: int = EXTENSION_CAP,
    points: tuple[ModuliPoint, ModuliPoint] | None = None,
) -> DetClassReport:
    """Frobenius-equivariant isomorphisms E1[N] -> E2[N] over F_p, with their alphas.

    A matrix g encodes i(P1) = g11 P2 + g12 Q2, i(Q1) = g21 P2 + g22 Q2. With
    Frobenius matrices D (P; Q) = (phi P; phi Q), equivariance reads D1 g = g D2.
    Then e(i P1, i Q1) = e(P2, Q2)^det g, so alpha = det(g) * idx2 / idx1 mod N,
    where idx are pairing indices against the shared reference root.
    """
    if N > DET_CLASS_MAX_N or not is_prime(N):
        raise InputError(f"determinant classes need a prime N <= {DET_CLASS_MAX_N}")
    if p < 5 or not is_prime(p) or p == N:
        raise InputError("p must be a prime >= 5 different from N")
    if points is None:
        S1 = _short_model_mod_p(E1, p)
        S2 = _short_model_mod_p(E2, p)
        k = _common_degree(S1, S2, N, k_cap)
        M1 = _moduli_point(S1, N, k)
        M2 = _moduli_point(S2, N, k)
    else:
        M1, M2 = points
        if M1.F != M2.F or M1.F.p != p:
            raise InputError("moduli points must share the working field")
        k = M1.F.k
    D1 = frobenius_matrix(M1, 1)
    D2 = frobenius_matrix(M2, 1)
    i1, i2 = det_index(M1), det_index(M2)
    inv1 = pow(i1, -1, N)
    group = gl2(N)
    sols = [g for g in group if mat_mul(D1, g, N) == mat_mul(g, D2, N)]
    dets = sorted({mat_det(g, N) for g in sols})
    alphas = sorted({d * i2 * inv1 % N for d in dets})
    cent = sorted({mat_det(c, N) for c in group if mat_mul(D1, c, N) == mat_mul(c, D1, N)})
    return DetClassReport(N, p, k, D1, D2, len(sols), dets, alphas, cent, i1, i2)


def smallest_admissible_prime(
    E1: EllipticCurve, E2: EllipticCurve, N: int, k_cap: int = EXTENSION_CAP, p_max: int = 1000
) -> int:
    """Smallest good prime p >= 5, p != N, where both torsion fields fit under the cap."""
    bad = bad_primes(E1) | bad_primes(E2) | {N}
    for p in range(5, p_max + 1):
        if not is_prime(p) or p in bad:
            continue
        try:
            _common_degree(_short_model_mod_p(E1, p), _short_model_mod_p(E2, p), N, k_cap)
        except ResourceError:
            continue
        return p
    raise ResourceError("no admissible prime below the bound")
