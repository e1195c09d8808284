"""Sparse multivariate polynomials over Q and F_p with Buchberger Groebner bases.

Monomial order is graded reverse lexicographic throughout. Radical membership uses
the Rabinowitsch trick; projective smoothness of a form F asks whether every
variable lies in the radical of (F, dF/dx_1, ..., dF/dx_n).
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, ResourceError
from .exactfield import is_prime, parse_field, FiniteField, RationalField

MAX_BASIS = 4000
MAX_PAIRS = 200_000
MAX_DEGREE = 40

Exp = tuple[int, ...]


# ---------------------------------------------------------------------------
# coefficients: p == 0 means Q (Fractions), otherwise integers mod p


def _norm_coef(c, p: int):
    if p:
        if isinstance(c, Fraction):
            if c.denominator % p == 0:
                raise InputError(f"denominator {c.denominator} is not invertible mod {p}")
            return c.numerator * pow(c.denominator, -1, p) % p
        return int(c) % p
    return Fraction(c)


def _inv(c, p: int):
    return pow(c, -1, p) if p else 1 / c


def _field_label(p: int) -> str:
    return f"Fp:{p}" if p else "Q"


def _parse_char(field) -> int:
    if field is None:
        return 0
    if isinstance(field, int):
        if field and not is_prime(field):
            raise InputError(f"{field} is not prime")
        return field
    F = parse_field(field) if isinstance(field, str) else field
    if isinstance(F, RationalField):
        return 0
    if isinstance(F, FiniteField) and F.k == 1:
        return F.p
    raise InputError("polynomials live over Q or a prime field")


def grevlex_key(e: Exp):
    """Sort key: larger key = larger monomial in grevlex."""
    return (sum(e), tuple(-x for x in reversed(e)))


def _heap_key(e: Exp):
    # smallest heap key = largest grevlex monomial
    return (-sum(e), tuple(reversed(e)))


# ---------------------------------------------------------------------------
# polynomials


class SparsePoly:
    __slots__ = ("vars", "terms", "p")

    def __init__(self, vars: Sequence[str], terms: dict | None = None, p: int = 0):
        self.vars = tuple(vars)
        self.p = p
        n = len(self.vars)
        out = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise InputError("exponent vector length does not match the variables")
            c = _norm_coef(c, p)
            if c:
                out[e] = c
        self.terms = out

    # -- constructors --------------------------------------------------------
    @classmethod
    def constant(cls, vars, c, p=0):
        return cls(vars, {(0,) * len(vars): c}, p)

    @classmethod
    def variable(cls, vars, name, p=0):
        vars = tuple(vars)
        e = tuple(1 if v == name else 0 for v in vars)
        if sum(e) != 1:
            raise InputError(f"unknown variable {name!r}")
        return cls(vars, {e: 1}, p)

    @classmethod
    def from_text(cls, text: str, vars: Sequence[str] | None = None, field="Q") -> "SparsePoly":
        return _Parser(text, vars, _parse_char(field)).parse()

    # -- basic data ----------------------------------------------------------
    @property
    def field(self) -> str:
        return _field_label(self.p)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def leading_monomial(self) -> Exp:
        return max(self.terms, key=grevlex_key)

    def monomials(self) -> list[Exp]:
        return sorted(self.terms, key=grevlex_key, reverse=True)

    def _like(self, terms) -> "SparsePoly":
        out = SparsePoly(self.vars, None, self.p)
        out.terms = terms
        return out

    def _check(self, other: "SparsePoly"):
        if self.vars != other.vars or self.p != other.p:
            raise InputError("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.constant(self.vars, other, self.p)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if self.p:
                v %= self.p
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return self._like(t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: (-c % self.p if self.p else -c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t: dict = {}
        p = self.p
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        if p:
            t = {e: c % p for e, c in t.items()}
        return self._like({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = SparsePoly.constant(self.vars, 1, self.p)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparsePoly)
            and self.vars == other.vars
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, self.p, frozenset(self.terms.items())))

    def __repr__(self):
        return f"SparsePoly({self.to_text()!r}, vars={self.vars}, field={self.field})"

    def derivative(self, var: str | int) -> "SparsePoly":
        i = self.vars.index(var) if isinstance(var, str) else var
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
                v = c * e[i]
                if self.p:
                    v %= self.p
                if v:
                    t[e2] = v
        return self._like(t)

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            m = c
            for x, k in zip(point, e):
                if k:
                    m = m * x**k
            total = total + m
        return total

    def change_field(self, field) -> "SparsePoly":
        p = _parse_char(field)
        if p == self.p:
            return self
        if self.p:
            raise InputError("only reduction from Q to F_p is supported")
        return SparsePoly(self.vars, self.terms, p)

    def with_vars(self, vars: Sequence[str]) -> "SparsePoly":
        """Embed into a ring with more variables (existing names keep their meaning)."""
        vars = tuple(vars)
        idx = [vars.index(v) for v in self.vars]
        t = {}
        for e, c in self.terms.items():
            e2 = [0] * len(vars)
            for i, k in zip(idx, e):
                e2[i] = k
            t[tuple(e2)] = c
        out = SparsePoly(vars, None, self.p)
        out.terms = t
        return out

    def degree_profile(self, names: Sequence[str]) -> list[tuple[int, int]]:
        """Sorted distinct (degree in names, degree in the remaining variables) pairs."""
        idx = {self.vars.index(n) for n in names}
        prof = set()
        for e in self.terms:
            a = sum(k for i, k in enumerate(e) if i in idx)
            prof.add((a, sum(e) - a))
        return sorted(prof)

    # -- text ----------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in self.monomials():
            c = self.terms[e]
            if self.p:
                sign, mag = "+", c
            else:
                sign, mag = ("-", -c) if c < 0 else ("+", c)
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


class _Parser:
    TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][0-9]*)|(.))")

    def __init__(self, text: str, vars, p: int):
        self.text = text
        self.p = p
        toks = []
        for num, name, op in self.TOKEN.findall(text):
            if num:
                toks.append(("num", int(num)))
            elif name:
                toks.append(("var", name))
            elif op.strip():
                if op not in "+-*/^()[]·":
                    raise InputError(f"unexpected character {op!r} in polynomial text")
                toks.append(("op", {"[": "(", "]": ")", "·": "*"}.get(op, op)))
        self.toks = toks
        self.i = 0
        if vars is None:
            seen = []
            for kind, v in toks:
                if kind == "var" and v not in seen:
                    seen.append(v)
            vars = seen
        self.vars = tuple(vars)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> SparsePoly:
        if not self.toks:
            raise InputError("empty polynomial text")
        out = self.expr()
        if self.i != len(self.toks):
            raise InputError(f"trailing input in polynomial text {self.text!r}")
        return out

    def expr(self) -> SparsePoly:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> SparsePoly:
        acc = self.power()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                acc = acc * self.power()
            elif (kind, val) == ("op", "/"):
                self.take()
                k, d = self.take()
                if k != "num" or d == 0:
                    raise InputError("division only by a nonzero integer")
                acc = acc * SparsePoly.constant(self.vars, Fraction(1, d), self.p)
            elif kind in ("num", "var") or (kind, val) == ("op", "("):
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> SparsePoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            k, e = self.take()
            if k != "num":
                raise InputError("exponent must be a non-negative integer")
            return base**e
        return base

    def atom(self) -> SparsePoly:
        kind, val = self.take()
        if kind == "num":
            return SparsePoly.constant(self.vars, val, self.p)
        if kind == "var":
            if val not in self.vars:
                raise InputError(f"unknown variable {val!r}")
            return SparsePoly.variable(self.vars, val, self.p)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise InputError("unbalanced parentheses")
            return inner
        raise InputError(f"unexpected token in polynomial text {self.text!r}")


# ---------------------------------------------------------------------------
# Groebner bases


@dataclass
class IdealData:
    vars: tuple
    gens: list
    p: int = 0
    is_groebner: bool = False

    @classmethod
    def of(cls, gens: Iterable[SparsePoly]) -> "IdealData":
        gens = list(gens)
        if not gens:
            raise InputError("an ideal needs at least one generator")
        v, p = gens[0].vars, gens[0].p
        for g in gens:
            if g.vars != v or g.p != p:
                raise InputError("generators live in different rings")
        return cls(v, gens, p)

    @property
    def field(self) -> str:
        return _field_label(self.p)

    def to_json(self) -> dict:
        return {"vars": list(self.vars), "field": self.field, "gens": [g.to_text() for g in self.gens]}

    @classmethod
    def from_json(cls, data: dict, field="Q") -> "IdealData":
        try:
            vars = tuple(data["vars"])
            gens = [SparsePoly.from_text(t, vars, data.get("field", field)) for t in data["gens"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed ideal description: {exc}") from None
        return cls.of(gens)


@dataclass
class GroebnerStats:
    pairs: int = 0
    reductions_to_zero: int = 0
    basis_peak: int = 0
    skipped: int = 0


class _Basis:
    """Working state for Buchberger: monic polynomials with cached leading monomials."""

    def __init__(self, p: int):
        self.p = p
        self.polys: list[dict] = []
        self.lms: list[Exp] = []
        self.live: list[bool] = []

    def reduce(self, f: dict, full: bool = True) -> dict:
        p = self.p
        f = dict(f)
        heap = [(_heap_key(e), e) for e in f]
        heapq.heapify(heap)
        rem = {}
        polys, lms, live = self.polys, self.lms, self.live
        while heap:
            _, m = heapq.heappop(heap)
            c = f.get(m)
            if c is None:
                continue
            for i in range(len(polys)):
                if not live[i]:
                    continue
                lm = lms[i]
                if all(a >= b for a, b in zip(m, lm)):
                    shift = tuple(a - b for a, b in zip(m, lm))
                    for e, a in polys[i].items():
                        e2 = tuple(x + y for x, y in zip(e, shift))
                        old = f.get(e2)
                        v = (0 if old is None else old) - c * a
                        if p:
                            v %= p
                        if v:
                            if old is None:
                                heapq.heappush(heap, (_heap_key(e2), e2))
                            f[e2] = v
                        elif old is not None:
                            del f[e2]
                    break
            else:
                rem[m] = f.pop(m)
                if not full:
                    rem.update(f)
                    return rem
        return rem


def _monic(f: dict, p: int) -> tuple[Exp, dict]:
    lm = max(f, key=grevlex_key)
    inv = _inv(f[lm], p)
    if p:
        return lm, {e: c * inv % p for e, c in f.items()}
    return lm, {e: c * inv for e, c in f.items()}


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _spoly(f: dict, lf: Exp, g: dict, lg: Exp, p: int) -> dict:
    L = _lcm(lf, lg)
    sf = tuple(x - y for x, y in zip(L, lf))
    sg = tuple(x - y for x, y in zip(L, lg))
    out: dict = {}
    for e, c in f.items():
        out[tuple(x + y for x, y in zip(e, sf))] = c
    for e, c in g.items():
        e2 = tuple(x + y for x, y in zip(e, sg))
        v = out.get(e2, 0) - c
        if p:
            v %= p
        if v:
            out[e2] = v
        else:
            out.pop(e2, None)
    return out


def _buchberger(gens: list[dict], nvars: int, p: int, stop_on_unit: bool = False, stats=None):
    B = _Basis(p)
    stats = stats if stats is not None else GroebnerStats()
    one = (0,) * nvars
    pairs: list = []
    treated: set = set()

    def add(f: dict) -> bool:
        lm, f = _monic(f, p)
        if sum(lm) > MAX_DEGREE:
            raise ResourceError(f"Groebner degree cap {MAX_DEGREE} exceeded ({stats.pairs} pairs done)")
        j = len(B.polys)
        B.polys.append(f)
        B.lms.append(lm)
        B.live.append(True)
        if len(B.polys) > MAX_BASIS:
            raise ResourceError(f"Groebner basis size cap {MAX_BASIS} exceeded ({stats.pairs} pairs done)")
        stats.basis_peak = max(stats.basis_peak, sum(B.live))
        for i in range(j):
            if not B.live[i]:
                continue
            L = _lcm(B.lms[i], lm)
            heapq.heappush(pairs, (sum(L), _heap_key(L), i, j))
        # elements whose leading monomial is now divisible are redundant for reduction
        for i in range(j):
            if B.live[i] and _divides(lm, B.lms[i]):
                B.live[i] = False
        return lm == one

    for g in gens:
        if g:
            r = B.reduce(g)
            if r and add(r) and stop_on_unit:
                return B, True
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        treated.add((i, j))
        li, lj = B.lms[i], B.lms[j]
        L = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            stats.skipped += 1
            continue
        # chain criterion: some k with lm_k | lcm and both pairs with k already treated
        chain = False
        for k in range(len(B.polys)):
            if k in (i, j) or not _divides(B.lms[k], L):
                continue
            if (min(i, k), max(i, k)) in treated and (min(j, k), max(j, k)) in treated:
                chain = True
                break
        if chain:
            stats.skipped += 1
            continue
        stats.pairs += 1
        if stats.pairs > MAX_PAIRS:
            raise ResourceError(f"Groebner pair cap {MAX_PAIRS} exceeded (basis size {len(B.polys)})")
        s = _spoly(B.polys[i], li, B.polys[j], lj, p)
        r = B.reduce(s) if s else {}
        if not r:
            stats.reductions_to_zero += 1
            continue
        if add(r) and stop_on_unit:
            return B, True
    return B, False


def _interreduce(B: _Basis, p: int) -> list[dict]:
    idx = [i for i in range(len(B.polys))]
    # minimal basis: drop elements whose leading monomial is divisible by another's
    keep = []
    for i in idx:
        li = B.lms[i]
        if any(
            _divides(B.lms[k], li) and (B.lms[k] != li or k < i) for k in idx if k != i
        ):
            continue
        keep.append(i)
    keep.sort(key=lambda i: grevlex_key(B.lms[i]), reverse=True)
    out = []
    for n, i in enumerate(keep):
        others = _Basis(p)
        for k in keep:
            if k != i:
                others.polys.append(B.polys[k])
                others.lms.append(B.lms[k])
                others.live.append(True)
        r = others.reduce(B.polys[i])
        out.append(_monic(r, p)[1])
    return out


def groebner(I: IdealData, stats: GroebnerStats | None = None) -> IdealData:
    """Reduced Groebner basis (grevlex), generators sorted by decreasing leading monomial."""
    n = len(I.vars)
    B, _ = _buchberger([g.terms for g in I.gens], n, I.p, stats=stats)
    if not B.polys:
        return IdealData(I.vars, [], I.p, True)
    polys = _interreduce(B, I.p)
    out = []
    for t in polys:
        f = SparsePoly(I.vars, None, I.p)
        f.terms = t
        out.append(f)
    return IdealData(I.vars, out, I.p, True)


def normal_form(f: SparsePoly, G: IdealData) -> SparsePoly:
    if not G.is_groebner:
        G = groebner(G)
    B = _Basis(G.p)
    for g in G.gens:
        lm, t = _monic(g.terms, G.p)
        B.polys.append(t)
        B.lms.append(lm)
        B.live.append(True)
    out = SparsePoly(G.vars, None, G.p)
    out.terms = B.reduce(f.terms)
    return out


def ideal_member(f: SparsePoly, I: IdealData) -> bool:
    return normal_form(f, I).is_zero()


def contains_unit(I: IdealData) -> bool:
    _, unit = _buchberger([g.terms for g in I.gens], len(I.vars), I.p, stop_on_unit=True)
    return unit


def radical_member(f: SparsePoly, I: IdealData) -> bool:
    """f in sqrt(I) iff 1 in I + (1 - s f) with a fresh variable s."""
    if f.vars != I.vars or f.p != I.p:
        raise InputError("polynomial and ideal live in different rings")
    s = "_s"
    while s in I.vars:
        s += "_"
    vars2 = I.vars + (s,)
    gens = [g.with_vars(vars2) for g in I.gens]
    rab = SparsePoly.constant(vars2, 1, I.p) - SparsePoly.variable(vars2, s, I.p) * f.with_vars(vars2)
    return contains_unit(IdealData(vars2, gens + [rab], I.p))


def radical_containment_report(I: IdealData, targets: Sequence[str | SparsePoly]) -> dict:
    results = {}
    for t in targets:
        f = t if isinstance(t, SparsePoly) else SparsePoly.variable(I.vars, t, I.p)
        results[f.to_text()] = radical_member(f, I)
    return {
        "field": I.field,
        "vars": list(I.vars),
        "targets": results,
        "contains_irrelevant_ideal": all(results.values()) and set(results) == set(I.vars),
        "all_targets_in_radical": all(results.values()),
    }


def jacobian_ideal(F: SparsePoly) -> IdealData:
    """(F, dF/dx_1, ..., dF/dx_n), dropping zero partials."""
    gens = [F] + [d for d in (F.derivative(i) for i in range(len(F.vars))) if not d.is_zero()]
    return IdealData(F.vars, gens, F.p)


def projective_smooth(F: SparsePoly, field=None) -> bool:
    """Whether the hypersurface F = 0 has no singular point over the algebraic closure."""
    if field is not None:
        F = F.change_field(field)
    if len(F.vars) < 2:
        raise InputError("projective hypersurfaces need at least two variables")
    if F.is_zero() or not F.is_homogeneous():
        raise InputError("projective smoothness needs a nonzero homogeneous form")
    J = jacobian_ideal(F)
    return all(radical_member(SparsePoly.variable(F.vars, v, F.p), J) for v in F.vars)


def irrelevant_by_leading_terms(I: IdealData) -> bool:
    """Homogeneous I has radical (x_1..x_n) iff its Groebner basis has a pure power of each variable."""
    G = groebner(I)
    n = len(I.vars)
    found = [False] * n
    for g in G.gens:
        lm = g.leading_monomial()
        nz = [i for i, k in enumerate(lm) if k]
        if len(nz) == 1:
            found[nz[0]] = True
        if not nz:
            return True
    return all(found)


# ---------------------------------------------------------------------------
# named forms

_DISC = "(4a^3 + 27b^2)"

FORMS: dict[str, tuple[str, tuple[str, ...]]] = {
    "klein": ("x^3y + y^3z + z^3x", ("x", "y", "z")),
    "hk-105a2": (
        "144[(y+z)x^3-3x^2yz]-189[(z+x)y^3-3y^2xz]+45[(x+y)z^3-3z^2xy]",
        ("x", "y", "z"),
    ),
    "hk-105a2-min": (
        "x^3y - 3x^2y^2 - 3x^2yz + 3x^2z^2 + 4xy^3 + 6xy^2z - 9xyz^2 + 7xz^3 - 4y^4 + 9y^3z - 3y^2z^2 - 2yz^3 - 6z^4",
        ("x", "y", "z"),
    ),
    "fisher9-c1p": (
        "3x^2y - 9bxz^2 + 6a^2xzt + 9abxt^2 - 9ay^3 - 54by^2z"
        " + 18a^2y^2t + 9a^2yz^2 + 54abyzt - 9a^3yt^2 + 2a(a^3 + 9b^2)t^3",
        ("a", "b", "x", "y", "z", "t"),
    ),
    "fisher9-c2p": (
        "-x^3 - 6ax^2z - 9axy^2 + 108bxyz - 9a^2xz^2 - 54abxzt"
        " - 3a^3xt^2 + 108by^3 - 162aby^2t + 27abyz^2 - 18a^3yzt"
        " + 81a^2byt^2 - 6(a^3 + 9b^2)z^3 - 24a^3bt^3",
        ("a", "b", "x", "y", "z", "t"),
    ),
    "fisher9-c1m": (
        "9bx^3 + 6a^2x^2z + 9abx^2t + 6(4a^3 + 27b^2)xyt - 9abxz^2"
        " + 6(2a^3 + 9b^2)xzt + 3a^2bxt^2 + 6(4a^3 + 27b^2)y^3 + 9(4a^3 + 27b^2)y^2z"
        " + 6(4a^3 + 27b^2)yz^2 + 3(2a^3 + 15b^2)z^3 - 3a^2bz^2t"
        " + a(2a^3 + 9b^2)zt^2 + 3b(a^3 + 6b^2)t^3",
        ("a", "b", "x", "y", "z", "t"),
    ),
    "fisher9-c2m": (
        "6a^2x^3 - 27abx^2z - 18(a^3 + 9b^2)x^2t - 27(4a^3 + 27b^2)xy^2"
        " - 18(4a^3 + 27b^2)xyz - 9(2a^3 + 9b^2)xz^2 - 18a^2bxzt + 3a(2a^3 + 9b^2)xt^2"
        " + 9a(4a^3 + 27b^2)y^2t - 18b(4a^3 + 27b^2)yt^2 + 3a^2bz^3 - 3a(2a^3 + 9b^2)z^2t"
        " - 27b(a^3 + 6b^2)zt^2 - a^2(2a^3 + 15b^2)t^3",
        ("a", "b", "x", "y", "z", "t"),
    ),
}


def form(name: str, field="Q") -> SparsePoly:
    if name not in FORMS:
        raise InputError(f"unknown form {name!r}; known: {', '.join(sorted(FORMS))}")
    text, vars = FORMS[name]
    return SparsePoly.from_text(text, vars, field)


def parse_form(text: str, field="Q", vars: Sequence[str] | None = None) -> SparsePoly:
    """Registry name or polynomial text."""
    if text in FORMS:
        return form(text, field)
    return SparsePoly.from_text(text, vars, field)


def structural_checks_fisher9() -> dict:
    """Homogeneity in (x, y, z, t) and the (a, b)-degree profile of each c_i^eps."""
    out = {}
    for name in ("fisher9-c1p", "fisher9-c2p", "fisher9-c1m", "fisher9-c2m"):
        f = form(name)
        xyzt_degrees = sorted({sum(e[2:]) for e in f.terms})
        integral = all(c.denominator == 1 for c in f.terms.values())
        ab_profile = sorted({(e[0], e[1]) for e in f.terms})
        weighted = sorted({4 * e[0] + 6 * e[1] for e in f.terms})
        out[name] = {
            "terms": len(f.terms),
            "homogeneous_degree_3_in_xyzt": xyzt_degrees == [3],
            "xyzt_degrees": xyzt_degrees,
            "integral_coefficients": integral,
            "ab_exponents": [list(t) for t in ab_profile],
            "ab_weighted_degrees_4_6": weighted,
        }
    out["all_homogeneous_cubic"] = all(v["homogeneous_degree_3_in_xyzt"] for v in out.values())
    return out


# ---------------------------------------------------------------------------
# smoothness census for ternary forms over small prime fields


def monomial_exponents(n: int, d: int) -> list[Exp]:
    """Exponent vectors of degree d in n variables, grevlex-decreasing."""
    out = []

    def rec(prefix, left, k):
        if k == n - 1:
            out.append(tuple(prefix + [left]))
            return
        for a in range(left, -1, -1):
            rec(prefix + [a], left - a, k + 1)

    rec([], d, 0)
    return sorted(out, key=grevlex_key, reverse=True)


def form_from_vector(vec: Sequence[int], exps: Sequence[Exp], vars: Sequence[str], p: int) -> SparsePoly:
    return SparsePoly(vars, {e: c for e, c in zip(exps, vec) if c % p}, p)


def _substitution_matrix(exps: list[Exp], A: Sequence[Sequence[int]], p: int):
    """T with (coefficients of f(A x)) = (coefficients of f) @ T mod p."""
    import numpy as np

    n = len(exps[0])
    vars = tuple(f"v{i}" for i in range(n))
    lin = [SparsePoly(vars, {tuple(int(i == j) for i in range(n)): A[r][j] for j in range(n)}, p) for r in range(n)]
    pos = {e: i for i, e in enumerate(exps)}
    T = np.zeros((len(exps), len(exps)), dtype=np.int64)
    for a, e in enumerate(exps):
        img = SparsePoly.constant(vars, 1, p)
        for r, k in enumerate(e):
            img = img * lin[r] ** k
        for e2, c in img.terms.items():
            T[a, pos[e2]] = c
    return T


def _gl3_generators(p: int) -> list[list[list[int]]]:
    from .exactfield import primitive_root_of_unity, GF

    gens = [
        [[1, 1, 0], [0, 1, 0], [0, 0, 1]],  # transvection
        [[0, 1, 0], [0, 0, 1], [1, 0, 0]],  # 3-cycle
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]],  # transposition
    ]
    if p > 2:
        g = primitive_root_of_unity(GF(p), p - 1).code
        gens.append([[g, 0, 0], [0, 1, 0], [0, 0, 1]])
    return gens


def form_orbits(p: int, d: int, n: int = 3, chunk: int = 1 << 20):
    """Orbit labels of all degree-d forms in n variables over F_p under GL_n(F_p) and scalars.

    Forms are indexed by sum c_i p^i over the grevlex-ordered monomials. Returns
    (exps, labels) where labels[i] is the smallest index in the orbit of form i.
    """
    import numpy as np

    exps = monomial_exponents(n, d)
    M = len(exps)
    total = p**M
    if total > 50_000_000:
        raise ResourceError(f"{total} forms exceed the census cap")
    if n != 3:
        raise InputError("orbit census implemented for ternary forms")
    weights = p ** np.arange(M, dtype=np.int64)
    mats = [_substitution_matrix(exps, A, p) for A in _gl3_generators(p)]
    if p > 2:
        # scaling the form by a generator of F_p^*
        from .exactfield import primitive_root_of_unity, GF

        g = primitive_root_of_unity(GF(p), p - 1).code
        mats.append(np.eye(M, dtype=np.int64) * g)

    def digit_table(count: int, width: int):
        idx = np.arange(count, dtype=np.int64)
        return (idx[:, None] // (p ** np.arange(width, dtype=np.int64))[None, :]) % p

    # index = hi * p^k + lo; the image digit vector is (lo_part + hi_part) mod p
    k = M // 2
    lo = digit_table(p**k, k)
    hi = digit_table(p ** (M - k), M - k)
    dtype = np.int64 if total > 2**31 else np.int32
    images = []
    block = max(1, chunk // p**k)
    for T in mats:
        A_lo = (lo @ T[:k]).astype(np.int16)
        A_hi = (hi @ T[k:]).astype(np.int16)
        img = np.empty(total, dtype=dtype)
        for h0 in range(0, p ** (M - k), block):
            h1 = min(p ** (M - k), h0 + block)
            v = (A_hi[h0:h1, None, :] + A_lo[None, :, :]) % p
            img[h0 * p**k : h1 * p**k] = (v.astype(np.int64) @ weights).reshape(-1)
        images.append(img)
    labels = np.arange(total, dtype=images[0].dtype)
    while True:
        before = labels.copy()
        for img in images:
            np.minimum(labels, labels[img], out=labels)
        labels = labels[labels]
        if np.array_equal(before, labels):
            break
    return exps, labels


def _points_p2(F):
    """Normalised representatives of P^2(F) as coefficient arrays (k, #points) per coordinate."""
    import numpy as np
    from .curve import _vec_all

    X = _vec_all(F)
    q = F.q
    k = F.k
    one = np.zeros((k, 1), dtype=np.int64)
    one[0, 0] = 1
    zero = np.zeros((k, 1), dtype=np.int64)
    cols = []
    # (1, y, z)
    yy = np.repeat(X, q, axis=1)
    zz = np.tile(X, (1, q))
    cols.append((np.repeat(one, q * q, axis=1), yy, zz))
    # (0, 1, z)
    cols.append((np.repeat(zero, q, axis=1), np.repeat(one, q, axis=1), X.copy()))
    # (0, 0, 1)
    cols.append((zero.copy(), zero.copy(), one.copy()))
    return tuple(np.concatenate([c[i] for c in cols], axis=1) for i in range(3))


class _MonomialTable:
    def __init__(self, F, exps_by_degree: dict[int, list[Exp]]):
        import numpy as np
        from .curve import _vec_mul

        self.F = F
        pts = _points_p2(F)
        self.npts = pts[0].shape[1]
        powers = []
        for c in pts:
            pw = [np.zeros_like(c)]
            pw[0][0] = 1
            maxd = max(exps_by_degree)
            for _ in range(maxd):
                pw.append(_vec_mul(F, pw[-1], c))
            powers.append(pw)
        self.tables = {}
        for d, exps in exps_by_degree.items():
            tab = np.empty((len(exps), F.k, self.npts), dtype=np.int64)
            for i, e in enumerate(exps):
                v = powers[0][e[0]]
                v = _vec_mul(F, v, powers[1][e[1]])
                v = _vec_mul(F, v, powers[2][e[2]])
                tab[i] = v
            self.tables[d] = (exps, tab)

    def evaluate(self, f: SparsePoly):
        import numpy as np

        d = f.degree()
        if d < 0:
            return np.zeros((self.F.k, self.npts), dtype=np.int64)
        exps, tab = self.tables[d]
        coeffs = np.array([f.terms.get(e, 0) for e in exps], dtype=np.int64)
        return np.tensordot(coeffs, tab, axes=(0, 0)) % self.F.p


def singular_points_bruteforce(F: SparsePoly, j: int, table: _MonomialTable | None = None) -> int:
    """Number of points of P^2(F_{p^j}) where F and all partial derivatives vanish."""
    import numpy as np
    from .exactfield import GF

    if len(F.vars) != 3 or not F.p:
        raise InputError("brute-force search handles ternary forms over F_p")
    if table is None:
        d = F.degree()
        table = _MonomialTable(GF(F.p, j), {d: monomial_exponents(3, d), max(d - 1, 0): monomial_exponents(3, max(d - 1, 0))})
    mask = np.ones(table.npts, dtype=bool)
    for g in [F] + [F.derivative(i) for i in range(3)]:
        if g.is_zero():
            continue
        v = table.evaluate(g)
        mask &= ~v.any(axis=0)
    return int(mask.sum())


@dataclass
class CensusReport:
    p: int
    degree: int
    forms: int
    orbits: int
    smooth_forms: int = 0
    smooth_orbits: int = 0
    escalations: int = 0
    disagreements: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "degree": self.degree,
            "forms": self.forms,
            "orbits": self.orbits,
            "smooth_forms": self.smooth_forms,
            "smooth_orbits": self.smooth_orbits,
            "escalations": self.escalations,
            "disagreements": self.disagreements,
        }


def smoothness_census(p: int, d: int, max_j: int | None = None) -> CensusReport:
    """Compare projective_smooth with a brute-force singular-point search on every orbit.

    A form judged smooth must have no singular point over F_p or F_{p^2}. A form judged
    singular must show a singular point over some F_{p^j}; the search escalates
    j = 1, 2, ... up to max_j (default d(d-1)/2, the most points a reduced plane curve
    of degree d can have in its singular locus, hence a bound on the degree of a
    singular point).
    """
    import numpy as np
    from .exactfield import GF

    if max_j is None:
        max_j = max(2, d * (d - 1) // 2)
    exps, labels = form_orbits(p, d)
    reps, sizes = np.unique(labels, return_counts=True)
    report = CensusReport(p, d, int(labels.size) - 1, int(len(reps)) - 1)
    vars = ("x", "y", "z")
    weights = p ** np.arange(len(exps), dtype=np.int64)
    tables: dict[int, _MonomialTable] = {}

    def table(j):
        if j not in tables:
            tables[j] = _MonomialTable(GF(p, j), {d: exps, d - 1: monomial_exponents(3, d - 1)})
        return tables[j]

    for rep, size in zip(reps.tolist(), sizes.tolist()):
        if rep == 0:
            continue
        vec = [(rep // int(w)) % p for w in weights]
        f = form_from_vector(vec, exps, vars, p)
        smooth = projective_smooth(f)
        found = 0
        for j in (1, 2):
            found = singular_points_bruteforce(f, j, table(j))
            if found:
                break
        if smooth:
            report.smooth_orbits += 1
            report.smooth_forms += size
            if found:
                report.disagreements.append({"form": f.to_text(), "groebner": "smooth", "bruteforce_j": j})
            continue
        j = 2
        while not found and j < max_j:
            j += 1
            report.escalations += 1
            found = singular_points_bruteforce(f, j, table(j))
        if not found:
            report.disagreements.append({"form": f.to_text(), "groebner": "singular", "bruteforce_j": None})
    return report
