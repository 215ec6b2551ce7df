"""Truncated q-expansions and the operator calculus on them.

Truncation bookkeeping is the point: every operator returns the largest
truncation it can prove correct (U and T shrink by a factor q, V and
depletion keep the input truncation), and consumers must compare
expansions on the common truncation.  The interleaved zeros written by
V_q are exact values, not unknowns.

Coefficients live in one of three rings, tagged on the expansion:
"int" (exact integers or Fractions), "cyc" (CycNumber), or "padic"
(PAdicInt of a common precision).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .characters import DirichletCharacter
from .cyclotomic import CycNumber, cyc_embed_padic
from .errors import BadMode, BadPrime, OddCharacter, SchemaError
from .padic import PAdicInt, from_rational, hensel_unit_root, inv

RING_ORDER = {"int": 0, "cyc": 1, "padic": 1}


@dataclass(frozen=True)
class QExpansion:
    """Fourier expansion a(0..trunc) with weight/level/character metadata."""

    weight: int | Fraction
    level: int
    character: DirichletCharacter
    coeffs: tuple
    ring: str = "int"

    def __post_init__(self):
        if self.ring not in RING_ORDER:
            raise ValueError(f"unknown coefficient ring {self.ring!r}")
        if not self.coeffs:
            raise ValueError("an expansion needs at least a(0)")

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int):
        if n < 0 or n > self.trunc:
            raise IndexError(f"a({n}) is beyond the truncation {self.trunc}")
        return self.coeffs[n]

    def is_zero(self) -> bool:
        return all(_coeff_is_zero(c) for c in self.coeffs)

    def truncate(self, new_trunc: int) -> "QExpansion":
        if new_trunc > self.trunc:
            raise ValueError("cannot extend a truncation")
        return dataclasses.replace(self, coeffs=self.coeffs[:new_trunc + 1])

    def scale(self, c) -> "QExpansion":
        ring = "cyc" if isinstance(c, CycNumber) and self.ring == "int" \
            else self.ring
        return dataclasses.replace(
            self, coeffs=tuple(c * a for a in self.coeffs), ring=ring)

    def __add__(self, other: "QExpansion") -> "QExpansion":
        return _combine(self, other, lambda a, b: a + b)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return _combine(self, other, lambda a, b: a - b)

    # -- serialization ----------------------------------------------------

    def to_json(self, label: str | None = None) -> dict:
        rec = {
            "weight": _weight_str(self.weight),
            "level": self.level,
            "character": self.character.to_json(),
            "coeffs": [_coeff_str(c) for c in self.coeffs],
        }
        if label is not None:
            rec["label"] = label
        if self.ring == "padic":
            rec["p"] = self.coeffs[0].p
            rec["precision"] = min(c.prec for c in self.coeffs)
        if self.ring == "cyc":
            rec["coeffs"] = [c.to_json() for c in self.coeffs]
            rec["ring"] = "cyc"
        return rec

    @staticmethod
    def from_json(rec: dict) -> "QExpansion":
        try:
            weight = _parse_weight(rec["weight"])
            level = int(rec["level"])
            character = DirichletCharacter.from_json(rec["character"])
            raw = rec["coeffs"]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad form record: {exc}") from exc
        if rec.get("ring") == "cyc":
            coeffs = tuple(CycNumber.from_json(c) for c in raw)
            ring = "cyc"
        elif "p" in rec:
            p, prec = int(rec["p"]), int(rec["precision"])
            coeffs = tuple(PAdicInt(p, prec, int(c)) for c in raw)
            ring = "padic"
        else:
            coeffs = tuple(_parse_exact(c) for c in raw)
            ring = "int"
        return QExpansion(weight, level, character, coeffs, ring)


def _weight_str(w):
    return str(w)


def _parse_weight(s):
    f = Fraction(str(s))
    return int(f) if f.denominator == 1 else f


def _coeff_str(c) -> str:
    if isinstance(c, PAdicInt):
        return str(c.residue)
    return str(c)


def _parse_exact(s):
    f = Fraction(str(s))
    return int(f) if f.denominator == 1 else f


def _coeff_is_zero(c) -> bool:
    if isinstance(c, PAdicInt):
        return c.is_zero()
    if isinstance(c, CycNumber):
        return c.is_zero()
    return c == 0


def _zero_like(c):
    if isinstance(c, PAdicInt):
        return PAdicInt(c.p, c.prec, 0)
    if isinstance(c, CycNumber):
        return CycNumber.zero(c.order)
    return 0


def _combine(f: QExpansion, g: QExpansion, op) -> QExpansion:
    if f.weight != g.weight:
        raise ValueError(f"weights {f.weight} and {g.weight} differ")
    d = min(f.trunc, g.trunc)
    ring = f.ring if RING_ORDER[f.ring] >= RING_ORDER[g.ring] else g.ring
    coeffs = tuple(op(a, b) for a, b in zip(f.coeffs[:d + 1], g.coeffs[:d + 1]))
    return QExpansion(f.weight, lcm(f.level, g.level), f.character, coeffs, ring)


def _eps_scalar(f: QExpansion, q: int):
    """Value of the nebentype at q, coerced into the coefficient ring."""
    v = f.character(q)
    if f.ring == "cyc":
        return v
    if f.ring == "padic":
        c0 = f.coeffs[0]
        return cyc_embed_padic(v, c0.p, c0.prec)
    if v.is_rational():
        r = v.as_rational()
        return int(r) if r.denominator == 1 else r
    return v  # forces the result into the cyc ring downstream


# -- Hecke operators ---------------------------------------------------------


def hecke_T(f: QExpansion, q: int) -> QExpansion:
    """T_q at a good prime: b(n) = a(qn) + eps(q) q^(k-1) a(n/q)."""
    if f.level % q == 0:
        raise BadPrime(f"{q} divides the level {f.level}; use hecke_U")
    if not isinstance(f.weight, int):
        raise BadPrime(f"T_{q} needs an integer weight, got {f.weight}")
    eps = _eps_scalar(f, q)
    mult = eps * q**(f.weight - 1)
    d = f.trunc // q
    coeffs = tuple(
        f.coeffs[q * n] + (mult * f.coeffs[n // q] if n % q == 0
                           else _zero_like(f.coeffs[0]))
        for n in range(d + 1))
    ring = "cyc" if isinstance(mult, CycNumber) and f.ring == "int" else f.ring
    return dataclasses.replace(f, coeffs=coeffs, ring=ring)


def hecke_U(f: QExpansion, q: int) -> QExpansion:
    """U_q: b(n) = a(qn); truncation shrinks to floor(D/q)."""
    d = f.trunc // q
    coeffs = tuple(f.coeffs[q * n] for n in range(d + 1))
    level = f.level if f.level % q == 0 else f.level * q
    return dataclasses.replace(f, coeffs=coeffs, level=level)


def hecke_V(f: QExpansion, q: int) -> QExpansion:
    """V_q: b(n) = a(n/q), zero off multiples of q.

    Correct out to q*D, but the claim is capped at the input truncation
    to keep coefficient arrays from growing; the zeros are exact.
    """
    zero = _zero_like(f.coeffs[0])
    coeffs = tuple(f.coeffs[n // q] if n % q == 0 else zero
                   for n in range(f.trunc + 1))
    return dataclasses.replace(f, coeffs=coeffs, level=f.level * q)


def deplete(f: QExpansion, s0) -> QExpansion:
    """Drop every a(n) with n divisible by a prime in s0.

    Coefficientwise this is prod over q in s0 of (1 - V_q U_q), but
    computed directly it keeps the full truncation.
    """
    s0 = sorted(set(s0))
    if not s0:
        return f
    modulus = 1
    for q in s0:
        modulus *= q
    zero = _zero_like(f.coeffs[0])
    coeffs = tuple(a if gcd(n, modulus) == 1 else zero
                   for n, a in enumerate(f.coeffs))
    level = f.level
    for q in s0:
        level *= q if level % q == 0 else q * q
    return dataclasses.replace(f, coeffs=coeffs, level=level)


def tau(h: QExpansion, q: int, mode: str) -> QExpansion:
    """Level-raising map with U_q = 0 on the image.

    ordinary   (q | level):  h - V_q(U_q h)
    unramified (q ∤ level):  h - V_q(T_q h) + eps(q) q^(k-1) V_q(V_q h)
    """
    if mode == "ordinary":
        if h.level % q != 0:
            raise BadMode(f"ordinary tau needs {q} | level {h.level}")
        out = h - hecke_V(hecke_U(h, q), q)
        return dataclasses.replace(out, level=h.level * q)
    if mode == "unramified":
        if h.level % q == 0:
            raise BadMode(f"unramified tau needs {q} coprime to level {h.level}")
        eps = _eps_scalar(h, q)
        out = h - hecke_V(hecke_T(h, q), q)
        out = out + hecke_V(hecke_V(h, q), q).scale(eps * q**(h.weight - 1))
        return dataclasses.replace(out, level=h.level * q * q)
    raise BadMode(f"unknown mode {mode!r}")


def p_stabilize(g0: QExpansion, a_p, eps_p, p: int, prec: int) -> QExpansion:
    """Pass from a form of level prime to p to its unit-root stabilization.

    Computes the unit root alpha of X^2 - a_p X + eps_p p^(k-1), the
    complementary root beta, and returns g0 - beta V_p(g0) over Z_p with
    coefficients mod p^prec.  U_p acts on the result by alpha.
    """
    if g0.level % p == 0:
        raise BadPrime(f"{p} already divides the level {g0.level}")
    if not isinstance(g0.weight, int):
        raise BadPrime(f"stabilization needs an integer weight, got {g0.weight}")
    a_p = _to_padic(a_p, p, prec)
    eps_p = _to_padic(eps_p, p, prec)
    c = eps_p * p**(g0.weight - 1)
    alpha = hensel_unit_root(a_p, c)
    beta = c * inv(alpha)
    coeffs = tuple(_to_padic(a, p, prec) for a in g0.coeffs)
    lifted = dataclasses.replace(g0, coeffs=coeffs, ring="padic")
    out = lifted - hecke_V(lifted, p).scale(beta)
    return dataclasses.replace(out, level=g0.level * p)


def _to_padic(x, p: int, prec: int) -> PAdicInt:
    if isinstance(x, PAdicInt):
        if x.p != p:
            raise ValueError(f"mixed primes {x.p} and {p}")
        return x.reduce(min(x.prec, prec))
    if isinstance(x, CycNumber):
        return cyc_embed_padic(x, p, prec)
    return from_rational(x, p, prec)


def theta(chi: DirichletCharacter, trunc: int) -> QExpansion:
    """Square-indexed theta series of an even character.

    a(j^2) = chi(j) for j >= 1, a(0) = 1/2 for the trivial character and
    0 otherwise; weight 1/2 is metadata only.
    """
    if not chi.is_even():
        raise OddCharacter(f"{chi!r} is odd")
    n = chi.order
    coeffs = [CycNumber.zero(n) for _ in range(trunc + 1)]
    if chi.modulus == 1:
        coeffs[0] = CycNumber.from_rational(Fraction(1, 2))
    j = 1
    while j * j <= trunc:
        coeffs[j * j] = chi(j)
        j += 1
    return QExpansion(Fraction(1, 2), 4 * chi.conductor**2, chi,
                      tuple(coeffs), "cyc")


# -- eigenform synthesis ------------------------------------------------------


def expansion_from_eigenvalues(weight: int, level: int,
                               character: DirichletCharacter,
                               ap: dict[int, object], trunc: int,
                               ring: str = "int") -> QExpansion:
    """Extend prime eigenvalues to a normalized eigen-expansion.

    Uses a(1) = 1, multiplicativity, and the prime-power recursion
    a(q^(j+1)) = a(q) a(q^j) - eps(q) q^(k-1) a(q^(j-1)); the nebentype
    vanishes at level primes, which turns the recursion into a(q)^j.
    """
    coeffs = [0] * (trunc + 1)
    if trunc >= 1:
        coeffs[1] = 1
    eps_cache = {}
    for n in range(2, trunc + 1):
        q = _least_prime_factor(n)
        e = 1
        m = n // q
        while m % q == 0:
            m //= q
            e += 1
        if m > 1:                      # composite with coprime parts
            coeffs[n] = coeffs[q**e] * coeffs[m]
            continue
        if q not in ap:
            raise SchemaError(f"eigenvalue a({q}) missing but {q} <= {trunc}")
        if e == 1:
            coeffs[n] = ap[q]
            continue
        if q not in eps_cache:
            v = character(q)
            eps_cache[q] = (int(v.as_rational()) if v.is_rational()
                            and v.as_rational().denominator == 1 else v)
        eps = eps_cache[q]
        coeffs[n] = ap[q] * coeffs[q**(e - 1)] \
            - eps * q**(weight - 1) * coeffs[q**(e - 2)]
    if ring == "int" and any(isinstance(c, CycNumber) for c in coeffs):
        ring = "cyc"
    return QExpansion(weight, level, character, tuple(coeffs), ring)


def _least_prime_factor(n: int) -> int:
    q = 2
    while q * q <= n:
        if n % q == 0:
            return q
        q += 1
    return n


def coeffs_agree(f: QExpansion, g: QExpansion, upto: int | None = None) -> bool:
    """Coefficientwise equality on the common truncation."""
    d = min(f.trunc, g.trunc)
    if upto is not None:
        d = min(d, upto)
    return all(_coeff_is_zero(a - b)
               for a, b in zip(f.coeffs[:d + 1], g.coeffs[:d + 1]))
