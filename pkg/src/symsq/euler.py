"""Symmetric-square Euler factors and their Iwasawa-algebra lifts.

The degree-3 factor at an unramified prime is assembled from the
symmetric functions of the two Satake parameters, so no square roots
are ever extracted: with a = alpha + beta and b = alpha*beta,

    e1 = a^2 - b,   e2 = b*(a^2 - b),   e3 = b^3

are the elementary symmetric functions of {alpha^2, alpha*beta, beta^2}.

Lifting to Lambda substitutes X -> psi_t(q) q^(-1) (1+T)^e(q).  The
q^(-1) normalization is this artifact's convention: it is the unique
monomial normalization for which specialization at the cyclotomic point
of weight n evaluates the factor at (psi_{t+n-1}, q^(-n)) exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .characters import DirichletCharacter
from .cyclotomic import CycNumber, cyc_embed_padic
from .errors import DivergenceGuard, InvalidSatake, NotIntegral, NotOrdinary
from .iwasawa import (IwasawaElement, factorial_valuation, frobenius_exponent,
                      invariants, one_plus_T_pow)
from .padic import PAdicInt, from_rational, inv, is_prime, teichmuller

RAMIFICATION_TYPES = ("unramified", "ordinary", "depleted")


@dataclass(frozen=True)
class SatakeData:
    """Local data at q: ramification type, eigenvalue, nebentype value."""

    q: int
    ramification_type: str
    a_q: object            # exact: int, Fraction, or CycNumber
    eps_q: object           # character value at q, same flavour
    k: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise InvalidSatake(f"q = {self.q} is not prime")
        if self.ramification_type not in RAMIFICATION_TYPES:
            raise InvalidSatake(f"unknown type {self.ramification_type!r}")
        if self.k < 2:
            raise InvalidSatake(f"weight must be >= 2, got {self.k}")
        if self.ramification_type == "depleted" and not _is_zero(self.a_q):
            raise InvalidSatake("depleted primes carry zero parameters")
        if self.ramification_type == "ordinary" and _is_zero(self.a_q):
            raise InvalidSatake("ordinary primes carry one nonzero parameter")
        if self.ramification_type == "unramified" and _is_zero(self.eps_q):
            raise InvalidSatake(
                "unramified primes need eps(q) != 0 so that alpha*beta != 0")

    def to_json(self) -> dict:
        return {"q": self.q, "type": self.ramification_type,
                "aq": str(self.a_q) if not isinstance(self.a_q, CycNumber)
                else self.a_q.to_json(),
                "eps": self.eps_q.to_json() if isinstance(self.eps_q, CycNumber)
                else str(self.eps_q),
                "k": self.k}

    @staticmethod
    def from_json(rec: dict) -> "SatakeData":
        def parse(v):
            if isinstance(v, dict):
                return CycNumber.from_json(v)
            f = Fraction(str(v))
            return int(f) if f.denominator == 1 else f
        return SatakeData(int(rec["q"]), rec["type"], parse(rec["aq"]),
                          parse(rec["eps"]), int(rec["k"]))


def _is_zero(x) -> bool:
    if isinstance(x, CycNumber):
        return x.is_zero()
    return x == 0


@dataclass(frozen=True)
class EulerFactor:
    """Polynomial 1 + c1 X + ... in a cyclotomic ring, constant term 1."""

    q: int
    coeffs: tuple
    twist: tuple | None = None   # optional (psi, t) bookkeeping

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise InvalidSatake("Euler factor must have constant term 1")
        if len(self.coeffs) > 4:
            raise InvalidSatake("Euler factor degree exceeds 3")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def symsq_factor(s: SatakeData, chi_q=1) -> EulerFactor:
    """Symmetric-square Euler polynomial at q, twisted by the value chi_q.

    Pass chi_q = 1 to get the untwisted polynomial expected by the
    Lambda-lift, which applies its own tame twist.
    """
    if _is_zero(chi_q) or s.ramification_type == "depleted":
        return EulerFactor(s.q, (1,))
    c = chi_q
    if s.ramification_type == "ordinary":
        return EulerFactor(s.q, (1, -(c * s.a_q * s.a_q)))
    b = s.eps_q * s.q**(s.k - 1)
    e1 = s.a_q * s.a_q - b
    return EulerFactor(s.q, (1, -(c * e1), c * c * b * e1,
                             -(c * c * c * b * b * b)))


def symsq_dirichlet_coeff_check(s: SatakeData,
                                character: DirichletCharacter | None = None
                                ) -> bool:
    """Cross-check: the degree-1 coefficient must equal a(q^2).

    When a nebentype character is supplied, a(q^2) comes from the
    independent Hecke recursion in qexp; otherwise from the recursion
    formula a(q)^2 - eps(q) q^(k-1) evaluated in place.
    """
    if s.ramification_type != "unramified":
        raise InvalidSatake("the coefficient check applies to unramified q")
    e1 = -symsq_factor(s, 1).coeffs[1]
    if character is not None:
        from .qexp import expansion_from_eigenvalues
        ap = {ell: 0 for ell in range(2, s.q**2 + 1) if is_prime(ell)}
        ap[s.q] = s.a_q
        f = expansion_from_eigenvalues(s.k, 1, character, ap, s.q**2)
        a_q2 = f.coefficient(s.q * s.q)
    else:
        a_q2 = s.a_q * s.a_q - s.eps_q * s.q**(s.k - 1)
    return _is_zero(e1 - a_q2)


def _as_cyc(x) -> CycNumber:
    if isinstance(x, CycNumber):
        return x
    return CycNumber.from_rational(Fraction(x))


def substitute_frobenius(factor: EulerFactor, scalar: PAdicInt,
                         exponent: PAdicInt, trunc: int, prec: int
                         ) -> IwasawaElement:
    """Evaluate the factor at X = scalar * (1+T)^exponent in Lambda."""
    p = scalar.p
    coeffs_p = [cyc_embed_padic(_as_cyc(c), p, prec) for c in factor.coeffs]
    base = one_plus_T_pow(exponent, trunc, prec)
    out = IwasawaElement.one(p, prec, trunc) * coeffs_p[0]
    power = IwasawaElement.one(p, prec, trunc)
    scale = PAdicInt(p, prec, 1)
    for c in coeffs_p[1:]:
        power = power * base
        scale = scale * scalar
        out = out + power * (c * scale)
    return out


def euler_to_lambda(factor: EulerFactor, psi: DirichletCharacter, t: int,
                    p: int, prec: int, trunc: int,
                    primitive_root: int | None = None) -> IwasawaElement:
    """Lambda-lift of an (untwisted) Euler factor under the tame twist
    psi * eta_1^t, via X -> psi_t(q) q^(-1) (1+T)^e(q)."""
    q = factor.q
    if q == p:
        raise ValueError("the Euler factor at p itself has no wild lift here")
    if t % 2 != 0:
        raise ValueError(f"the tame exponent t must be even, got {t}")
    psi_q = psi(q)
    if psi_q.is_zero():
        return IwasawaElement.one(p, prec, trunc)
    scalar = cyc_embed_padic(psi_q, p, prec, primitive_root) \
        * teichmuller(q, p, prec)**t * inv(PAdicInt(p, prec, q))
    exponent = frobenius_exponent(q, p, prec + factorial_valuation(trunc, p))
    return substitute_frobenius(factor, scalar, exponent, trunc, prec)


def sigma_q(factor: EulerFactor, psi: DirichletCharacter, t: int,
            p: int, prec: int, trunc: int,
            primitive_root: int | None = None) -> int:
    """lambda-invariant of the Lambda-lift; warns if mu > 0 shows up.

    A positive mu at working precision contradicts the constant-term-1
    shape and signals precision exhaustion, not a real invariant.
    """
    lifted = euler_to_lambda(factor, psi, t, p, prec, trunc, primitive_root)
    mu, lam = invariants(lifted)
    if mu > 0:
        warnings.warn(
            f"mu = {mu} > 0 for the lift at q = {factor.q}; treat the "
            f"sigma value as unreliable at precision {prec}",
            RuntimeWarning, stacklevel=2)
    return lam


def ep_factor(n: int, psi: DirichletCharacter, alpha_p: PAdicInt,
              beta_p: PAdicInt | None, r: int, ramified: bool,
              k: int, p: int, prec: int,
              primitive_root: int | None = None) -> PAdicInt:
    """Interpolation factor at p.

    Ramified twist: (p^(n-1) psi(p)^(-1) alpha_p^(-2))^r, with r the
    wild conductor exponent.  Unramified: the three-term product; any
    surviving negative power of p raises NotIntegral.
    """
    if not isinstance(alpha_p, PAdicInt):
        alpha_p = from_rational(alpha_p, p, prec)
    if alpha_p.val() != 0:
        raise NotOrdinary(f"alpha_p = {alpha_p!r} is not a unit")
    psi_p = psi(p)
    if psi_p.is_zero():
        raise ValueError("psi must be unramified at p")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    w = cyc_embed_padic(psi_p, p, prec, primitive_root)
    a2inv = inv(alpha_p) ** 2
    if ramified:
        if r < 1:
            raise ValueError("ramified case needs conductor exponent r >= 1")
        base = PAdicInt(p, prec, p)**(n - 1) * inv(w) * a2inv
        return base**r
    if beta_p is None:
        raise ValueError("unramified case needs beta_p")
    if not isinstance(beta_p, PAdicInt):
        beta_p = from_rational(beta_p, p, prec)
    term1 = PAdicInt(p, prec, 1) - PAdicInt(p, prec, p)**(n - 1) * inv(w) * a2inv
    if k - 1 - n < 0:
        raise NotIntegral(f"p^{k - 1 - n} is not integral")
    term2 = PAdicInt(p, prec, 1) - w * PAdicInt(p, prec, p)**(k - 1 - n)
    try:
        b2 = (beta_p * beta_p).exact_div_p(n)
    except ValueError as exc:
        raise NotIntegral(f"beta_p^2 p^(-{n}) is not integral") from exc
    term3 = PAdicInt(p, b2.prec, 1) - w.reduce(b2.prec) * b2
    return term1 * term2 * term3


def assemble_imprimitive(lfun: IwasawaElement,
                         factors: list[IwasawaElement]) -> IwasawaElement:
    """Multiply local factors into the primitive element.

    Each factor has mu = 0, so mu is preserved and lambda grows by the
    sum of the sigma values.
    """
    out = lfun
    for f in factors:
        out = out * f
    return out


# -- complex-side evaluation -------------------------------------------------


def _to_complex(x) -> complex:
    if isinstance(x, CycNumber):
        return x.to_complex()
    return complex(Fraction(x))


def evaluate_factor_complex(factor: EulerFactor, chi_value, x: complex
                            ) -> complex:
    cx = _to_complex(chi_value) * x
    acc = 0j
    for c in reversed(factor.coeffs):
        acc = acc * cx + _to_complex(c)
    return acc


def evaluate_factor_padic(factor: EulerFactor, chi_value, x: PAdicInt,
                          primitive_root: int | None = None) -> PAdicInt:
    """Exact evaluation of the twisted factor at a p-adic point."""
    p, prec = x.p, x.prec
    cx = cyc_embed_padic(_as_cyc(chi_value), p, prec, primitive_root) * x
    acc = PAdicInt(p, prec, 0)
    for c in reversed(factor.coeffs):
        acc = acc * cx + cyc_embed_padic(_as_cyc(c), p, prec, primitive_root)
    return acc


def df_complex(satake: list[SatakeData], chi: DirichletCharacter,
               s: float, qmax: int) -> complex:
    """Truncated naive Euler product at real s, in double precision.

    Factors are merged in ascending q for reproducibility; leaving the
    convergence region |1 - P_q| < 1 raises DivergenceGuard.
    """
    ks = {d.k for d in satake}
    if ks and s <= max(ks):
        raise DivergenceGuard(f"s = {s} is not above the weight {max(ks)}")
    product = 1.0 + 0j
    for data in sorted(satake, key=lambda d: d.q):
        if data.q > qmax:
            continue
        factor = symsq_factor(data, 1)
        value = evaluate_factor_complex(factor, chi(data.q), data.q**(-s))
        if abs(1 - value) >= 1:
            raise DivergenceGuard(
                f"factor at q = {data.q} left the convergence region")
        product /= value
    return product


def df_convergence_report(satake: list[SatakeData], chi: DirichletCharacter,
                          s: float, qmax: int) -> dict:
    """Value at qmax, at 2*qmax, and the relative change between them."""
    v1 = df_complex(satake, chi, s, qmax)
    v2 = df_complex(satake, chi, s, 2 * qmax)
    rel = abs(v2 - v1) / abs(v2) if v2 != 0 else float("inf")
    return {"qmax": qmax, "value": v1, "value_double": v2, "rel_change": rel}
