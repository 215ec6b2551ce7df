"""Lambda = Z_p[[T]] as truncated power series, with Weierstrass data.

An IwasawaElement stores coefficient residues modulo p^prec up to
degree trunc.  Weierstrass preparation reads mu and lambda off the
coefficient valuations and produces the distinguished polynomial and
unit by Hensel-lifting the factorization T^lambda * (unit) from mod p,
so the reconstruction p^mu * distinguished * unit == input holds
exactly modulo (p^prec, T^(trunc+1)) by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .characters import DirichletCharacter
from .errors import (InsufficientPrecision, PrecisionLoss, SchemaError,
                     TruncationTooShort)
from .padic import PAdicInt, int_valuation, inv, padic_log1p, teichmuller


@dataclass(frozen=True)
class IwasawaElement:
    """Truncated power series over Z_p with uniform coefficient precision."""

    p: int
    prec: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.prec < 1:
            raise ValueError("precision must be positive")
        m = self.p**self.prec
        object.__setattr__(self, "coeffs", tuple(c % m for c in self.coeffs))

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    def coefficient(self, i: int) -> PAdicInt:
        return PAdicInt(self.p, self.prec, self.coeffs[i])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def reduce(self, prec: int) -> "IwasawaElement":
        if prec > self.prec:
            raise PrecisionLoss(f"cannot raise precision {self.prec} -> {prec}")
        return IwasawaElement(self.p, prec, self.coeffs)

    def truncate(self, trunc: int) -> "IwasawaElement":
        if trunc > self.trunc:
            raise PrecisionLoss(f"cannot extend truncation {self.trunc}")
        return IwasawaElement(self.p, self.prec, self.coeffs[:trunc + 1])

    def _check(self, other: "IwasawaElement"):
        if self.p != other.p:
            raise ValueError(f"mixed primes {self.p} and {other.p}")

    def __add__(self, other: "IwasawaElement") -> "IwasawaElement":
        self._check(other)
        n = min(self.prec, other.prec)
        d = min(self.trunc, other.trunc)
        return IwasawaElement(self.p, n, tuple(
            a + b for a, b in zip(self.coeffs[:d + 1], other.coeffs[:d + 1])))

    def __neg__(self) -> "IwasawaElement":
        return IwasawaElement(self.p, self.prec, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IwasawaElement") -> "IwasawaElement":
        return self + (-other)

    def __mul__(self, other) -> "IwasawaElement":
        if isinstance(other, int):
            return IwasawaElement(self.p, self.prec,
                                  tuple(other * c for c in self.coeffs))
        if isinstance(other, PAdicInt):
            if other.p != self.p:
                raise ValueError("mixed primes")
            n = min(self.prec, other.prec)
            return IwasawaElement(self.p, n, tuple(
                other.residue * c for c in self.coeffs))
        self._check(other)
        n = min(self.prec, other.prec)
        d = min(self.trunc, other.trunc)
        m = self.p**n
        out = _poly_mul_trunc(self.coeffs, other.coeffs, m, d)
        return IwasawaElement(self.p, n, tuple(out))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        return (self.p, self.prec, self.coeffs) == (
            other.p, other.prec, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.prec, self.coeffs))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.trunc >= 6 else ""
        return f"Lambda[{self.p}^{self.prec}]({shown}{tail}; D={self.trunc})"

    # -- constructors / serialization -----------------------------------

    @staticmethod
    def zero(p: int, prec: int, trunc: int) -> "IwasawaElement":
        return IwasawaElement(p, prec, (0,) * (trunc + 1))

    @staticmethod
    def one(p: int, prec: int, trunc: int) -> "IwasawaElement":
        return IwasawaElement(p, prec, (1,) + (0,) * trunc)

    @staticmethod
    def from_coeffs(p: int, prec: int, coeffs) -> "IwasawaElement":
        return IwasawaElement(p, prec, tuple(coeffs))

    def to_json(self) -> dict:
        return {"p": self.p, "precision": self.prec,
                "coeffs": [str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(rec: dict) -> "IwasawaElement":
        try:
            return IwasawaElement(int(rec["p"]), int(rec["precision"]),
                                  tuple(int(c) for c in rec["coeffs"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad Lambda-element record: {exc}") from exc


def _poly_mul_trunc(a, b, mod: int, d: int) -> list[int]:
    out = [0] * (d + 1)
    for i, x in enumerate(a[:d + 1]):
        if x == 0:
            continue
        for j in range(min(d - i, len(b) - 1) + 1):
            out[i + j] += x * b[j]
    return [c % mod for c in out]


@dataclass(frozen=True)
class WeierstrassData:
    """p^mu * distinguished * unit reconstructs the prepared element.

    The distinguished polynomial and the unit carry precision
    prec = (input precision) - mu.
    """

    p: int
    prec: int
    mu: int
    lam: int
    distinguished: tuple[int, ...]
    unit: IwasawaElement


def invariants(f: IwasawaElement) -> tuple[int, int]:
    """(mu, lambda) read from coefficient valuations."""
    mu, lam = None, None
    for i, c in enumerate(f.coeffs):
        if c == 0:
            continue
        v = int_valuation(c, f.p)
        if mu is None or v < mu:
            mu, lam = v, i
            if v == 0:
                break
    if mu is None:
        raise InsufficientPrecision(
            f"all coefficients vanish mod {f.p}^{f.prec}")
    return mu, lam


def weierstrass_prep(f: IwasawaElement, guard: int = 4) -> WeierstrassData:
    """Weierstrass preparation at working precision.

    Refuses when lambda is within `guard` of the truncation, where a
    longer distinguished polynomial would be indistinguishable.
    """
    p, d = f.p, f.trunc
    mu, lam = invariants(f)
    if lam > d - guard:
        raise TruncationTooShort(
            f"lambda = {lam} is within {guard} of the truncation {d}")
    nprec = f.prec - mu
    if nprec < 1:
        raise InsufficientPrecision(
            f"mu = {mu} consumes the whole precision {f.prec}")
    reduced = [c // p**mu for c in f.coeffs]

    # Hensel-lift the mod-p factorization T^lam * ubar of the reduced
    # series to mod p^nprec, keeping deg(unit) <= d - lam.
    ubar = [c % p for c in reduced[lam:]]
    ubar_inv = _series_inverse_mod_p(ubar, p, d)
    pcoeffs = [0] * lam + [1]
    ucoeffs = ubar + [0] * lam
    for m in range(1, nprec):
        pm, pm1 = p**m, p**(m + 1)
        prod = _poly_mul_trunc(pcoeffs, ucoeffs, pm1, d)
        err = [((a - b) % pm1) // pm for a, b in zip(reduced, prod)]
        h = _poly_mul_trunc(err, ubar_inv, p, d)
        delta_p = h[:lam]
        delta_u = _poly_mul_trunc(h[lam:], ubar, p, d - lam)
        for i, c in enumerate(delta_p):
            pcoeffs[i] += pm * c
        for i, c in enumerate(delta_u):
            ucoeffs[i] += pm * c
    modulus = p**nprec
    pcoeffs = [c % modulus for c in pcoeffs]
    unit = IwasawaElement(p, nprec, tuple(c % modulus for c in ucoeffs))
    return WeierstrassData(p, nprec, mu, lam, tuple(pcoeffs), unit)


def _series_inverse_mod_p(u, p: int, d: int) -> list[int]:
    u = list(u) + [0] * (d + 1 - len(u))
    out = [0] * (d + 1)
    out[0] = pow(u[0], -1, p)
    for n in range(1, d + 1):
        s = sum(u[j] * out[n - j] for j in range(1, n + 1))
        out[n] = -out[0] * s % p
    return out


def reconstruct(w: WeierstrassData, trunc: int) -> IwasawaElement:
    """p^mu * distinguished * unit, for checking against the input."""
    dist = IwasawaElement(w.p, w.prec,
                          tuple(w.distinguished) + (0,) * (trunc - w.lam))
    prod = dist * w.unit
    coeffs = tuple(c * w.p**w.mu for c in prod.coeffs)
    return IwasawaElement(w.p, w.prec + w.mu, coeffs)


# -- group-like elements and specialization ------------------------------


def factorial_valuation(d: int, p: int) -> int:
    """v_p(d!) by Legendre's formula."""
    total, q = 0, p
    while q <= d:
        total += d // q
        q *= p
    return total


def one_plus_T_pow(e: PAdicInt, trunc: int, prec: int) -> IwasawaElement:
    """(1+T)^e as a binomial series, coefficients correct mod p^prec.

    Dividing the falling factorial by k! costs v_p(k!) digits, so the
    exponent must arrive with that much guard precision.
    """
    p = e.p
    need = prec + factorial_valuation(trunc, p)
    if e.prec < need:
        raise PrecisionLoss(
            f"exponent precision {e.prec} < {need} needed for D={trunc}")
    big = p**e.prec
    out_mod = p**prec
    coeffs = [1]
    num = 1          # falling factorial e(e-1)...(e-k+1) mod big
    fact_val = 0     # v_p(k!)
    fact_unit = 1    # (k!/p^fact_val) mod out_mod
    for k in range(1, trunc + 1):
        num = num * ((e.residue - k + 1) % big) % big
        fact_val += int_valuation(k, p)
        fact_unit = fact_unit * (k // p**int_valuation(k, p)) % out_mod
        c = (num // p**fact_val) if num % p**fact_val == 0 else None
        if c is None:
            raise PrecisionLoss(f"falling factorial not divisible by p^{fact_val}")
        coeffs.append(c * pow(fact_unit, -1, out_mod) % out_mod)
    return IwasawaElement(p, prec, tuple(coeffs))


def frobenius_exponent(q: int, p: int, prec: int) -> PAdicInt:
    """e(q) with (1+p)^e(q) = q_w, the wild projection of q.

    q_w = q / teich(q); both logs have valuation >= 1, and the quotient
    log(q_w)/log(1+p) lands back in Z_p at the requested precision.
    """
    if q % p == 0:
        raise ValueError(f"q = {q} must differ from p = {p}")
    w = prec + 1
    tq = teichmuller(q, p, w)
    qw = PAdicInt(p, w, q) * inv(tq)
    log_qw = padic_log1p(qw - 1)
    log_gamma = padic_log1p(PAdicInt(p, w, p))
    return log_qw.exact_div_p(1) * inv(log_gamma.exact_div_p(1))


def specialize(f: IwasawaElement, n: int,
               eta_w: DirichletCharacter | None = None) -> PAdicInt:
    """Evaluate at the weight-n cyclotomic point T = (1+p)^(1-n) - 1.

    Only the trivial wild character is supported; nontrivial eta_w needs
    p-power roots of unity outside Z_p.
    """
    if eta_w is not None and not eta_w.is_trivial():
        raise ValueError("nontrivial wild characters are out of scope")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if f.trunc + 1 < f.prec:
        raise PrecisionLoss(
            f"truncation {f.trunc} too short for precision {f.prec}: "
            f"the tail is only O(p^{f.trunc + 1})")
    m = f.modulus
    gamma_pow = pow(1 + f.p, n - 1, m)
    t0 = (pow(gamma_pow, -1, m) - 1) % m
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * t0 + c) % m
    return PAdicInt(f.p, f.prec, acc)


# -- congruence --------------------------------------------------------------


@dataclass(frozen=True)
class CongruenceVerdict:
    congruent: bool
    unit: int | None = None
    mismatch_index: int | None = None
    mismatch: tuple[int, int] | None = None

    def __bool__(self):
        return self.congruent


def congruent_mod_p(f: IwasawaElement, g: IwasawaElement,
                    allow_unit_scalar: bool = False) -> CongruenceVerdict:
    """Coefficientwise congruence mod p, optionally up to a scalar unit.

    The scalar is read off the first coefficient of g that is a unit
    mod p; if g vanishes mod p entirely, the scalar is taken to be 1.
    """
    if f.p != g.p:
        raise ValueError(f"mixed primes {f.p} and {g.p}")
    p = f.p
    d = min(f.trunc, g.trunc)
    u = 1
    if allow_unit_scalar:
        for i, (a, b) in enumerate(zip(f.coeffs[:d + 1], g.coeffs[:d + 1])):
            if b % p != 0:
                u = a * pow(b % p, -1, p) % p
                if u == 0:
                    # F vanishes mod p where G does not; the witness is
                    # the first coefficient keeping F away from 0 mod p,
                    # or this index if F is zero mod p throughout
                    for j in range(d + 1):
                        if f.coeffs[j] % p != 0:
                            return CongruenceVerdict(
                                False, None, j,
                                (f.coeffs[j] % p, g.coeffs[j] % p))
                    u = 1
                break
    for i in range(d + 1):
        fa, ga = f.coeffs[i] % p, g.coeffs[i] % p
        if (fa - u * ga) % p != 0:
            return CongruenceVerdict(False, None, i, (fa, ga))
    return CongruenceVerdict(True, u if allow_unit_scalar else None)
