"""Precision-tracked arithmetic in Z_p.

A PAdicInt is a residue modulo p^prec together with the exponent prec
itself, so every value knows how many digits it is good for.  The
precision rules are deliberately blunt and conservative:

  * binary operations return min(prec_left, prec_right);
  * exact division by p^k subtracts k from the precision;
  * nothing ever silently increases a claimed precision.

Valuations of values that are zero at working precision are reported as
None, to be read as "at least prec".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAUnit, NotOrdinary, PrecisionLoss

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every n below 3.3e24."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
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


def int_valuation(n: int, p: int) -> int:
    """v_p(n) for a nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined; handle separately")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PAdicInt:
    """Element of Z_p known modulo p^prec."""

    p: int
    prec: int
    residue: int

    def __post_init__(self):
        if self.p < 5 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime >= 5, got {self.p}")
        if self.prec < 1:
            raise ValueError(f"precision must be positive, got {self.prec}")
        object.__setattr__(self, "residue", self.residue % self.p**self.prec)

    # -- basic queries ------------------------------------------------

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    def val(self) -> int | None:
        """v_p of the residue; None means 'at least prec'."""
        if self.residue == 0:
            return None
        return int_valuation(self.residue, self.p)

    def is_zero(self) -> bool:
        """Zero at working precision."""
        return self.residue == 0

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def reduce(self, prec: int) -> "PAdicInt":
        """Forget digits down to the given precision."""
        if prec > self.prec:
            raise PrecisionLoss(
                f"cannot raise precision {self.prec} -> {prec}")
        return PAdicInt(self.p, prec, self.residue)

    def congruent(self, other: "PAdicInt | int", modexp: int) -> bool:
        """Congruence modulo p^modexp (must be within both precisions)."""
        other = self._coerce(other)
        if modexp > min(self.prec, other.prec):
            raise PrecisionLoss("congruence test beyond working precision")
        return (self.residue - other.residue) % self.p**modexp == 0

    # -- ring structure -----------------------------------------------

    def _coerce(self, other) -> "PAdicInt":
        if isinstance(other, PAdicInt):
            if other.p != self.p:
                raise ValueError(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return PAdicInt(self.p, self.prec, other)
        if isinstance(other, Fraction):
            return from_rational(other, self.p, self.prec)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.prec, other.prec)
        return PAdicInt(self.p, n, self.residue + other.residue)

    __radd__ = __add__

    def __neg__(self):
        return PAdicInt(self.p, self.prec, -self.residue)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.prec, other.prec)
        return PAdicInt(self.p, n, self.residue - other.residue)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.prec, other.prec)
        return PAdicInt(self.p, n, self.residue * other.residue)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return inv(self) ** (-e)
        return PAdicInt(self.p, self.prec, pow(self.residue, e, self.modulus))

    def __truediv__(self, other):
        """Division by a unit.  For p-power division use exact_div_p."""
        other = self._coerce(other)
        return self * inv(other)

    def exact_div_p(self, k: int) -> "PAdicInt":
        """Divide by p^k; the residue must actually be divisible by p^k."""
        if k == 0:
            return self
        if self.prec - k < 1:
            raise PrecisionLoss(
                f"dividing by p^{k} leaves no precision from {self.prec}")
        if self.residue % self.p**k != 0:
            raise ValueError(f"residue {self.residue} not divisible by p^{k}")
        return PAdicInt(self.p, self.prec - k, self.residue // self.p**k)

    def __eq__(self, other):
        if isinstance(other, int):
            other = PAdicInt(self.p, self.prec, other)
        if not isinstance(other, PAdicInt):
            return NotImplemented
        return (self.p, self.prec, self.residue) == (
            other.p, other.prec, other.residue)

    def __hash__(self):
        return hash((self.p, self.prec, self.residue))

    def __repr__(self):
        return f"{self.residue} + O({self.p}^{self.prec})"


# -- constructors ------------------------------------------------------


def from_rational(x, p: int, prec: int) -> PAdicInt:
    """Image of an integer or Fraction with p-free denominator in Z_p."""
    if isinstance(x, int):
        return PAdicInt(p, prec, x)
    x = Fraction(x)
    if x.denominator % p == 0:
        raise NotAUnit(f"{x} has p in its denominator, not in Z_{p}")
    m = p**prec
    return PAdicInt(p, prec, x.numerator * pow(x.denominator, -1, m))


# -- the spec operations -----------------------------------------------


def val(x: PAdicInt) -> int | None:
    return x.val()


def inv(x: PAdicInt) -> PAdicInt:
    """Multiplicative inverse of a unit, exact mod p^prec."""
    if x.residue % x.p != 0:
        return PAdicInt(x.p, x.prec, pow(x.residue, -1, x.modulus))
    raise NotAUnit(f"{x!r} has positive valuation")


def teichmuller(a: int, p: int, prec: int) -> PAdicInt:
    """The (p-1)-th root of unity congruent to a mod p.

    Computed by iterating x -> x^p, which stabilizes after at most prec
    steps and involves no denominators.
    """
    if a % p == 0:
        raise NotAUnit(f"{a} is divisible by {p}")
    m = p**prec
    x = a % m
    for _ in range(prec):
        y = pow(x, p, m)
        if y == x:
            break
        x = y
    return PAdicInt(p, prec, x)


def padic_log1p(x: PAdicInt) -> PAdicInt:
    """log(1 + x) for v(x) >= 1, correct at the precision of x.

    The alternating series is summed on the exact residue with enough
    guard digits to absorb the divisions by n; replacing x by its
    residue is harmless because log is 1-Lipschitz on 1 + pZ_p.
    """
    v = x.val()
    if v is not None and v < 1:
        raise ValueError("padic_log1p requires valuation >= 1")
    n_out = x.prec
    if x.residue == 0:
        return PAdicInt(x.p, n_out, 0)
    p, r = x.p, x.residue
    # terms beyond n_max have v_p(x^n / n) >= n - log_p(n) >= n_out
    n_max = n_out + 1
    while n_max - int_valuation_bound(n_max, p) < n_out:
        n_max += 1
    total = 0
    m_out = p**n_out
    for n in range(1, n_max + 1):
        j = int_valuation(n, p)
        a = pow(r, n, p**(n_out + j))
        term = (a // p**j) * pow(n // p**j, -1, m_out)
        total += term if n % 2 == 1 else -term
    return PAdicInt(p, n_out, total)


def int_valuation_bound(n: int, p: int) -> int:
    """floor(log_p(n)), an upper bound for v_p(m) over all m <= n."""
    b = 0
    while p**(b + 1) <= n:
        b += 1
    return b


def hensel_unit_root(a_p: PAdicInt, c: PAdicInt) -> PAdicInt:
    """Unit root of X^2 - a_p X + c, the case v(a_p)=0, v(c)>=1.

    Newton iteration from a_p itself; the derivative 2X - a_p is a unit
    along the whole orbit, so the lift is unique with root == a_p mod p.
    """
    if a_p.val() != 0:
        raise NotOrdinary(f"a_p = {a_p!r} is not a unit")
    cv = c.val()
    if cv is not None and cv < 1:
        raise ValueError("hensel_unit_root requires v(c) >= 1")
    p = a_p.p
    n = min(a_p.prec, c.prec)
    m = p**n
    a, c0 = a_p.residue % m, c.residue % m
    x = a % p
    for _ in range(n):
        fx = (x * x - a * x + c0) % m
        if fx == 0:
            break
        dfx = (2 * x - a) % m
        x = (x - fx * pow(dfx, -1, m)) % m
    assert (x * x - a * x + c0) % m == 0
    return PAdicInt(p, n, x)
