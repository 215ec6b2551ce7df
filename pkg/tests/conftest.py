"""Shared oracles and generators for the test suite.

The oracles here deliberately reimplement things from first principles
(Moebius-product cyclotomic polynomials, full-convolution multiplication,
Fraction-series logs, brute-force root searches) so that they share no
code path with the library.
"""

import random
from fractions import Fraction
from math import gcd

from symsq.characters import characters_mod
from symsq.cyclotomic import CycNumber, euler_phi


def seeded(salt: int = 0) -> random.Random:
    return random.Random(0xC0FFEE + salt)


# -- independent cyclotomic oracle -------------------------------------------


def _mobius(n):
    out, q = 1, 2
    while q * q <= n:
        if n % q == 0:
            n //= q
            if n % q == 0:
                return 0
            out = -out
        q += 1
    if n > 1:
        out = -out
    return out


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divmod(num, den):
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * max(len(num) - dn, 1)
    for i in range(len(num) - 1, dn - 1, -1):
        if num[i] == 0:
            continue
        c = num[i] / lead
        quot[i - dn] = c
        for j in range(dn + 1):
            num[i - dn + j] -= c * den[j]
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def oracle_cyclotomic(n):
    """Phi_n via the Moebius product formula, one long division at the end."""
    if n == 1:
        return [Fraction(-1), Fraction(1)]
    top = [Fraction(1)]
    bottom = [Fraction(1)]
    for d in range(1, n + 1):
        if n % d != 0:
            continue
        mu = _mobius(n // d)
        if mu == 0:
            continue
        xd = [Fraction(0)] * (d + 1)
        xd[0], xd[d] = Fraction(-1), Fraction(1)
        if mu == 1:
            top = _poly_mul(top, xd)
        else:
            bottom = _poly_mul(bottom, xd)
    quot, rem = _poly_divmod(top, bottom)
    assert all(r == 0 for r in rem)
    return quot


def oracle_cyc_mul(u: CycNumber, v: CycNumber) -> tuple:
    """Full convolution then long division by the oracle Phi_n."""
    assert u.order == v.order
    n = u.order
    prod = _poly_mul(list(u.coeffs), list(v.coeffs))
    # exponents can reach 2(phi-1) < 2n: fold once via x^n = 1
    folded = [Fraction(0)] * n
    for e, c in enumerate(prod):
        folded[e % n] += c
    _, rem = _poly_divmod(folded, oracle_cyclotomic(n))
    rem = list(rem) + [Fraction(0)] * (euler_phi(n) - len(rem))
    return tuple(rem[:euler_phi(n)])


# -- character inventories ------------------------------------------------


def primitive_characters(max_conductor: int):
    """Every primitive character with conductor <= max_conductor."""
    out = []
    for m in range(1, max_conductor + 1):
        for chi in characters_mod(m):
            if chi.conductor == m:
                out.append(chi)
    return out


def characters_with_order_dividing(n: int, max_modulus: int,
                                   coprime_to: int = 1):
    out = []
    for m in range(1, max_modulus + 1):
        if gcd(m, coprime_to) != 1:
            continue
        for chi in characters_mod(m):
            if chi.conductor == m and n % chi.order == 0:
                out.append(chi)
    return out


# -- eigen-data generators ----------------------------------------------------


def random_unit(rng: random.Random, p: int, bound: int = 50) -> int:
    while True:
        a = rng.randint(-bound, bound)
        if a % p != 0:
            return a


def random_eigen_map(rng: random.Random, primes, p: int, unit_at_p=True):
    out = {}
    for q in primes:
        if q == p and unit_at_p:
            out[q] = random_unit(rng, p, 2 * p)
        else:
            out[q] = rng.randint(-10, 10)
    return out


PRIMES_TO_200 = [q for q in range(2, 200)
                 if all(q % d for d in range(2, int(q**0.5) + 1))]
