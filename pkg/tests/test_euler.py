import numpy as np
import pytest

from symsq.characters import characters_mod, trivial_character
from symsq.cyclotomic import CycNumber, cyc_embed_padic
from symsq.errors import (DivergenceGuard, InvalidSatake, NotIntegral,
                          NotOrdinary)
from symsq.euler import (EulerFactor, SatakeData, assemble_imprimitive,
                         df_complex, df_convergence_report, ep_factor,
                         euler_to_lambda, evaluate_factor_complex,
                         evaluate_factor_padic, sigma_q,
                         substitute_frobenius, symsq_dirichlet_coeff_check,
                         symsq_factor)
from symsq.iwasawa import IwasawaElement, congruent_mod_p, invariants
from symsq.padic import PAdicInt, inv, teichmuller

from conftest import characters_with_order_dividing, seeded


class TestSatakeValidation:
    def test_depleted_must_vanish(self):
        with pytest.raises(InvalidSatake):
            SatakeData(2, "depleted", 3, 0, 2)
        SatakeData(2, "depleted", 0, 0, 2)

    def test_ordinary_needs_nonzero(self):
        with pytest.raises(InvalidSatake):
            SatakeData(2, "ordinary", 0, 0, 2)

    def test_unramified_needs_eps(self):
        with pytest.raises(InvalidSatake):
            SatakeData(2, "unramified", 1, 0, 2)

    def test_composite_q(self):
        with pytest.raises(InvalidSatake):
            SatakeData(6, "unramified", 1, 1, 2)

    def test_json_roundtrip(self):
        for data in (SatakeData(2, "unramified", -2, 1, 2),
                     SatakeData(3, "ordinary", 5, 0, 4),
                     SatakeData(7, "unramified", 1, CycNumber.zeta(4), 2)):
            assert SatakeData.from_json(data.to_json()) == data


class TestSymsqFactor:
    def test_zero_eigenvalue(self):
        # alpha^2 = beta^2 = -b, alpha beta = b
        f = symsq_factor(SatakeData(2, "unramified", 0, 1, 2), 1)
        assert f.coeffs == (1, 2, -4, -8)

    def test_worked_example(self):
        f = symsq_factor(SatakeData(2, "unramified", -2, 1, 2), 1)
        assert f.coeffs == (1, -2, 4, -8)

    def test_depleted(self):
        assert symsq_factor(SatakeData(3, "depleted", 0, 0, 4)).coeffs == (1,)

    def test_ordinary_degree_one(self):
        f = symsq_factor(SatakeData(3, "ordinary", 2, 0, 2), 1)
        assert f.coeffs == (1, -4)

    def test_constant_term_validation(self):
        with pytest.raises(InvalidSatake):
            EulerFactor(2, (2, 1))

    def test_numeric_roots_oracle(self):
        rng = seeded(60)
        for _ in range(60):
            q = rng.choice([2, 3, 5, 7])
            k = rng.choice([2, 3, 4])
            a = rng.randint(-10, 10)
            eps = rng.choice([1, -1])
            data = SatakeData(q, "unramified", a, eps, k)
            mine = symsq_factor(data, 1)
            b = eps * q**(k - 1)
            alpha, beta = np.roots([1, -a, b])
            roots = [alpha * beta, alpha**2, beta**2]
            # coefficientwise comparison against elementary symmetric funcs
            e1 = sum(roots)
            e2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
            e3 = roots[0] * roots[1] * roots[2]
            for got, want in zip(mine.coeffs, (1, -e1, e2, -e3)):
                scale = max(1.0, abs(want))
                assert abs(complex(got) - want) / scale < 1e-9
            # and as functions on the disk |X| <= 1/2
            sup = max(abs(evaluate_factor_complex(mine, 1, 0.5 * np.exp(2j * np.pi * t)))
                      for t in np.linspace(0, 1, 7))
            for t in np.linspace(0, 1, 11):
                x = 0.5 * np.exp(2j * np.pi * t)
                oracle = np.prod([1 - r * x for r in roots])
                got = evaluate_factor_complex(mine, 1, x)
                assert abs(got - oracle) / max(1.0, sup) < 1e-9

    def test_coefficient_check(self):
        rng = seeded(61)
        for _ in range(20):
            q = rng.choice([2, 3, 7])
            k = rng.choice([2, 4, 6])
            a = rng.randint(-8, 8)
            data = SatakeData(q, "unramified", a, 1, k)
            assert symsq_dirichlet_coeff_check(data)
            assert symsq_dirichlet_coeff_check(data, trivial_character(1))


class TestLambdaLift:
    def test_depleted_lift_is_one(self):
        lifted = euler_to_lambda(EulerFactor(2, (1,)), trivial_character(1),
                                 0, 5, 4, 10)
        assert lifted == IwasawaElement.one(5, 4, 10)

    def test_formal_substitution(self):
        lifted = substitute_frobenius(EulerFactor(2, (1, -1)),
                                      PAdicInt(5, 4, 1), PAdicInt(5, 12, 1),
                                      8, 4)
        want = [0, -1 % 5**4] + [0] * 7
        assert list(lifted.coeffs) == want

    def test_local_factor_identity(self):
        # specialize(lift, n) equals the factor at (psi_{t+n-1}, q^(-n))
        rng = seeded(62)
        psis = {5: characters_with_order_dividing(4, 16, coprime_to=5),
                7: characters_with_order_dividing(6, 16, coprime_to=7)}
        for _ in range(12):
            p = rng.choice([5, 7])
            q = rng.choice([ell for ell in (2, 3, 7, 11, 13) if ell != p])
            k = rng.choice([2, 4, 6])
            a = rng.randint(1, 40)
            if a % p == 0:
                a += 1
            psi = rng.choice(psis[p])
            t = rng.choice([0, 2, 4])
            n_prec, d = 5, 16
            data = SatakeData(q, "unramified", a, 1, k)
            factor = symsq_factor(data, 1)
            lifted = euler_to_lambda(factor, psi, t, p, n_prec, d)
            eta1_q = teichmuller(q, p, n_prec)
            from symsq.iwasawa import specialize
            for n in range(1, k, 2):
                left = specialize(lifted, n)
                x = inv(PAdicInt(p, n_prec, q))**n
                chi_emb = cyc_embed_padic(psi(q), p, n_prec) * eta1_q**(t + n - 1)
                right = evaluate_factor_padic(
                    factor, CycNumber.one(), chi_emb * x)
                assert left == right

    def test_mu_vanishes(self):
        rng = seeded(63)
        for _ in range(10):
            p = rng.choice([5, 7])
            q = rng.choice([ell for ell in (2, 3, 11, 13) if ell != p])
            data = SatakeData(q, "unramified", rng.randint(1, 20), 1, 4)
            lifted = euler_to_lambda(symsq_factor(data, 1),
                                     trivial_character(1), 0, p, 5, 16)
            mu, _ = invariants(lifted)
            assert mu == 0

    def test_character_vanishing_at_q(self):
        # psi(q) = 0 collapses the factor to 1
        psi = next(c for c in characters_mod(4) if c.is_even())
        data = SatakeData(2, "unramified", 1, 1, 2)
        lifted = euler_to_lambda(symsq_factor(data, 1), psi, 0, 5, 4, 10)
        assert lifted == IwasawaElement.one(5, 4, 10)

    def test_lift_at_p_rejected(self):
        with pytest.raises(ValueError):
            euler_to_lambda(EulerFactor(5, (1, -1)), trivial_character(1),
                            0, 5, 4, 10)

    def test_odd_t_rejected(self):
        with pytest.raises(ValueError):
            euler_to_lambda(EulerFactor(2, (1, -1)), trivial_character(1),
                            1, 5, 4, 10)


class TestSigma:
    def test_depleted_sigma_zero(self):
        assert sigma_q(EulerFactor(2, (1,)), trivial_character(1),
                       0, 5, 4, 12) == 0

    def test_minus_t_unit(self):
        unit = IwasawaElement(5, 4, (1, 3, 2, 0, 0, 0, 0))
        minus_t = IwasawaElement(5, 4, (0, -1, 0, 0, 0, 0, 0))
        mu, lam = invariants(minus_t * unit)
        assert (mu, lam) == (0, 1)

    def test_unit_constant_term(self):
        lifted = euler_to_lambda(symsq_factor(
            SatakeData(2, "unramified", 1, 1, 4), 1),
            trivial_character(1), 0, 5, 5, 14)
        mu, lam = invariants(lifted)
        assert mu == 0 and lam >= 0

    def test_warns_on_positive_mu(self):
        # 43^4 == 1 mod 25, so e(43) has positive valuation at p = 5 and
        # every binomial C(e, k) with k <= 4 vanishes mod 5.  With a
        # twist making the substituted point hit the root of 1 - X mod 5,
        # the whole lift vanishes mod 5 at precision 1: mu > 0 shows up.
        p, q = 5, 43
        psi = next(c for c in characters_mod(16)
                   if c.order == 4 and
                   (cyc_embed_padic(c(q), p, 1) * inv(PAdicInt(p, 1, q))
                    ).residue == 1)
        factor = symsq_factor(SatakeData(q, "ordinary", 1, 0, 2), 1)
        with pytest.warns(RuntimeWarning):
            lam = sigma_q(factor, psi, 0, p, 2, 4)
        assert isinstance(lam, int)


class TestEpFactor:
    def test_ramified_examples(self):
        one = trivial_character(1)
        assert ep_factor(2, one, PAdicInt(5, 2, 1), None, 1, True,
                         2, 5, 2).residue == 5
        assert ep_factor(1, one, PAdicInt(5, 2, 3), None, 1, True,
                         2, 5, 2).residue == 14
        assert ep_factor(1, one, PAdicInt(5, 2, 1), None, 2, True,
                         2, 5, 2).residue == 1

    def test_ramified_exponent(self):
        one = trivial_character(1)
        base = ep_factor(3, one, PAdicInt(5, 4, 2), None, 1, True, 4, 5, 4)
        cubed = ep_factor(3, one, PAdicInt(5, 4, 2), None, 3, True, 4, 5, 4)
        assert cubed == base**3

    def test_unramified_value(self):
        # independent residue computation with a quadratic twist
        p, n_prec, k, n = 5, 6, 2, 1
        psi = next(c for c in characters_mod(3) if c.order == 2)
        assert psi(p) == -1
        alpha = PAdicInt(p, n_prec, 2)
        beta = PAdicInt(p, n_prec, 35)
        got = ep_factor(n, psi, alpha, beta, 0, False, k, p, n_prec)
        m = p**(n_prec - n)
        t1 = (1 + pow(2, -2, m)) % m          # 1 - p^0 (-1)^-1 alpha^-2
        t2 = 2 % m                            # 1 - (-1) p^(k-1-n)
        t3 = (1 + 35 * 35 // 5) % m           # 1 - (-1) beta^2 / p
        assert got.prec == n_prec - n
        assert got.residue == t1 * t2 * t3 % m

    def test_not_integral(self):
        one = trivial_character(1)
        with pytest.raises(NotIntegral):
            ep_factor(3, one, PAdicInt(5, 4, 1), PAdicInt(5, 4, 5), 0,
                      False, 2, 5, 4)   # k-1-n = -2

    def test_not_ordinary(self):
        with pytest.raises(NotOrdinary):
            ep_factor(1, trivial_character(1), PAdicInt(5, 2, 5), None,
                      1, True, 2, 5, 2)

    def test_ramified_needs_r(self):
        with pytest.raises(ValueError):
            ep_factor(1, trivial_character(1), PAdicInt(5, 2, 1), None,
                      0, True, 2, 5, 2)


class TestAssemble:
    def test_basic_product(self):
        lfun = IwasawaElement(5, 4, (0, 1, 0, 0, 0, 0))       # T
        factor = IwasawaElement(5, 4, (0, -1, 0, 0, 0, 0))    # -T
        out = assemble_imprimitive(lfun, [factor])
        assert invariants(out) == (0, 2)
        assert out.coeffs[2] == 5**4 - 1

    def test_empty_factors(self):
        lfun = IwasawaElement(5, 4, (0, 1, 0, 0))
        assert assemble_imprimitive(lfun, []) is lfun

    def test_lambda_zero_factor(self):
        lfun = IwasawaElement(5, 4, (0, 1, 0, 0, 0))
        unit = IwasawaElement(5, 4, (2, 1, 0, 0, 0))
        out = assemble_imprimitive(lfun, [unit])
        assert invariants(out)[1] == invariants(lfun)[1]

    def test_congruence_propagation(self):
        # congruent Satake data gives coefficientwise-congruent lifts
        rng = seeded(64)
        for _ in range(10):
            p = rng.choice([5, 7])
            qs = [ell for ell in (2, 3, 11, 13) if ell != p]
            lifts1, lifts2 = [], []
            for q in qs:
                a = rng.randint(1, 30)
                if a % p == 0:
                    a += 1
                a2 = a + p * rng.randint(-3, 3)
                if a2 == 0:
                    a2 = a + p
                k = rng.choice([2, 4])
                f1 = symsq_factor(SatakeData(q, "unramified", a, 1, k), 1)
                f2 = symsq_factor(SatakeData(q, "unramified", a2, 1, k), 1)
                lifts1.append(euler_to_lambda(f1, trivial_character(1),
                                              0, p, 4, 12))
                lifts2.append(euler_to_lambda(f2, trivial_character(1),
                                              0, p, 4, 12))
            one = IwasawaElement.one(p, 4, 12)
            prod1 = assemble_imprimitive(one, lifts1)
            prod2 = assemble_imprimitive(one, lifts2)
            assert congruent_mod_p(prod1, prod2).congruent


class TestComplexSide:
    def test_all_depleted(self):
        data = [SatakeData(q, "depleted", 0, 0, 2) for q in (2, 3, 5)]
        assert df_complex(data, trivial_character(1), 4.0, 10) == 1.0

    def test_single_factor_example(self):
        data = [SatakeData(2, "unramified", -2, 1, 2)]
        got = df_complex(data, trivial_character(1), 4.0, 10)
        want = 1 / (1 - 2 / 16 + 4 / 256 - 8 / 4096)
        assert abs(got - want) < 1e-12

    def test_divergence_guard(self):
        data = [SatakeData(2, "unramified", 100, 1, 2)]
        with pytest.raises(DivergenceGuard):
            df_complex(data, trivial_character(1), 3.0, 10)
        with pytest.raises(DivergenceGuard):
            df_complex(data, trivial_character(1), 1.5, 10)

    def test_small_convergence(self):
        rng = seeded(65)
        primes = [q for q in range(2, 4000)
                  if all(q % d for d in range(2, int(q**0.5) + 1))]
        data = [SatakeData(q, "unramified",
                           rng.randint(-int(2 * q**0.5), int(2 * q**0.5)),
                           1, 2) for q in primes]
        rep = df_convergence_report(data, trivial_character(1), 4.0, 2000)
        assert rep["rel_change"] < 1e-5
