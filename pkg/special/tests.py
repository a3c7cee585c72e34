from fractions import Fraction
from math import comb

import mpmath
from django.test import SimpleTestCase

from expansions.regint import regint_numeric
from expansions.terms import AT_ZERO, AsymptoticExpansion
from zetafred.exceptions import ContractViolation, GammaPoleError, HurwitzPoleError
from .functions import (
    cauchy_taylor, digamma, gamma, gamma_laurent, gamma_pole_data, harmonic, hurwitz_zeta, hurwitz_zeta_ds,
    laplace_regint, log_gamma, pf_dgamma, pf_drgamma, polygamma, riemann_zeta, to_mp,
)

HALF = Fraction(1, 2)


def laplace_integrand_expansion(alpha, k, z, cutoff=2):
    """Expansion at 0 of x^(α−1)·log^k x·e^(−xz), complete to x^cutoff."""
    items = []
    n = 0
    while alpha - 1 + n <= cutoff:
        items.append((alpha - 1 + n, k, (-z) ** n / mpmath.factorial(n)))
        n += 1
    return AsymptoticExpansion.from_terms(AT_ZERO, items, cutoff)


class GammaTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(gamma(1), 1)
        self.assertAlmostEqual(gamma(0.5), mpmath.sqrt(mpmath.pi), delta=1e-14)
        self.assertAlmostEqual(digamma(1), -mpmath.euler, delta=1e-15)
        self.assertAlmostEqual(log_gamma(10), mpmath.log(362880), delta=1e-13)
        self.assertAlmostEqual(polygamma(1, 1), mpmath.pi ** 2 / 6, delta=1e-14)

    def test_recurrence(self):
        for s in (0.3, 1.7, -2.5, mpmath.mpc(0.5, 2), 7.25):
            s = mpmath.mpmathify(s)
            self.assertLess(abs(gamma(s + 1) - s * gamma(s)), 1e-12 * abs(gamma(s + 1)))

    def test_poles_carry_laurent_data(self):
        for func in (gamma, log_gamma, digamma):
            with self.assertRaises(GammaPoleError) as caught:
                func(-2)
            self.assertEqual(caught.exception.pole_data.n, 2)
            self.assertEqual(caught.exception.pole_data.residue, Fraction(1, 2))


class GammaPoleDataTests(SimpleTestCase):
    def test_pole_at_zero(self):
        data = gamma_pole_data(0)
        self.assertEqual(data.residue, 1)
        self.assertAlmostEqual(data.finite_part, -mpmath.euler, delta=1e-15)

    def test_pole_at_minus_one(self):
        data = gamma_pole_data(1)
        self.assertEqual(data.residue, -1)
        self.assertAlmostEqual(data.finite_part, -(1 - mpmath.euler), delta=1e-15)

    def test_pole_at_minus_three(self):
        data = gamma_pole_data(3)
        self.assertEqual(data.residue, Fraction(-1, 6))
        self.assertAlmostEqual(data.finite_part, -(mpmath.mpf(11) / 6 - mpmath.euler) / 6, delta=1e-15)

    def test_matches_numerical_laurent_fit(self):
        for n in range(5):
            coefficients = gamma_laurent(n, 2)
            data = gamma_pole_data(n)
            self.assertAlmostEqual(coefficients[0], to_mp(data.residue), delta=1e-15)
            self.assertAlmostEqual(coefficients[1], data.finite_part, delta=1e-14)

    def test_negative_index(self):
        with self.assertRaises(ContractViolation):
            gamma_pole_data(-1)


class PfDerivativeTests(SimpleTestCase):
    def test_examples(self):
        self.assertAlmostEqual(pf_dgamma(0, 1), 1, delta=1e-15)
        self.assertAlmostEqual(pf_dgamma(0, 0), -mpmath.euler, delta=1e-15)
        self.assertAlmostEqual(pf_dgamma(1, 1), -mpmath.euler, delta=1e-12)

    def test_finite_part_at_zero_of_first_derivative(self):
        # Γ(ε) = 1/ε − γ + (γ²/2 + π²/12)ε + …, so Γ'(ε) has constant term γ²/2 + π²/12
        expected = mpmath.euler ** 2 / 2 + mpmath.pi ** 2 / 12
        self.assertAlmostEqual(pf_dgamma(1, 0), expected, delta=1e-12)

    def test_matches_regularized_integral(self):
        for j, alpha in ((1, HALF), (2, 0), (1, -1), (2, Fraction(3, 2))):
            expansion = laplace_integrand_expansion(alpha, j, 1)
            power = to_mp(alpha - 1)
            numeric = regint_numeric(
                lambda x: mpmath.power(x, power) * mpmath.log(x) ** j * mpmath.exp(-x), expansion,
            )
            self.assertAlmostEqual(pf_dgamma(j, to_mp(alpha)), numeric, delta=1e-9, msg=f'j={j} alpha={alpha}')

    def test_reciprocal_gamma_derivatives(self):
        self.assertAlmostEqual(pf_drgamma(0, 0), 0, delta=1e-15)
        self.assertAlmostEqual(pf_drgamma(1, 0), 1, delta=1e-12)
        self.assertAlmostEqual(pf_drgamma(1, 1), mpmath.euler, delta=1e-12)

    def test_negative_order(self):
        with self.assertRaises(ContractViolation):
            pf_dgamma(-1, 1)


class ZetaFunctionTests(SimpleTestCase):
    def test_hurwitz_values(self):
        self.assertAlmostEqual(hurwitz_zeta(2, 1), mpmath.pi ** 2 / 6, delta=1e-14)
        for a in (0.25, 1, 3.5):
            self.assertAlmostEqual(hurwitz_zeta(0, a), 0.5 - a, delta=1e-14)
        self.assertAlmostEqual(hurwitz_zeta_ds(0, 1), -mpmath.log(2 * mpmath.pi) / 2, delta=1e-14)

    def test_lerch_identity(self):
        for a in (0.5, 2, 7.5):
            expected = mpmath.loggamma(a) - mpmath.log(2 * mpmath.pi) / 2
            self.assertAlmostEqual(hurwitz_zeta_ds(0, a), expected, delta=1e-12)

    def test_hurwitz_at_one_is_riemann(self):
        for s in (-3.5, 0.5, 2, 12):
            self.assertLess(abs(hurwitz_zeta(s, 1) - riemann_zeta(s)), 1e-12 * max(1, abs(riemann_zeta(s))))

    def test_pole(self):
        with self.assertRaises(HurwitzPoleError) as caught:
            hurwitz_zeta(1, 0.5)
        self.assertEqual(caught.exception.residue, 1)
        self.assertAlmostEqual(caught.exception.finite_part, -mpmath.digamma(0.5), delta=1e-14)
        with self.assertRaises(HurwitzPoleError):
            riemann_zeta(1)

    def test_parameter_must_be_positive(self):
        with self.assertRaises(ContractViolation):
            hurwitz_zeta(2, 0)


class HarmonicTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(harmonic(0), 0)
        self.assertEqual(harmonic(1), 1)
        self.assertEqual(harmonic(3), Fraction(11, 6))

    def test_binomial_identity(self):
        for a in (Fraction(3, 7), Fraction(-5, 2), Fraction(11)):
            for k in range(13):
                total = sum(comb(k, j) * (-a) ** (k - j) * a ** (j + 1) / (j + 1) for j in range(k + 1))
                self.assertEqual(total, (-1) ** k * a ** (k + 1) / (k + 1))


class CauchyTaylorTests(SimpleTestCase):
    def test_exponential(self):
        coefficients = cauchy_taylor(mpmath.exp, 0, 1, 6, points=32)
        for n, c in enumerate(coefficients):
            self.assertAlmostEqual(c, 1 / mpmath.factorial(n), delta=1e-14)


class LaplaceRegintTests(SimpleTestCase):
    def test_examples(self):
        z = mpmath.mpf(3)
        self.assertAlmostEqual(laplace_regint(1, 0, z), 1 / z, delta=1e-15)
        self.assertAlmostEqual(laplace_regint(0, 0, z), -mpmath.euler - mpmath.log(z), delta=1e-14)
        self.assertAlmostEqual(laplace_regint(HALF, 0, 4), mpmath.sqrt(mpmath.pi) / 2, delta=1e-14)

    def test_requires_right_half_plane(self):
        with self.assertRaises(ContractViolation):
            laplace_regint(1, 0, -1)
        with self.assertRaises(ContractViolation):
            laplace_regint(1, 0, mpmath.mpc(0, 2))

    def test_closed_form_matches_quadrature(self):
        alphas = (-2, -1, -HALF, 0, HALF, 1, 2)
        points = (1, 2, 4, mpmath.mpc(1, 1))
        worst = 0
        for alpha in alphas:
            for k in (0, 1, 2):
                for z in points:
                    z = mpmath.mpmathify(z)
                    expansion = laplace_integrand_expansion(Fraction(alpha), k, z)
                    power = to_mp(Fraction(alpha) - 1)
                    numeric = regint_numeric(
                        lambda x: mpmath.power(x, power) * mpmath.log(x) ** k * mpmath.exp(-x * z),
                        expansion,
                    )
                    error = abs(laplace_regint(alpha, k, z) - numeric)
                    worst = max(worst, error)
                    self.assertLess(error, 1e-9, msg=f'alpha={alpha} k={k} z={z}')
        self.assertLess(worst, 1e-9)
