import json
from fractions import Fraction

import mpmath
import numpy as np
from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from operators.catalog import bernoulli_heat_expansion, get_model, theta_heat_expansion
from special.functions import laplace_regint, to_mp
from zetafred.exceptions import ContractViolation, HeatTraceError, InsufficientExpansionError
from .algebra import add, dilation_correction, mellin_pf, multiply, regularized_limit, taylor_exponential
from .comparison import ComparisonRow
from .regint import near_zero_window, regint_numeric, regint_term, unit_interval_regint, window_points
from .serializers import dump_expansion, load_expansion
from .terms import AT_INFINITY, AT_ZERO, AsymptoticExpansion, Exponent

HALF = Fraction(1, 2)


def at_zero(items, cutoff=None):
    return AsymptoticExpansion.from_terms(AT_ZERO, items, cutoff)


def at_infinity(items, cutoff=None):
    return AsymptoticExpansion.from_terms(AT_INFINITY, items, cutoff)


def damped_expansion(beta, k, a, cutoff=2):
    """Expansion at 0 of a·x^β·log^k x·e^(−x), complete to x^cutoff."""
    items = []
    n = 0
    while beta + n <= cutoff:
        items.append((beta + n, k, a * (-1) ** n / mpmath.factorial(n)))
        n += 1
    return at_zero(items, cutoff)


class ExponentTests(SimpleTestCase):
    def test_floats_convert_exactly(self):
        self.assertEqual(Exponent.of(0.5), Exponent(HALF))
        self.assertEqual(Exponent.of(0.1), Exponent(Fraction(0.1)))
        self.assertNotEqual(Exponent.of(0.1), Exponent(Fraction(1, 10)))
        self.assertEqual(Exponent.of(mpmath.mpf(-0.75)), Exponent(Fraction(-3, 4)))
        self.assertEqual(Exponent.of('-3/2'), Exponent(Fraction(-3, 2)))
        self.assertEqual(Exponent.of(complex(0.5, -1)), Exponent(HALF, Fraction(-1)))

    def test_nonpositive_integers(self):
        self.assertEqual(Exponent.of(-3).nonpositive_integer(), 3)
        self.assertEqual(Exponent.of(0).nonpositive_integer(), 0)
        self.assertIsNone(Exponent.of(2).nonpositive_integer())
        self.assertIsNone(Exponent.of(-HALF).nonpositive_integer())


class ExpansionAlgebraTests(SimpleTestCase):
    def test_cancellation_leaves_empty_expansion(self):
        total = add(at_zero([(-1, 0, 1)]), at_zero([(-1, 0, -1)]))
        self.assertEqual(len(total), 0)

    def test_disjoint_keys(self):
        total = add(at_zero([(-1, 0, 1)]), at_zero([(-1, 1, 2)]))
        self.assertEqual([t.key for t in total.terms], [(Exponent.of(-1), 0), (Exponent.of(-1), 1)])

    def test_direction_mismatch(self):
        with self.assertRaises(ContractViolation):
            add(at_zero([(0, 0, 1)]), at_infinity([(0, 0, 1)]))

    def test_sum_of_heat_expansions(self):
        total = (bernoulli_heat_expansion() + theta_heat_expansion()).truncate(1)
        self.assertEqual(total.coefficient(-1), 1)
        self.assertAlmostEqual(total.coefficient(-HALF), mpmath.sqrt(mpmath.pi) / 2, delta=1e-15)
        self.assertAlmostEqual(total.coefficient(0), -1, delta=1e-15)
        self.assertAlmostEqual(total.coefficient(1), 1 / mpmath.mpf(12), delta=1e-15)
        self.assertEqual(len(total), 4)
        self.assertEqual(total.cutoff, 1)

    def test_unit_is_neutral(self):
        heat = bernoulli_heat_expansion()
        product = at_zero([(0, 0, 1)]) * heat
        self.assertEqual(product.terms, heat.terms)

    def test_distribution(self):
        z = mpmath.mpf(3)
        product = multiply(at_zero([(-1, 0, 1)]), at_zero([(0, 0, 1), (1, 0, -z)], 1))
        self.assertEqual(product.coefficient(-1), 1)
        self.assertEqual(product.coefficient(0), -z)
        self.assertEqual(product.cutoff, 0)

    def test_shifted_heat_constant(self):
        z = mpmath.mpf('0.7')
        product = bernoulli_heat_expansion() * taylor_exponential(z, 3)
        self.assertAlmostEqual(product.coefficient(0, 0), -0.5 - z, delta=1e-15)

    def test_product_cutoff(self):
        product = multiply(at_zero([(0, 0, 1), (1, 0, 1)], 1), at_zero([(0, 0, 1), (1, 0, -1)], 1))
        self.assertEqual(product.coefficient(0), 1)
        self.assertEqual(product.coefficient(1), 0)
        self.assertEqual(product.cutoff, 1)

    def test_random_products_distribute(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            e1, e2, e3 = (
                at_zero([(int(a), int(k), float(c)) for a, k, c in zip(
                    rng.integers(-2, 3, 3), rng.integers(0, 2, 3), rng.normal(size=3),
                )])
                for _ in range(3)
            )
            left = e1 * (e2 + e3)
            right = e1 * e2 + e1 * e3
            for alpha, k in {t.key for t in left.terms + right.terms}:
                self.assertAlmostEqual(left.coefficient(alpha, k), right.coefficient(alpha, k), delta=1e-12)
            self.assertEqual([t.key for t in (e1 * e2).terms], [t.key for t in (e2 * e1).terms])

    def test_evaluate_rejects_complex_points(self):
        e = at_zero([(HALF, 0, 1)])
        self.assertAlmostEqual(e.evaluate(4), 2, delta=1e-15)
        for x in (0, -1, mpmath.mpc(1, 1)):
            with self.assertRaises(ContractViolation):
                e.evaluate(x)

    def test_shift_moves_cutoff(self):
        shifted = bernoulli_heat_expansion(4).shift(-1)
        self.assertEqual(shifted.cutoff, 3)
        self.assertEqual(shifted.coefficient(-2), 1)


class RegularizedLimitTests(SimpleTestCase):
    def test_constant_coefficient(self):
        self.assertEqual(regularized_limit(at_infinity([(-1, 0, 5), (0, 0, 3), (1, 0, 7)])), 3)
        self.assertEqual(regularized_limit(at_zero([])), 0)

    def test_limit_of_t_over_expm1(self):
        self.assertEqual(regularized_limit(bernoulli_heat_expansion().shift(1)), 1)

    def test_insufficient_cutoff(self):
        with self.assertRaises(InsufficientExpansionError):
            regularized_limit(at_zero([(-1, 0, 1)], -1))


class RegularizedIntegralTests(SimpleTestCase):
    def test_regint_of_a_single_power_vanishes(self):
        for alpha, k in ((-1, 0), (Fraction(7, 2), 2), (0, 0), (HALF, 1)):
            self.assertEqual(regint_term(alpha, k), 0)
        self.assertEqual(unit_interval_regint(0, 3), 0)

    def test_convergent_integral(self):
        value = regint_numeric(lambda t: mpmath.exp(-t), damped_expansion(0, 0, 1))
        self.assertAlmostEqual(value, 1, delta=1e-10)

    def test_partie_finie_of_exponential_over_t(self):
        value = regint_numeric(lambda t: mpmath.exp(-t) / t, damped_expansion(-1, 0, 1))
        self.assertAlmostEqual(value, -mpmath.euler, delta=1e-10)

    def test_heat_trace_of_squares(self):
        model = get_model('N2')
        value = regint_numeric(lambda t: model.heat_trace(t) / t, theta_heat_expansion().shift(-1), floor=0.1)
        self.assertAlmostEqual(value, -mpmath.log(2 * mpmath.pi) + mpmath.euler / 2, delta=1e-9)

    def test_partie_finie_with_default_floor(self):
        value = regint_numeric(lambda t: mpmath.exp(-t) / t, at_zero([(-1, 0, 1)], 0))
        self.assertAlmostEqual(value, -mpmath.euler, delta=1e-10)

    def test_heat_trace_of_squares_with_default_floor(self):
        model = get_model('N2')
        value = regint_numeric(lambda t: model.heat_trace(t) / t, theta_heat_expansion().shift(-1))
        self.assertAlmostEqual(value, -mpmath.log(2 * mpmath.pi) + mpmath.euler / 2, delta=1e-9)

    def test_short_expansion_above_sampling_floor(self):
        with self.assertRaises(InsufficientExpansionError):
            regint_numeric(lambda t: mpmath.exp(-t) / t, at_zero([(-1, 0, 1)], 0), floor=1e-3)

    def test_requires_expansion_to_order_zero(self):
        with self.assertRaises(InsufficientExpansionError):
            regint_numeric(lambda t: mpmath.exp(-t) / t, at_zero([(-1, 0, 1)], -1))
        with self.assertRaises(ContractViolation):
            regint_numeric(lambda t: mpmath.exp(-t), at_infinity([], 2))


class NearZeroWindowTests(SimpleTestCase):
    def test_points_end_at_lowest(self):
        self.assertEqual(list(window_points(0.1, 1e-3, ratio=4))[-1], mpmath.mpf(1e-3))
        self.assertEqual(len(list(window_points(0.1, 0.1))), 1)

    def test_power_law_remainder(self):
        window = near_zero_window(lambda t: t ** 2, 1, [mpmath.mpf('0.1')], 1, 1)
        self.assertAlmostEqual(window.exponent, 2, delta=1e-12)
        self.assertAlmostEqual(window.estimate, mpmath.mpf('0.001') / 3, delta=1e-15)

    def test_shrinks_until_below_tolerance(self):
        window = near_zero_window(lambda t: t ** 3, 1, window_points(0.1, 1e-6), 2, 1e-10)
        self.assertLessEqual(window.bound, 1e-10)
        self.assertLess(window.delta, 0.1)

    def test_unsampled_remainder_raises(self):
        def remainder(t):
            if t < 0.01:
                raise HeatTraceError(f'no samples at {t}')
            return t

        with self.assertRaises(InsufficientExpansionError):
            near_zero_window(remainder, 1, window_points(0.1, 1e-3, ratio=4), 0, 1e-10)

    def test_divergent_remainder_raises(self):
        with self.assertRaises(InsufficientExpansionError):
            near_zero_window(lambda t: t ** -2, 1, [mpmath.mpf('0.1')], -2, 1)


class DilationTests(SimpleTestCase):
    def test_no_inverse_powers(self):
        self.assertEqual(dilation_correction(at_zero([(0, 0, 1)]), at_infinity([(-2, 0, 1)]), 3), 0)

    def test_single_inverse_power(self):
        self.assertAlmostEqual(dilation_correction(at_zero([(-1, 0, 1)]), None, mpmath.e), -1, delta=1e-15)

    def test_exponential_over_t(self):
        def f(x):
            return mpmath.exp(-x) / x

        expansion = damped_expansion(-1, 0, 1)
        base = regint_numeric(f, expansion)
        for lam in (2, mpmath.e, 10):
            lam = mpmath.mpf(lam)
            dilated = regint_numeric(lambda u: lam * f(lam * u), expansion.dilate(lam))
            self.assertAlmostEqual(dilated, -mpmath.euler - mpmath.log(lam), delta=1e-8)
            self.assertAlmostEqual(dilated - base, dilation_correction(expansion, None, lam), delta=1e-8)

    def test_random_expansions(self):
        rng = np.random.default_rng(2024)
        betas = [Fraction(-3, 2), Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2)]
        for case in range(50):
            picks = rng.choice(len(betas), size=2, replace=False)
            parts = [
                (betas[i], int(rng.integers(0, 2)), mpmath.mpf(float(rng.normal())), to_mp(betas[i]))
                for i in picks
            ]
            lam = mpmath.mpf(float(rng.uniform(0.5, 10)))

            def f(x, parts=parts):
                log_x = mpmath.log(x)
                return mpmath.exp(-x) * mpmath.fsum(a * mpmath.power(x, b) * log_x ** k for _, k, a, b in parts)

            expansion = at_zero([], 2)
            for beta, k, a, _ in parts:
                expansion = expansion + damped_expansion(beta, k, a)
            base = regint_numeric(f, expansion)
            exact = mpmath.fsum(a * laplace_regint(beta + 1, k, 1) for beta, k, a, _ in parts)
            self.assertAlmostEqual(base, exact, delta=1e-8, msg=f'case {case}')

            dilated = regint_numeric(lambda u: lam * f(lam * u), expansion.dilate(lam))
            correction = dilation_correction(expansion, None, lam)
            self.assertAlmostEqual(dilated - base, correction, delta=1e-8, msg=f'case {case}')


class MellinPoleTests(SimpleTestCase):
    def test_simple_pole_from_inverse_power(self):
        laurent = mellin_pf(bernoulli_heat_expansion(), 1)
        self.assertEqual(laurent.order, 1)
        self.assertEqual(laurent.residue, 1)
        self.assertIsNone(laurent.finite_part)

    def test_double_pole_from_logarithm(self):
        laurent = mellin_pf(at_zero([(0, 1, 1)], 1), 0)
        self.assertEqual(laurent.order, 2)
        self.assertEqual(laurent.coefficient(2), -1)

    def test_pole_order_follows_log_power(self):
        for k in range(4):
            laurent = mellin_pf(at_zero([(-HALF, k, 1)], 0), HALF)
            self.assertEqual(laurent.order, k + 1)

    def test_candidate_beyond_cutoff(self):
        with self.assertRaises(InsufficientExpansionError):
            mellin_pf(at_zero([(-1, 0, 1)], 0), -2)


class ComparisonRowTests(SimpleTestCase):
    def test_tolerance(self):
        self.assertTrue(ComparisonRow('a', 1, 1 + 1e-9, tolerance=1e-8).ok)
        self.assertFalse(ComparisonRow('a', 1, 1.1, tolerance=1e-8).ok)
        self.assertTrue(ComparisonRow('a', 1, 2).ok)


class ExpansionSerializerTests(SimpleTestCase):
    def test_dump_and_load(self):
        expansion = at_zero([(-HALF, 0, mpmath.sqrt(mpmath.pi) / 2), (0, 1, 2), ((1, 1), 0, mpmath.mpc(1, -1))], 2)
        payload = json.loads(json.dumps(dump_expansion(expansion)))
        self.assertEqual(payload['direction'], AT_ZERO)
        self.assertEqual(payload['cutoff'], 2)
        self.assertEqual(payload['terms'][0]['re_alpha'], -0.5)
        loaded = load_expansion(payload)
        self.assertEqual([t.key for t in loaded.terms], [t.key for t in expansion.terms])

    def test_rational_strings(self):
        loaded = load_expansion({
            'direction': AT_INFINITY,
            'cutoff': None,
            'terms': [{'re_alpha': '-1/3', 'k': 0, 're_c': '0.25'}],
        })
        self.assertEqual(loaded.coefficient(Fraction(-1, 3)), mpmath.mpf('0.25'))
        self.assertIsNone(loaded.cutoff)

    def test_non_dyadic_exponents_dump_as_strings(self):
        expansion = at_infinity([(Fraction(-1, 3), 0, 1), (Fraction(-3, 4), 0, 2)])
        payload = json.loads(json.dumps(dump_expansion(expansion)))
        exponents = sorted(t['re_alpha'] for t in payload['terms'] if isinstance(t['re_alpha'], str))
        self.assertEqual(exponents, ['-1/3'])
        self.assertIn(-0.75, [t['re_alpha'] for t in payload['terms']])
        loaded = load_expansion(payload)
        self.assertEqual(loaded.coefficient(Fraction(-1, 3)), 1)

    def test_duplicate_terms_are_rejected(self):
        with self.assertRaises(ValidationError):
            load_expansion({
                'direction': AT_ZERO,
                'terms': [{'re_alpha': 0, 'k': 0, 're_c': 1}, {'re_alpha': 0, 'k': 0, 're_c': 2}],
            })

    def test_negative_log_power_is_rejected(self):
        with self.assertRaises(ValidationError):
            load_expansion({'direction': AT_ZERO, 'terms': [{'re_alpha': 0, 'k': -1, 're_c': 1}]})
