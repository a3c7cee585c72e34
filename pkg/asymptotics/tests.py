import json
from fractions import Fraction
from io import StringIO

import mpmath
from django.core.management import call_command
from django.test import SimpleTestCase

from expansions.terms import AT_ZERO, AsymptoticExpansion, Exponent
from fredholm.products import resolvent_power_trace
from operators.catalog import get_model
from special.functions import laplace_regint
from spectral.zeta import declared_expansion
from zetafred.exceptions import ContractViolation, FitConditioningError
from .fitting import (
    compare_expansions, fit_expansion, fit_template, geometric_grid, remainder_decay, sample_grid,
)
from .predictions import (
    FITTED, LargeZExpansion, heat_from_resolvent, predict_fredholm_expansion,
    predict_log_det_zeta_expansion, predict_resolvent_expansion, watson_regint, zeta_from_resolvent,
)

LOG_2PI = mpmath.log(2 * mpmath.pi)
HALF = Fraction(1, 2)


def expansion_at_zero(items, cutoff=None):
    return AsymptoticExpansion.from_terms(AT_ZERO, items, cutoff)


def resolvent_of(heat, N):
    return watson_regint(heat.shift(N - 1).scale(1 / mpmath.factorial(N - 1)))


class WatsonTests(SimpleTestCase):
    def test_constant_integrand(self):
        result = watson_regint(expansion_at_zero([(0, 0, 1)]))
        self.assertEqual(result.keys(), [(Exponent.of(1), 0)])
        self.assertAlmostEqual(result.coefficient(1, 0), 1, delta=1e-15)
        self.assertEqual(len(result.terms), 1)

    def test_inverse_power_gives_logarithm(self):
        result = watson_regint(expansion_at_zero([(-1, 0, 1)]))
        self.assertAlmostEqual(result.coefficient(0, 0), -mpmath.euler, delta=1e-15)
        self.assertAlmostEqual(result.coefficient(0, 1), -1, delta=1e-15)

    def test_single_term_matches_laplace_closed_form(self):
        z = mpmath.mpf(3)
        for alpha in (HALF, 1, Fraction(5, 2), -HALF, 0, -1, -2):
            for k in (0, 1, 2):
                q = expansion_at_zero([(Fraction(alpha) - 1, k, 1)])
                value = watson_regint(q).evaluate(z)
                expected = laplace_regint(alpha, k, z)
                self.assertAlmostEqual(value, expected, delta=1e-12 * max(1, abs(expected)), msg=f'alpha={alpha} k={k}')

    def test_heat_expansion_gives_resolvent_trace(self):
        model = get_model('N1')
        predicted = predict_resolvent_expansion(model, 2)
        for z in (10, 20, 40):
            self.assertAlmostEqual(predicted.evaluate(z), resolvent_power_trace(model, z, 2), delta=1e-11)


class ResolventExpansionTests(SimpleTestCase):
    def test_leading_terms(self):
        n1 = predict_resolvent_expansion(get_model('N1'), 2)
        self.assertAlmostEqual(n1.coefficient(1, 0), 1, delta=1e-14)
        self.assertEqual(n1.terms[0].alpha, 1)

        n2 = predict_resolvent_expansion(get_model('N2'), 1)
        self.assertAlmostEqual(n2.coefficient(HALF, 0), mpmath.pi / 2, delta=1e-12)
        self.assertAlmostEqual(n2.coefficient(1, 0), -0.5, delta=1e-12)
        self.assertEqual(len(n2.terms), 2)
        self.assertIsNone(n2.cutoff)

    def test_order_below_schatten_order(self):
        with self.assertRaises(ContractViolation):
            predict_resolvent_expansion(get_model('N1'), 1)

    def test_round_trip_on_catalog(self):
        for name in ('N1', 'N2', 'HO', 'CUSTOM'):
            model = get_model(name)
            heat = declared_expansion(model)
            for N in range(model.schatten_p, 4):
                recovered = heat_from_resolvent(predict_resolvent_expansion(model, N), N)
                self.assertEqual(
                    [t.key for t in recovered.terms], [t.key for t in heat.terms], msg=f'{name} N={N}',
                )
                for term in heat.terms:
                    self.assertAlmostEqual(
                        recovered.coefficient(term.alpha, term.k), term.coeff,
                        delta=1e-12 * max(1, abs(term.coeff)), msg=f'{name} N={N} {term.key}',
                    )

    def test_round_trip_with_logarithms(self):
        heat = expansion_at_zero([(-HALF, 0, 1), (HALF, 0, 0.2), (HALF, 1, 0.3), (HALF, 2, -0.1)], 1)
        for N in (1, 2, 3):
            recovered = heat_from_resolvent(resolvent_of(heat, N), N)
            for term in heat.terms:
                self.assertAlmostEqual(recovered.coefficient(term.alpha, term.k), term.coeff, delta=1e-10)
            self.assertEqual(recovered.cutoff, 1)

    def test_zero_expansion(self):
        zero = LargeZExpansion.from_items([])
        self.assertEqual(len(heat_from_resolvent(zero, 2)), 0)

    def test_resolvent_term_without_heat_counterpart(self):
        with self.assertRaises(ContractViolation):
            heat_from_resolvent(LargeZExpansion.from_items([(0, 0, 1)]), 1)


class LogDetZetaExpansionTests(SimpleTestCase):
    def test_n1_stirling_terms(self):
        predicted = predict_log_det_zeta_expansion(get_model('N1'))
        self.assertAlmostEqual(predicted.coefficient(-1, 1), -1, delta=1e-14)
        self.assertAlmostEqual(predicted.coefficient(-1, 0), 1, delta=1e-14)
        self.assertAlmostEqual(predicted.coefficient(0, 1), -0.5, delta=1e-14)
        self.assertAlmostEqual(predicted.coefficient(1, 0), -1 / mpmath.mpf(12), delta=1e-14)
        self.assertAlmostEqual(predicted.coefficient(3, 0), 1 / mpmath.mpf(360), delta=1e-14)
        self.assertEqual(predicted.coefficient(2, 0), 0)

    def test_n2_terms(self):
        predicted = predict_log_det_zeta_expansion(get_model('N2'))
        self.assertAlmostEqual(predicted.coefficient(-HALF, 0), mpmath.pi, delta=1e-13)
        self.assertAlmostEqual(predicted.coefficient(0, 1), -0.5, delta=1e-14)
        self.assertEqual(len(predicted.terms), 2)
        z = mpmath.mpf(400)
        closed_form = get_model('N2').oracle('log_det_zeta_shifted')(z)
        self.assertLess(abs(predicted.evaluate(z) - closed_form), 1e-6)

    def test_ho_has_no_logarithm(self):
        predicted = predict_log_det_zeta_expansion(get_model('HO'))
        self.assertAlmostEqual(predicted.coefficient(-1, 1), -1, delta=1e-14)
        self.assertAlmostEqual(predicted.coefficient(-1, 0), 1, delta=1e-14)
        self.assertEqual(predicted.coefficient(0, 1), 0)
        self.assertAlmostEqual(predicted.coefficient(1, 0), 1 / mpmath.mpf(24), delta=1e-14)

    def test_constant_term_vanishes(self):
        for name in ('N1', 'N2', 'HO', 'CUSTOM'):
            self.assertEqual(predict_log_det_zeta_expansion(get_model(name)).coefficient(0, 0), 0)

    def test_sources_are_recorded(self):
        predicted = predict_log_det_zeta_expansion(get_model('N1'))
        self.assertIn('A^H_00', predicted.sources[(Exponent.of(0), 1)])

    def test_remainder_decays_like_third_power(self):
        for name in ('N1', 'HO'):
            model = get_model(name)
            predicted = predict_log_det_zeta_expansion(model)
            samples = sample_grid(model, 'detzeta', [25, 50, 100, 200])
            result = remainder_decay(predicted, samples, 2)
            self.assertTrue(result.passed, msg=f'{name}: {result.message}')
            self.assertAlmostEqual(result.slope, -3, delta=0.15)


class FredholmExpansionTests(SimpleTestCase):
    def test_n2(self):
        predicted = predict_fredholm_expansion(get_model('N2'))
        self.assertAlmostEqual(predicted.coefficient(-HALF, 0), mpmath.pi, delta=1e-13)
        self.assertAlmostEqual(predicted.coefficient(0, 1), -0.5, delta=1e-14)
        self.assertAlmostEqual(predicted.coefficient(0, 0), -LOG_2PI, delta=1e-8)
        oracle = get_model('N2').oracle('log_det_fredholm')
        for z in (100, 400):
            self.assertAlmostEqual(predicted.evaluate(z), oracle(mpmath.mpf(z)), delta=1e-7)

    def test_n1(self):
        predicted = predict_fredholm_expansion(get_model('N1'))
        self.assertAlmostEqual(predicted.coefficient(-1, 1), -1, delta=1e-14)
        self.assertAlmostEqual(predicted.coefficient(-1, 0), 1 - mpmath.euler, delta=1e-9)
        self.assertAlmostEqual(predicted.coefficient(0, 1), -0.5, delta=1e-14)
        self.assertAlmostEqual(predicted.coefficient(0, 0), -LOG_2PI / 2, delta=1e-8)
        self.assertAlmostEqual(predicted.coefficient(1, 0), -1 / mpmath.mpf(12), delta=1e-14)
        z = mpmath.mpf(100)
        self.assertAlmostEqual(predicted.evaluate(z), get_model('N1').oracle('log_det_fredholm')(z), delta=1e-7)

    def test_constant_term_is_minus_log_det_zeta(self):
        for name in ('N1', 'N2', 'HO'):
            model = get_model(name)
            predicted = predict_fredholm_expansion(model)
            self.assertAlmostEqual(predicted.coefficient(0, 0), -model.oracle('log_det_zeta'), delta=1e-8, msg=name)
            self.assertAlmostEqual(
                predicted.coefficient(0, 1), model.heat_expansion.coefficient(0, 0), delta=1e-14, msg=name,
            )


class FitTests(SimpleTestCase):
    def test_exact_inverse_power(self):
        samples = [(z, 1 / mpmath.mpf(z)) for z in (10, 20, 40)]
        fitted = fit_expansion(samples, [(1, 0)])
        self.assertEqual(fitted.provenance, FITTED)
        self.assertAlmostEqual(fitted.coefficient(1, 0), 1, delta=1e-12)

    def test_fredholm_constant_of_n2(self):
        model = get_model('N2')
        samples = sample_grid(model, 'fredholm', [25, 50, 100, 200, 400])
        fitted = fit_expansion(samples, [(-HALF, 0), (0, 1), (0, 0)])
        self.assertAlmostEqual(fitted.coefficient(0, 0), -LOG_2PI, delta=1e-4)
        self.assertFalse(fitted.diagnostics['residual_blowup'])
        self.assertIn('log z', ' '.join(fitted.diagnostics['sensitivity']))

    def test_missing_term_is_flagged(self):
        model = get_model('N2')
        samples = sample_grid(model, 'fredholm', [25, 50, 100, 200, 400])
        fitted = fit_expansion(samples, [(-HALF, 0), (0, 0)])
        self.assertTrue(fitted.diagnostics['residual_blowup'])
        self.assertFalse(compare_expansions(predict_fredholm_expansion(model), fitted).passed)

    def test_too_few_samples(self):
        with self.assertRaises(ContractViolation):
            fit_expansion([(10, 1), (20, 2)], [(0, 0)])

    def test_ill_conditioned_basis(self):
        samples = [(z, mpmath.log(z)) for z in geometric_grid(25, 6)]
        with self.assertRaises(FitConditioningError) as ctx:
            fit_expansion(samples, [(0, 0), (Fraction(1, 10 ** 12), 0)])
        self.assertGreater(ctx.exception.condition, 1e10)

    def test_fitted_matches_predicted_on_catalog(self):
        for name in ('N1', 'N2', 'HO'):
            model = get_model(name)
            predicted = predict_fredholm_expansion(model)
            template = fit_template(predicted, required=[(0, 1), (0, 0)])
            samples = sample_grid(model, 'fredholm', geometric_grid(25, max(6, len(template) + 2)))
            comparison = compare_expansions(predicted, fit_expansion(samples, template))
            self.assertTrue(comparison.passed, msg=f'{name}: {comparison.message}')

    def test_resolvent_leading_coefficients(self):
        model = get_model('N2')
        predicted = predict_resolvent_expansion(model, 1)
        samples = sample_grid(model, 'resolvent', geometric_grid(), 1)
        fitted = fit_expansion(samples, fit_template(predicted))
        self.assertAlmostEqual(fitted.coefficient(HALF, 0), mpmath.pi / 2, delta=1e-8)
        self.assertAlmostEqual(fitted.coefficient(1, 0), -0.5, delta=1e-8)


class ZetaFromResolventTests(SimpleTestCase):
    def test_matches_riemann_zeta(self):
        self.assertAlmostEqual(zeta_from_resolvent(get_model('N1'), 1.5, 2), mpmath.zeta(1.5), delta=1e-8)
        self.assertAlmostEqual(zeta_from_resolvent(get_model('N2'), 0.75, 1), mpmath.zeta(1.5), delta=1e-8)
        self.assertAlmostEqual(zeta_from_resolvent(get_model('N1'), 1.25, 2), mpmath.zeta(1.25), delta=1e-8)

    def test_outside_the_strip(self):
        with self.assertRaises(ContractViolation):
            zeta_from_resolvent(get_model('N1'), 0.5, 2)


class ExpandCommandTests(SimpleTestCase):
    def test_predicted_terms(self):
        out = StringIO()
        call_command('expand', 'N2', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertEqual(payload['what'], 'detzeta')
        self.assertEqual(payload['predicted']['provenance'], 'predicted')
        terms = {(t['re_alpha'], t['k']): t['re_c'] for t in payload['predicted']['terms']}
        self.assertAlmostEqual(terms[(-0.5, 0)], float(mpmath.pi), places=12)
        self.assertAlmostEqual(terms[(0, 1)], -0.5, places=14)

    def test_fit_against_prediction(self):
        out = StringIO()
        call_command('expand', 'N2', '--what', 'fredholm', '--fit', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertTrue(payload['comparison']['passed'])
        self.assertEqual(payload['fitted']['provenance'], 'fitted')

    def test_resolvent_power(self):
        out = StringIO()
        call_command('expand', 'N1', '--what', 'resolvent', '--N', '3', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertEqual(payload['N'], 3)
        leading = payload['predicted']['terms'][0]
        self.assertEqual((leading['re_alpha'], leading['k']), (2, 0))
        self.assertAlmostEqual(leading['re_c'], 0.5, places=14)
