import json
from io import StringIO

import mpmath
from django.core.management import call_command
from django.test import SimpleTestCase

from operators.catalog import get_model
from zetafred.exceptions import ContractViolation
from zetafred.precision import working_precision
from .products import (
    det_fredholm, log_derivative, resolvent_power_trace, resolvent_trace_via_heat, truncation_index,
)


def central_difference(f, z, n, h):
    """n-th central difference quotient of f at z with step h."""
    total = mpmath.fsum(
        (-1) ** i * mpmath.binomial(n, i) * f(z + (mpmath.mpf(n) / 2 - i) * h)
        for i in range(n + 1)
    )
    return total / h ** n


def log_det(name, order):
    return lambda z: det_fredholm(get_model(name), z, order).log_value


class DetFredholmTests(SimpleTestCase):
    def test_value_at_zero(self):
        for name in ('N1', 'N2', 'HO', 'CUSTOM'):
            model = get_model(name)
            result = det_fredholm(model, 0, model.schatten_p)
            self.assertEqual(result.value, 1)
            self.assertEqual(result.log_value, 0)
            self.assertEqual(result.truncation_n, 0)

    def test_sinh_product(self):
        result = det_fredholm(get_model('N2'), 1, 1)
        expected = mpmath.sinh(mpmath.pi) / mpmath.pi
        self.assertLess(abs(result.value / expected - 1), 1e-10)
        self.assertLess(result.tail_bound, 1e-12)

    def test_gamma_product(self):
        result = det_fredholm(get_model('N1'), 1, 2)
        self.assertLess(abs(result.value / mpmath.exp(-mpmath.euler) - 1), 1e-10)

    def test_matches_closed_forms(self):
        for name in ('N1', 'N2', 'HO'):
            model = get_model(name)
            oracle = model.oracle('log_det_fredholm')
            for z in (0.25, 1, 3.5, 40):
                result = det_fredholm(model, z, model.schatten_p)
                self.assertAlmostEqual(result.log_value, oracle(mpmath.mpf(z)), delta=1e-10, msg=f'{name} z={z}')

    def test_complex_argument(self):
        model = get_model('N1')
        z = mpmath.mpc(0.5, 1)
        result = det_fredholm(model, z, 2)
        self.assertAlmostEqual(result.log_value, model.oracle('log_det_fredholm')(z), delta=1e-10)

    def test_custom_model_doubles_n1(self):
        result = det_fredholm(get_model('CUSTOM'), 1, 2)
        self.assertAlmostEqual(result.log_value, -2 * mpmath.euler, delta=1e-10)

    def test_zero_on_the_spectrum(self):
        result = det_fredholm(get_model('N1'), -2, 2)
        self.assertEqual(result.value, 0)
        self.assertIsNone(result.log_value)
        self.assertTrue(result.on_spectrum)

    def test_beyond_first_eigenvalue(self):
        model = get_model('N1')
        z = mpmath.mpf(-1.5)
        result = det_fredholm(model, z, 2)
        self.assertAlmostEqual(result.value, mpmath.exp(-mpmath.euler * z) * mpmath.rgamma(1 + z), delta=1e-10)

    def test_order_below_schatten_order(self):
        with self.assertRaises(ContractViolation):
            det_fredholm(get_model('N1'), 1, 1)

    def test_truncation_index(self):
        self.assertEqual(truncation_index(get_model('N1'), 10), 39)
        self.assertEqual(truncation_index(get_model('N2'), 1), 1)
        self.assertEqual(truncation_index(get_model('HO'), 0.1), 0)

    def test_higher_order_factor(self):
        for name, order in (('N2', 1), ('N1', 2), ('N1', 3)):
            model = get_model(name)
            z = mpmath.mpf(1.5)
            trace = model.power_sum_tail(0, order)
            step = (-1) ** order * z ** order * trace / order
            low = det_fredholm(model, z, order).log_value
            high = det_fredholm(model, z, order + 1).log_value
            self.assertAlmostEqual(high, low + step, delta=1e-10, msg=f'{name} order={order}')


class LogDerivativeTests(SimpleTestCase):
    def test_examples(self):
        expected = (mpmath.pi * mpmath.coth(mpmath.pi) - 1) / 2
        self.assertAlmostEqual(log_derivative(get_model('N2'), 1, 1), expected, delta=1e-12)
        self.assertAlmostEqual(log_derivative(get_model('N1'), 1, 2), -1, delta=1e-12)
        self.assertEqual(log_derivative(get_model('N1'), 0, 2), 0)

    def test_matches_first_difference(self):
        for name in ('N1', 'N2', 'HO'):
            model = get_model(name)
            order = model.schatten_p
            for z in (-0.3, 0.5, 1, 2.5):
                z = mpmath.mpf(z)
                numeric = central_difference(log_det(name, order), z, 1, mpmath.mpf('1e-4'))
                self.assertAlmostEqual(
                    log_derivative(model, z, order), numeric, delta=1e-7, msg=f'{name} z={z}',
                )

    def test_pole_on_the_spectrum(self):
        with self.assertRaises(ContractViolation):
            log_derivative(get_model('N2'), -4, 1)


class DerivativeStructureTests(SimpleTestCase):
    def test_top_derivative_is_resolvent_power_trace(self):
        with working_precision('extended'):
            h = mpmath.mpf('1e-3')
            for name, order in (('N2', 1), ('N2', 2), ('N2', 3), ('N1', 2), ('N1', 3), ('HO', 2)):
                model = get_model(name)
                N = order - 1
                for z in (mpmath.mpf(1), mpmath.mpf('2.5')):
                    numeric = central_difference(log_det(name, order), z, N + 1, h)
                    expected = (-1) ** N * mpmath.factorial(N) * resolvent_power_trace(model, z, N + 1)
                    self.assertAlmostEqual(numeric, expected, delta=1e-5, msg=f'{name} order={order} z={z}')

    def test_low_derivatives_vanish_at_zero(self):
        with working_precision('extended'):
            h = mpmath.mpf('1e-3')
            for name, order in (('N1', 2), ('N1', 3), ('HO', 3), ('N2', 2)):
                f = log_det(name, order)
                self.assertEqual(f(0), 0)
                for n in range(1, order):
                    self.assertLess(abs(central_difference(f, mpmath.mpf(0), n, h)), 1e-6, msg=f'{name} n={n}')


class ResolventTraceTests(SimpleTestCase):
    def test_examples(self):
        zeta2 = mpmath.pi ** 2 / 6
        self.assertAlmostEqual(resolvent_power_trace(get_model('N1'), 0, 2), zeta2, delta=1e-12)
        self.assertAlmostEqual(resolvent_power_trace(get_model('N1'), 1, 2), zeta2 - 1, delta=1e-12)
        self.assertAlmostEqual(resolvent_power_trace(get_model('N2'), 0, 1), zeta2, delta=1e-12)

    def test_polygamma_values(self):
        model = get_model('HO')
        for z in (0.5, 3, 12.5):
            expected = mpmath.psi(1, mpmath.mpf(0.5) + z)
            self.assertAlmostEqual(resolvent_power_trace(model, z, 2), expected, delta=1e-12)

    def test_matches_heat_integral(self):
        for name, N in (('N1', 2), ('N1', 3), ('N2', 1), ('N2', 2)):
            model = get_model(name)
            for z in (1, 4):
                self.assertAlmostEqual(
                    resolvent_power_trace(model, z, N), resolvent_trace_via_heat(model, z, N),
                    delta=1e-8, msg=f'{name} N={N} z={z}',
                )

    def test_shift_must_stay_above_first_eigenvalue(self):
        with self.assertRaises(ContractViolation):
            resolvent_power_trace(get_model('N1'), -1, 2)


class FredholmCommandTests(SimpleTestCase):
    def test_sinh_product(self):
        out = StringIO()
        call_command('fredholm', 'N2', '--z', '1,0', '--order', '1', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertAlmostEqual(payload['value'], 3.676077910, places=8)
        self.assertEqual(payload['order'], 1)
        self.assertIn('truncation_n', payload)
        self.assertIn('tail_bound', payload)

    def test_default_order_is_schatten_order(self):
        out = StringIO()
        call_command('fredholm', 'N1', '--z', '1', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertEqual(payload['order'], 2)
        self.assertAlmostEqual(payload['log_value'], -float(mpmath.euler), places=10)
