import json
from io import StringIO

import mpmath
from django.core.management import call_command
from django.test import SimpleTestCase

from expansions.terms import AT_ZERO, AsymptoticExpansion
from operators.catalog import bernoulli_heat_expansion, get_model
from operators.laws import PowerLaw
from operators.spectra import SpectrumModel
from zetafred.exceptions import InsufficientExpansionError
from zetafred.precision import working_precision
from .determinants import (
    calibrate_taylor_sign, determinant_routes, heat_route, log_det_zeta, log_det_zeta_shifted,
    sampled_derivatives, taylor_log_det_zeta, taylor_polynomial, taylor_sign,
)
from .zeta import uses_laplace, zeta, zeta_pf_at_positive_integer

CATALOG = ('N1', 'N2', 'HO', 'CUSTOM')
LOG_2PI = mpmath.log(2 * mpmath.pi)


def with_kernel(model, dim_ker):
    items = [(t.alpha, t.k, t.coeff) for t in model.heat_expansion.terms] + [(0, 0, dim_ker)]
    return SpectrumModel(
        name=f'{model.name}+ker{dim_ker}',
        law=model.law,
        schatten_p=model.schatten_p,
        heat_expansion=AsymptoticExpansion.from_terms(AT_ZERO, items, model.heat_expansion.cutoff),
        dim_ker=dim_ker,
    )


class ZetaTests(SimpleTestCase):
    def test_regular_values(self):
        self.assertAlmostEqual(zeta(get_model('N1'), 2).value, mpmath.pi ** 2 / 6, delta=1e-11)
        self.assertAlmostEqual(zeta(get_model('N2'), 0.75).value, mpmath.zeta(1.5), delta=1e-11)
        self.assertAlmostEqual(zeta(get_model('HO'), -0.5).value, mpmath.zeta(-0.5, 0.5), delta=1e-11)

    def test_complex_argument(self):
        s = mpmath.mpc(2, 1)
        self.assertAlmostEqual(zeta(get_model('N1'), s).value, mpmath.zeta(s), delta=1e-11)

    def test_value_at_zero_is_constant_heat_coefficient(self):
        for name in CATALOG:
            model = get_model(name)
            expected = model.heat_expansion.coefficient(0) - model.dim_ker
            self.assertAlmostEqual(zeta(model, 0).value, expected, delta=1e-8, msg=name)
        self.assertAlmostEqual(zeta(get_model('N2'), 0).value, -0.5, delta=1e-12)

    def test_kernel_is_removed(self):
        model = with_kernel(get_model('N1'), 1)
        self.assertAlmostEqual(zeta(model, 0).value, -0.5, delta=1e-8)
        self.assertAlmostEqual(zeta(model, 2).value, mpmath.pi ** 2 / 6, delta=1e-11)
        self.assertAlmostEqual(log_det_zeta(model), LOG_2PI / 2, delta=1e-8)

    def test_pole_at_one(self):
        result = zeta(get_model('N1'), 1)
        self.assertTrue(result.is_pole)
        self.assertIsNone(result.value)
        self.assertAlmostEqual(result.residue, 1, delta=1e-12)
        self.assertAlmostEqual(result.finite_part, mpmath.euler, delta=1e-10)

    def test_pole_at_half_from_noninteger_exponent(self):
        result = zeta(get_model('N2'), mpmath.mpf(1) / 2)
        self.assertEqual(result.laurent.order, 1)
        self.assertAlmostEqual(result.residue, 0.5, delta=1e-12)

    def test_trivial_zero_and_cancelled_pole(self):
        model = get_model('N1')
        self.assertAlmostEqual(zeta(model, -1).value, -1 / mpmath.mpf(12), delta=1e-11)
        self.assertFalse(zeta(model, -1).is_pole)
        self.assertAlmostEqual(zeta(model, -2).value, 0, delta=1e-11)

    def test_pf_at_positive_integers(self):
        residue, finite = zeta_pf_at_positive_integer(get_model('N1'), 1)
        self.assertAlmostEqual(residue, 1, delta=1e-12)
        self.assertAlmostEqual(finite, mpmath.euler, delta=1e-10)
        residue, finite = zeta_pf_at_positive_integer(get_model('N2'), 1)
        self.assertEqual(residue, 0)
        self.assertAlmostEqual(finite, mpmath.pi ** 2 / 6, delta=1e-11)
        residue, finite = zeta_pf_at_positive_integer(get_model('N1'), 2)
        self.assertEqual(residue, 0)
        self.assertAlmostEqual(finite, mpmath.pi ** 2 / 6, delta=1e-11)

    def test_strip_beyond_cutoff_is_an_error(self):
        with self.assertRaises(InsufficientExpansionError):
            zeta(get_model('N1'), -13)


class DeterminantTests(SimpleTestCase):
    def test_catalog_determinants(self):
        expected = {
            'N1': LOG_2PI / 2,
            'N2': LOG_2PI,
            'HO': mpmath.log(2) / 2,
            'CUSTOM': LOG_2PI,
        }
        for name, value in expected.items():
            routes = determinant_routes(get_model(name))
            self.assertAlmostEqual(routes.route_heat, value, delta=1e-8, msg=name)
            self.assertLess(routes.residual, 1e-7, msg=name)

    def test_heat_route_in_extended_precision(self):
        with working_precision('extended'):
            self.assertAlmostEqual(heat_route(get_model('N2')), LOG_2PI, delta=1e-20)

    def test_shifted_determinants(self):
        self.assertAlmostEqual(log_det_zeta_shifted(get_model('N1'), 1), LOG_2PI / 2, delta=1e-8)
        self.assertAlmostEqual(
            log_det_zeta_shifted(get_model('N2'), 1), mpmath.log(2 * mpmath.sinh(mpmath.pi)), delta=1e-8,
        )
        model = get_model('HO')
        self.assertEqual(log_det_zeta_shifted(model, 0), log_det_zeta(model))

    def test_complex_shift(self):
        model = get_model('N1')
        z = mpmath.mpc(0.5, 0.5)
        value = log_det_zeta_shifted(model, z)
        self.assertAlmostEqual(value, model.oracle('log_det_zeta_shifted')(z), delta=1e-8)

    def test_large_shift_uses_laplace_form(self):
        for name in ('N1', 'N2', 'HO'):
            model = get_model(name)
            for z in (6, 30):
                self.assertTrue(uses_laplace(model.shifted(z)))
                expected = model.oracle('log_det_zeta_shifted')(mpmath.mpf(z))
                self.assertAlmostEqual(log_det_zeta_shifted(model, z), expected, delta=1e-8, msg=f'{name} z={z}')


class ShortHeatExpansionTests(SimpleTestCase):
    def short_model(self, cutoff):
        return SpectrumModel(
            name=f'N1-cutoff{cutoff}',
            law=PowerLaw(),
            schatten_p=2,
            heat_expansion=bernoulli_heat_expansion(cutoff),
        )

    def test_determinant_with_expansion_to_first_order(self):
        routes = determinant_routes(self.short_model(2))
        self.assertAlmostEqual(routes.route_heat, LOG_2PI / 2, delta=1e-8)
        self.assertLess(routes.residual, 1e-7)
        self.assertLessEqual(routes.window_bound, 1e-10)

    def test_zeta_with_expansion_to_first_order(self):
        result = zeta(self.short_model(2), 2)
        self.assertAlmostEqual(result.value, mpmath.pi ** 2 / 6, delta=1e-10)
        self.assertLessEqual(result.window_bound, 1e-10)

    def test_expansion_too_short_for_window(self):
        with self.assertRaises(InsufficientExpansionError):
            zeta(self.short_model(0), 0.5)


class TaylorTests(SimpleTestCase):
    def test_first_coefficients(self):
        self.assertAlmostEqual(taylor_log_det_zeta(get_model('N1'), 1), mpmath.euler, delta=1e-10)
        self.assertAlmostEqual(taylor_log_det_zeta(get_model('N1'), 2), -mpmath.pi ** 2 / 6, delta=1e-10)
        self.assertAlmostEqual(taylor_log_det_zeta(get_model('N2'), 1), mpmath.pi ** 2 / 6, delta=1e-10)
        self.assertAlmostEqual(
            taylor_log_det_zeta(get_model('HO'), 1), mpmath.euler + 2 * mpmath.log(2), delta=1e-10,
        )

    def test_matches_closed_form_derivatives(self):
        for name in ('N1', 'N2', 'HO'):
            model = get_model(name)
            oracle = model.oracle('log_det_zeta_shifted')
            for n in range(1, 5):
                expected = mpmath.diff(oracle, 0, n)
                self.assertAlmostEqual(taylor_log_det_zeta(model, n), expected, delta=1e-8, msg=f'{name} n={n}')

    def test_matches_sampled_derivatives(self):
        for name in ('N1', 'HO'):
            model = get_model(name)
            derivatives = sampled_derivatives(model, 5)
            self.assertAlmostEqual(derivatives[0], log_det_zeta(model), delta=1e-9)
            for n in range(1, 5):
                self.assertAlmostEqual(
                    derivatives[n], taylor_log_det_zeta(model, n), delta=1e-6, msg=f'{name} n={n}',
                )

    def test_sign_calibration_on_n1(self):
        for n in (1, 2):
            sign, measured = calibrate_taylor_sign(get_model('N1'), n)
            self.assertEqual(sign, taylor_sign(n))
        self.assertEqual([taylor_sign(n) for n in range(1, 5)], [1, -1, 1, -1])

    def test_taylor_polynomial(self):
        coefficients = taylor_polynomial(get_model('N1'), 1)
        self.assertAlmostEqual(coefficients[0], LOG_2PI / 2, delta=1e-8)
        self.assertAlmostEqual(coefficients[1], mpmath.euler, delta=1e-10)


class SpectralCommandTests(SimpleTestCase):
    def test_detzeta(self):
        out = StringIO()
        call_command('detzeta', 'N2', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertAlmostEqual(payload['log_det_zeta'], 1.837877066, places=8)
        self.assertLess(payload['residual'], 1e-7)
        self.assertLessEqual(payload['window_bound'], 1e-10)

    def test_zeta_pole(self):
        out = StringIO()
        call_command('zeta', 'N1', '--s', '1,0', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertIsNone(payload['value'])
        self.assertAlmostEqual(payload['laurent']['-1'], 1.0, places=10)
        self.assertAlmostEqual(payload['laurent']['0'], float(mpmath.euler), places=9)
