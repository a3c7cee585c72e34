import json
import os
import tempfile
from fractions import Fraction
from io import StringIO

import mpmath
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from verifier.checks import corrupt_heat_coefficient
from zetafred.exceptions import ContractViolation, HeatTraceError, ModelRejected
from zetafred.precision import working_precision
from .catalog import CUSTOM_FIXTURE, get_model, resolve_model
from .laws import LogLaw, PowerLaw, check_schatten_order, parse_formula
from .serializers import dump_model, load_model
from .spectra import validate_heat_expansion


class EigenvalueLawTests(SimpleTestCase):
    def test_parse_power_formulas(self):
        self.assertEqual(parse_formula('n^2'), PowerLaw(exponent=Fraction(2)))
        self.assertEqual(parse_formula('n-1/2'), PowerLaw(shift=Fraction(-1, 2)))
        self.assertEqual(
            parse_formula('2*(n+1)^3/2'),
            PowerLaw(scale=Fraction(2), shift=Fraction(1), exponent=Fraction(3, 2)),
        )

    def test_formula_text_parses_back(self):
        law = PowerLaw(scale=Fraction(3), shift=Fraction(1, 4), exponent=Fraction(5, 2))
        self.assertEqual(parse_formula(law.formula), law)

    def test_log_law_has_no_schatten_order(self):
        law = parse_formula('log(n+1)')
        self.assertIsInstance(law, LogLaw)
        with self.assertRaisesMessage(ModelRejected, 'no finite Schatten order'):
            check_schatten_order(law, 4)

    def test_divergent_schatten_sum_is_rejected(self):
        with self.assertRaises(ModelRejected):
            check_schatten_order(PowerLaw(), 1)
        self.assertAlmostEqual(check_schatten_order(PowerLaw(exponent=Fraction(2)), 1), 2.0, places=3)

    def test_power_sum_tail_matches_direct_sum(self):
        law = PowerLaw(exponent=Fraction(2))
        direct = mpmath.nsum(lambda q: q ** -4, [11, mpmath.inf])
        self.assertAlmostEqual(float(law.power_sum_tail(10, 2)), float(direct), places=14)


class HeatTraceTests(SimpleTestCase):
    def test_closed_form_values(self):
        self.assertAlmostEqual(get_model('N1').heat_trace(1.0), 0.581976707, places=9)
        self.assertAlmostEqual(get_model('N2').heat_trace(1.0), 0.386318602, places=9)
        for name in ('N1', 'N2', 'HO'):
            model = get_model(name)
            oracle = model.oracle('heat_trace')
            for t in (0.05, 0.3, 2.0):
                self.assertAlmostEqual(model.heat_trace(t), float(oracle(t)), delta=1e-12)

    def test_large_time_decay(self):
        for name in ('N1', 'N2', 'HO', 'CUSTOM'):
            model = get_model(name)
            bound = 2 * model.multiplicity(1) * mpmath.exp(-50 * model.first_eigenvalue)
            self.assertLessEqual(model.heat_trace(50.0), bound)

    def test_strictly_decreasing(self):
        model = get_model('HO')
        values = [model.heat_trace(t) for t in (0.01, 0.1, 0.5, 1.0, 3.0, 10.0)]
        self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_below_floor_is_an_error(self):
        with self.assertRaises(HeatTraceError):
            get_model('N1').heat_trace(1e-5)

    def test_shift_identity(self):
        model = get_model('N2')
        shift = mpmath.mpf(1.5)
        shifted = model.shifted(shift)
        for t in (0.1, 1.0, 4.0):
            self.assertEqual(shifted.heat_trace(t), mpmath.exp(-t * shift) * model.heat_trace(t))

    def test_shift_must_keep_operator_positive(self):
        with self.assertRaises(ContractViolation):
            get_model('N1').shifted(-1.0)

    def test_transported_constant_coefficient(self):
        z = mpmath.mpf('0.75')
        shifted = get_model('N1').shifted(z)
        self.assertAlmostEqual(shifted.heat_expansion.coefficient(0), -0.5 - z, places=14)
        self.assertEqual(shifted.heat_expansion.cutoff, 12)

    def test_custom_table_model(self):
        model = get_model('CUSTOM')
        self.assertEqual(model.multiplicity(3), 2)
        self.assertEqual(model.eigenvalue(7), 7)
        self.assertAlmostEqual(model.heat_trace(1.0), 2 / (mpmath.e - 1), delta=1e-12)


class HeatExpansionValidationTests(SimpleTestCase):
    def test_n1_remainder_slope(self):
        comparison = validate_heat_expansion(get_model('N1'), order=1)
        self.assertTrue(comparison.passed, comparison.message)
        self.assertAlmostEqual(comparison.slope, 3, delta=0.1)

    def test_n2_exponentially_small_remainder(self):
        comparison = validate_heat_expansion(get_model('N2'), t_grid=(0.5, 1.0, 2.0), order=0)
        self.assertTrue(comparison.passed, comparison.message)

    def test_corrupted_constant_fails(self):
        model = corrupt_heat_coefficient(get_model('N1'), 0, 0, 1e-3)
        self.assertFalse(validate_heat_expansion(model, order=1).passed)

    def test_catalog_passes_up_to_cutoff(self):
        with working_precision('extended'):
            for name in ('N1', 'HO'):
                model = get_model(name)
                for order in (1, 5, model.heat_expansion.cutoff):
                    comparison = validate_heat_expansion(model, t_grid=(0.1, 0.15, 0.2, 0.3), order=order)
                    self.assertTrue(comparison.passed, f'{name} K={order}: {comparison.message}')


class ModelJsonTests(SimpleTestCase):
    def test_n1_round_trip(self):
        model = get_model('N1')
        loaded = load_model(json.loads(json.dumps(dump_model(model))))
        self.assertEqual(loaded.name, 'N1')
        self.assertEqual(loaded.law, model.law)
        self.assertEqual(loaded.schatten_p, 2)
        self.assertEqual(loaded.heat_expansion.cutoff, model.heat_expansion.cutoff)
        for term in model.heat_expansion.terms:
            self.assertAlmostEqual(
                loaded.heat_expansion.coefficient(term.alpha, term.k), term.coeff, delta=1e-15,
            )
        self.assertAlmostEqual(loaded.oracle('log_det_zeta'), model.oracle('log_det_zeta'))

    def test_log_term_at_negative_integer_is_rejected(self):
        payload = dump_model(get_model('N1'))
        payload['heat_terms'].append({'re_alpha': -1, 'k': 1, 're_c': 1})
        with self.assertRaisesMessage(ModelRejected, 'k_{-n}=0'):
            load_model(payload)

    def test_logarithmic_eigenvalues_are_rejected(self):
        payload = {
            'name': 'LOG',
            'eigenvalues': {'kind': 'formula:log(n+1)'},
            'p': 3,
            'heat_terms': [],
        }
        with self.assertRaisesMessage(ModelRejected, 'no finite Schatten order'):
            load_model(payload)

    def test_malformed_table_is_rejected(self):
        payload = {
            'name': 'BAD',
            'eigenvalues': {'kind': 'table', 'values': [2, 1], 'tail': {'exponent': 1}},
            'p': 2,
            'heat_terms': [],
        }
        with self.assertRaises(ModelRejected):
            load_model(payload)

    def test_resolve_model_from_file(self):
        model = resolve_model(CUSTOM_FIXTURE)
        self.assertEqual(model.name, 'CUSTOM')
        with self.assertRaises(ModelRejected):
            resolve_model('NOPE')


class ModelsCommandTests(SimpleTestCase):
    def test_list(self):
        out = StringIO()
        call_command('models', 'list', stdout=out)
        for name in ('N1', 'N2', 'HO', 'CUSTOM'):
            self.assertIn(name, out.getvalue())

    def test_show_emits_model_json(self):
        out = StringIO()
        call_command('models', 'show', 'N2', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertEqual(payload['eigenvalues']['kind'], 'formula:n^2')
        self.assertIsNone(payload['heat_cutoff'])

    def test_validate_file(self):
        out = StringIO()
        call_command('models', 'validate', CUSTOM_FIXTURE, stdout=out)
        self.assertIn('PASS', out.getvalue())

    def test_validate_rejected_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'model.json')
            with open(path, 'w') as f:
                json.dump({'name': 'X', 'eigenvalues': {'kind': 'formula:n'}, 'p': 1, 'heat_terms': []}, f)
            with self.assertRaises(CommandError):
                call_command('models', 'validate', path, stdout=StringIO())
