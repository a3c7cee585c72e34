import csv
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import replace
from io import StringIO

import mpmath
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from operators.catalog import bernoulli_heat_expansion, get_model
from zetafred.cli import EXIT_USAGE, cli_main
from zetafred.exceptions import ContractViolation
from .checks import (
    CSV_FIELDS, FAIL, LOG_DET_ZETA, MAIN_THEOREM, PASS, corrupt_heat_coefficient, verify_constant_term,
    verify_main_theorem, verify_model,
)
from .reports import csv_rows, format_table, report_payload, write_csv

LOG_2PI = mpmath.log(2 * mpmath.pi)


def run_cli(argv):
    with redirect_stdout(StringIO()), redirect_stderr(StringIO()):
        return cli_main(argv)


class MainTheoremTests(SimpleTestCase):
    def test_catalog_models_pass(self):
        for name in ('N1', 'N2', 'HO'):
            report = verify_main_theorem(get_model(name))
            self.assertTrue(report.passed, msg=f'{name}: {report.residuals}')
            self.assertLess(report.max_residual, 1e-6)
            self.assertEqual(len(report.taylor_poly), report.p)

    def test_n2_identity_on_small_grid(self):
        report = verify_main_theorem(get_model('N2'), [0.5, 1, 4])
        self.assertEqual(report.p, 1)
        for z, residual in zip(report.z_grid, report.residuals):
            self.assertLess(residual, 1e-8, msg=f'z={z}')

    def test_n2_closed_form_anchor(self):
        model = get_model('N2')
        anchor = (
            model.oracle('log_det_zeta_shifted')(mpmath.mpf(1))
            - model.oracle('log_det_zeta')
            - model.oracle('log_det_fredholm')(mpmath.mpf(1))
        )
        self.assertLess(abs(anchor), 1e-14)
        report = verify_main_theorem(model, [1])
        self.assertAlmostEqual(report.lhs[0], mpmath.log(2 * mpmath.sinh(mpmath.pi)), delta=1e-8)
        self.assertLess(report.residuals[0], 1e-8)

    def test_n1_linear_coefficient_is_euler_gamma(self):
        report = verify_main_theorem(get_model('N1'), [0.5, 1, 2])
        self.assertAlmostEqual(report.taylor_poly[0], LOG_2PI / 2, delta=1e-8)
        self.assertAlmostEqual(report.taylor_poly[1], mpmath.euler, delta=1e-7)
        self.assertLess(report.max_residual, 1e-7)

    def test_ho_at_one(self):
        report = verify_main_theorem(get_model('HO'), [1])
        self.assertLess(report.residuals[0], 1e-6)

    def test_complex_grid_point(self):
        report = verify_main_theorem(get_model('N2'), [mpmath.mpc(1, 1)])
        self.assertTrue(report.passed, msg=str(report.residuals))

    def test_kernel_is_rejected(self):
        with self.assertRaises(ContractViolation):
            verify_main_theorem(replace(get_model('N2'), dim_ker=1))

    def test_grid_must_be_in_right_half_plane(self):
        for grid in ([0.5, -1], [0], [mpmath.mpc(0, 1)]):
            with self.assertRaises(ContractViolation):
                verify_main_theorem(get_model('N2'), grid)

    def test_short_expansion_becomes_failed_rows(self):
        model = replace(get_model('N1'), heat_expansion=bernoulli_heat_expansion(0))
        report = verify_main_theorem(model, [1])
        self.assertFalse(report.passed)
        self.assertTrue(report.messages[0].startswith('Taylor data'))

    def test_repeated_runs_are_identical(self):
        first = verify_main_theorem(get_model('N2'), [0.5, 1])
        second = verify_main_theorem(get_model('N2'), [0.5, 1])
        self.assertEqual(first.lhs, second.lhs)
        self.assertEqual(first.rhs, second.rhs)


class NegativeControlTests(SimpleTestCase):
    def setUp(self):
        self.corrupted = corrupt_heat_coefficient(get_model('N1'), 0, 0, 1e-3)

    def test_corruption_moves_the_declared_coefficient(self):
        self.assertAlmostEqual(self.corrupted.heat_expansion.coefficient(0, 0), -0.499, delta=1e-15)
        self.assertEqual(self.corrupted.oracle('log_det_zeta'), get_model('N1').oracle('log_det_zeta'))

    def test_identity_fails(self):
        report = verify_main_theorem(self.corrupted)
        self.assertFalse(report.passed)
        self.assertGreater(report.max_residual, 1e-6)

    def test_every_check_flags_the_corruption(self):
        report = verify_model(self.corrupted)
        self.assertFalse(report.passed)
        self.assertEqual(report.log_det_zeta_check.status, FAIL)
        self.assertFalse(report.constant_term_check.passed)


class ConstantTermTests(SimpleTestCase):
    def test_catalog_constant_terms(self):
        for name in ('N1', 'N2', 'HO'):
            check = verify_constant_term(get_model(name))
            self.assertTrue(check.passed, msg=f'{name}: {check.difference} {check.log_difference} {check.message}')

    def test_n2_fitted_constant(self):
        check = verify_constant_term(get_model('N2'))
        self.assertAlmostEqual(check.fitted_constant, -LOG_2PI, delta=1e-3)
        self.assertAlmostEqual(check.minus_log_det_zeta, -LOG_2PI, delta=1e-8)

    def test_n1_constant_and_log_coefficient(self):
        check = verify_constant_term(get_model('N1'))
        self.assertAlmostEqual(check.fitted_constant, -LOG_2PI / 2, delta=1e-3)
        self.assertAlmostEqual(check.fitted_log, -0.5, delta=1e-3)
        self.assertEqual(check.heat_constant, -0.5)

    def test_ho_has_no_log_term(self):
        check = verify_constant_term(get_model('HO'))
        self.assertAlmostEqual(check.fitted_log, 0, delta=1e-3)
        self.assertEqual(check.heat_constant, 0)
        self.assertIn('condition', check.diagnostics)


class ReportWriterTests(SimpleTestCase):
    def setUp(self):
        self.report = verify_model(get_model('N2'), [1], fit=False)

    def test_rows(self):
        rows = self.report.rows
        self.assertEqual([row.check for row in rows], [LOG_DET_ZETA, MAIN_THEOREM])
        self.assertTrue(all(row.status == PASS for row in rows))
        self.assertIsNone(self.report.constant_term_check)

    def test_csv(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'out', 'report.csv')
            write_csv([self.report], path)
            with open(path, newline='') as f:
                rows = list(csv.reader(f))
        self.assertEqual(tuple(rows[0]), CSV_FIELDS)
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[1][:4], ['N2', LOG_DET_ZETA, '', ''])
        self.assertEqual(rows[2][:4], ['N2', MAIN_THEOREM, '1.0', '0.0'])
        self.assertEqual(rows[2][-1], PASS)
        self.assertEqual(list(csv_rows([self.report])), rows[1:])

    def test_json_payload(self):
        payload = json.loads(json.dumps(report_payload([self.report])))
        self.assertTrue(payload['passed'])
        data = payload['reports'][0]
        self.assertEqual(data['model'], 'N2')
        self.assertEqual(data['z_grid'], [1.0])
        self.assertAlmostEqual(data['taylor_poly'][0], float(LOG_2PI), places=8)
        self.assertEqual(len(data['rows']), 2)
        self.assertIsNone(data['constant_term_check'])

    def test_table(self):
        lines = format_table([self.report])
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[2].endswith(PASS))


class VerifyCommandTests(SimpleTestCase):
    def test_verify_n2(self):
        out, err = StringIO(), StringIO()
        call_command('verify', 'N2', stdout=out, stderr=err)
        payload = json.loads(out.getvalue())
        self.assertTrue(payload['passed'])
        self.assertIn('PASS', err.getvalue())

    def test_verify_writes_csv(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'n2.csv')
            call_command('verify', 'N2', '--no-fit', '--z', '1', '--csv', path, stdout=StringIO(), stderr=StringIO())
            with open(path, newline='') as f:
                self.assertEqual(len(list(csv.reader(f))), 3)

    def test_failure_raises(self):
        with self.assertRaises(CommandError):
            call_command('verify', 'N2', '--no-fit', '--z', '1', '--tol', '0', stdout=StringIO(), stderr=StringIO())

    def test_report_on_selected_models(self):
        out = StringIO()
        call_command('report', '--models', 'N2', 'HO', stdout=out, stderr=StringIO())
        payload = json.loads(out.getvalue())
        self.assertTrue(payload['passed'])
        self.assertEqual([report['model'] for report in payload['reports']], ['N2', 'HO'])


class CliTests(SimpleTestCase):
    def test_verify_passes(self):
        self.assertEqual(run_cli(['verify', 'N2']), 0)

    def test_usage_errors(self):
        self.assertEqual(run_cli([]), EXIT_USAGE)
        self.assertEqual(run_cli(['bogus']), EXIT_USAGE)
        self.assertEqual(run_cli(['fredholm', 'N2']), EXIT_USAGE)

    def test_numeric_failure_exit_code(self):
        self.assertEqual(run_cli(['verify', 'N2', '--no-fit', '--z', '1', '--tol', '0']), 1)

    def test_unknown_model(self):
        self.assertEqual(run_cli(['verify', 'N7']), 1)
