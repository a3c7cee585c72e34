"""CSV, JSON and text renderings of determinant reports."""
import csv
import os

import mpmath

from .checks import CSV_FIELDS
from .serializers import DeterminantReportSerializer


def _number(value):
    return '' if value is None else repr(float(value))


def csv_rows(reports):
    """model,check,z_re,z_im,lhs,rhs,residual,status rows in report order."""
    for report in reports:
        for row in report.rows:
            z = None if row.z is None else mpmath.mpmathify(row.z)
            yield [
                report.model,
                row.check,
                '' if z is None else _number(mpmath.re(z)),
                '' if z is None else _number(mpmath.im(z)),
                _number(None if row.lhs is None else mpmath.re(row.lhs)),
                _number(None if row.rhs is None else mpmath.re(row.rhs)),
                _number(row.residual),
                row.status,
            ]


def _ensure_directory(path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def write_csv(reports, path):
    _ensure_directory(path)
    with open(path, 'w', newline='') as csvfile:
        writer = csv.writer(csvfile)
        writer.writerow(CSV_FIELDS)
        for row in csv_rows(reports):
            writer.writerow(row)


def report_payload(reports):
    return {
        'passed': all(report.passed for report in reports),
        'reports': DeterminantReportSerializer(reports, many=True).data,
    }


def format_table(reports):
    """Fixed-width table with one line per check."""
    lines = [f'{"model":<12} {"check":<14} {"z":>10} {"residual":>12} {"tolerance":>10}  status']
    for report in reports:
        for row in report.rows:
            z = '' if row.z is None else mpmath.nstr(row.z, 6)
            residual = 'n/a' if row.residual is None else f'{float(row.residual):.3e}'
            line = f'{report.model:<12} {row.check:<14} {z:>10} {residual:>12} {row.tolerance:>10.1e}  {row.status}'
            if row.message and not row.passed:
                line += f'  ({row.message})'
            lines.append(line)
    return lines
