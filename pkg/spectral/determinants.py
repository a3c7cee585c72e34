"""log det_ζ(L) = −ζ'(0;L) by two routes, shifted determinants and Taylor data at z = 0."""
import logging
from dataclasses import dataclass

import mpmath

from special.functions import cauchy_taylor, harmonic, to_mp
from zetafred.conf import zetafred_setting
from zetafred.exceptions import ConsistencyError, ContractViolation
from .zeta import (
    declared_expansion, laplace_mellin, split_mellin, uses_laplace, zeta,
    zeta_pf_at_positive_integer,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZetaDeterminant:
    value: object
    route_heat: object
    route_derivative: object
    residual: object
    window_bound: object = 0


def richardson_limit(steps, values):
    """Value at h = 0 of d + c_1 h² + c_2 h⁴ + … through the sampled points."""
    size = len(steps)
    matrix = mpmath.matrix(size, size)
    for i, h in enumerate(steps):
        for j in range(size):
            matrix[i, j] = mpmath.mpf(h) ** (2 * j)
    return mpmath.lu_solve(matrix, mpmath.matrix(list(values)))[0]


def heat_mellin(spectrum):
    """(A^H_00 − dim ker, ⨍₀^∞ t^(−1)(tr e^(−tL) − dim ker) dt) with the window estimate."""
    expansion = declared_expansion(spectrum)
    if uses_laplace(spectrum):
        return expansion.coefficient(0, 0), laplace_mellin(spectrum, 0)
    return expansion.coefficient(0, 0) - spectrum.dim_ker, split_mellin(spectrum, 0)


def heat_route(spectrum):
    """−[γ·(A^H_00 − dim ker) + ⨍₀^∞ t^(−1)(tr e^(−tL) − dim ker) dt]."""
    residue, finite = heat_mellin(spectrum)
    return -(mpmath.euler * residue + finite.value)


def derivative_route(spectrum, steps=None):
    """−ζ'(0) from central differences of ζ at ±h, extrapolated in h²."""
    steps = zetafred_setting('DERIVATIVE_STEPS') if steps is None else steps
    differences = []
    for h in steps:
        h = mpmath.mpf(h)
        differences.append((zeta(spectrum, h).value - zeta(spectrum, -h).value) / (2 * h))
    return -richardson_limit(steps, differences)


def _spectrum(model, z):
    z = mpmath.mpmathify(z)
    return model if z == 0 else model.shifted(z)


def determinant_routes(model, z=0):
    """Both evaluations of log det_ζ(L+z) with their disagreement."""
    spectrum = _spectrum(model, z)
    residue, finite = heat_mellin(spectrum)
    heat = -(mpmath.euler * residue + finite.value)
    derivative = derivative_route(spectrum)
    residual = abs(heat - derivative)
    logger.debug(
        f'log det_zeta of {spectrum.name}: heat route {heat}, derivative route {derivative}, '
        f'residual {residual}, window bound {finite.window_bound}'
    )
    return ZetaDeterminant(heat, heat, derivative, residual, finite.window_bound)


def _checked(routes, name, tol):
    tol = zetafred_setting('ROUTE_TOL') if tol is None else tol
    if routes.residual > tol:
        logger.error(f'Determinant routes disagree for {name}: residual {routes.residual} > {tol}')
        raise ConsistencyError(
            f'Heat route {routes.route_heat} and derivative route {routes.route_derivative} '
            f'of log det_zeta({name}) differ by {routes.residual}',
            first=routes.route_heat, second=routes.route_derivative,
        )
    return routes.value


def log_det_zeta(model, tol=None):
    """log det_ζ(L) = −ζ'(0;L), checked across both routes."""
    return _checked(determinant_routes(model), model.name, tol)


def log_det_zeta_shifted(model, z, tol=None):
    """log det_ζ(L+z) for Re z > −λ₁."""
    return _checked(determinant_routes(model, z), f'{model.name}+{z}', tol)


def taylor_sign(n):
    """Sign in front of the bracket of taylor_log_det_zeta; pinned by calibrate_taylor_sign on N1."""
    return (-1) ** (n + 1)


def taylor_bracket(model, n):
    """(n−1)!·Pf_{s=n} ζ(s;L) + A^H_{−n,0}·L_{n−1}."""
    _, finite = zeta_pf_at_positive_integer(model, n)
    coefficient = declared_expansion(model).coefficient(-n, 0)
    return mpmath.factorial(n - 1) * finite + coefficient * to_mp(harmonic(n - 1))


def taylor_log_det_zeta(model, n):
    """dⁿ/dzⁿ log det_ζ(L+z) at z = 0."""
    if n < 1:
        raise ContractViolation('Taylor data is defined for n >= 1')
    if model.dim_ker:
        raise ContractViolation('log det_zeta(L+z) is holomorphic at z = 0 only for invertible L')
    return taylor_sign(n) * taylor_bracket(model, n)


def taylor_polynomial(model, degree):
    """Taylor coefficients [c_0, …, c_degree] of log det_ζ(L+z) at 0, c_j = (d^j/dz^j)/j!."""
    coefficients = [log_det_zeta(model)]
    for j in range(1, degree + 1):
        coefficients.append(taylor_log_det_zeta(model, j) / mpmath.factorial(j))
    return coefficients


def evaluate_polynomial(coefficients, z):
    return mpmath.polyval(list(reversed(coefficients)), z)


def sampled_derivatives(model, count, radius=None, points=24):
    """Derivatives of the heat-route log det_ζ(L+z) at 0 from samples on |z| = radius."""
    radius = model.first_eigenvalue / 4 if radius is None else radius
    coefficients = cauchy_taylor(
        lambda z: heat_route(_spectrum(model, z)), 0, radius, count, points=points,
    )
    return [mpmath.factorial(n) * c for n, c in enumerate(coefficients)]


def calibrate_taylor_sign(model, n, radius=None, points=24):
    """Measured sign σ_n with dⁿ/dzⁿ log det_ζ(L+z)|₀ = σ_n·bracket, and the measured derivative."""
    measured = sampled_derivatives(model, n + 1, radius, points)[n]
    bracket = taylor_bracket(model, n)
    sign = 1 if mpmath.re(measured / bracket) > 0 else -1
    logger.info(f'Taylor sign for n={n} on {model.name}: {sign} (measured {measured}, bracket {bracket})')
    return sign, measured
