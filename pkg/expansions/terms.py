"""Formal asymptotic expansions with terms c·x^α·log^k x."""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

import mpmath

from zetafred.exceptions import ContractViolation

AT_ZERO = 'at_zero'
AT_INFINITY = 'at_infinity'

DIRECTION_CHOICES = [
    (AT_ZERO, 'x -> 0+'),
    (AT_INFINITY, 'x -> infinity'),
]


def rational(value):
    """Exact rational for an exponent part; binary floats convert without rounding."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, mpmath.mpf):
        if not mpmath.isfinite(value):
            return Fraction(float(value))
        man, exp = value.man_exp
        return Fraction(int(man)) * Fraction(2) ** int(exp)
    return Fraction(value)


@dataclass(frozen=True, order=True)
class Exponent:
    """An exact complex exponent α = re + i·im."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, value):
        if isinstance(value, Exponent):
            return value
        if isinstance(value, tuple):
            return cls(rational(value[0]), rational(value[1]))
        if isinstance(value, (complex, mpmath.mpc)):
            return cls(rational(value.real), rational(value.imag))
        if isinstance(value, str) and 'j' in value:
            return cls.of(complex(value))
        return cls(rational(value))

    @property
    def value(self):
        if self.im == 0:
            return mpmath.mpf(self.re.numerator) / self.re.denominator
        return mpmath.mpc(
            mpmath.mpf(self.re.numerator) / self.re.denominator,
            mpmath.mpf(self.im.numerator) / self.im.denominator,
        )

    @property
    def is_real(self):
        return self.im == 0

    @property
    def is_integer(self):
        return self.im == 0 and self.re.denominator == 1

    def nonpositive_integer(self):
        """Return n when α = −n with n ≥ 0, else None."""
        if self.is_integer and self.re <= 0:
            return int(-self.re)
        return None

    def __add__(self, other):
        other = Exponent.of(other)
        return Exponent(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return self + (-Exponent.of(other))

    def __neg__(self):
        return Exponent(-self.re, -self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f'{self.re}{"+" if self.im >= 0 else "-"}{abs(self.im)}i'


def coefficient(value):
    """Normalize a coefficient to an mpmath number at the working precision."""
    value = mpmath.mpmathify(value)
    if isinstance(value, mpmath.mpc) and value.imag == 0:
        return value.real
    return value


@dataclass(frozen=True)
class ExpansionTerm:
    alpha: Exponent
    k: int
    coeff: object

    @property
    def key(self):
        return (self.alpha, self.k)

    @property
    def re_alpha(self):
        return self.alpha.re

    @property
    def im_alpha(self):
        return self.alpha.im

    @property
    def re_c(self):
        return mpmath.re(self.coeff)

    @property
    def im_c(self):
        return mpmath.im(self.coeff)

    def evaluate(self, x):
        x = mpmath.mpmathify(x)
        value = self.coeff * mpmath.power(x, self.alpha.value)
        if self.k:
            value *= mpmath.log(x) ** self.k
        return value


def _as_cutoff(cutoff):
    if cutoff is None or cutoff == math.inf:
        return None
    return float(cutoff)


def _cutoff_value(cutoff):
    return math.inf if cutoff is None else cutoff


def merge_terms(items):
    """Sum raw (alpha, k, coeff) items into a sorted tuple of nonzero ExpansionTerms."""
    totals = {}
    for alpha, k, coeff in items:
        if k < 0:
            raise ContractViolation(f'Log power must be non-negative, got {k}')
        key = (Exponent.of(alpha), int(k))
        totals[key] = totals.get(key, 0) + coefficient(coeff)
    return tuple(
        ExpansionTerm(alpha, k, coefficient(c))
        for (alpha, k), c in sorted(totals.items())
        if c != 0
    )


@dataclass(frozen=True)
class AsymptoticExpansion:
    """Finite sum Σ c·x^α·log^k x, complete for Re α ≤ cutoff (at zero) or Re α ≥ −cutoff (at infinity).

    A cutoff of None means the expansion is complete to every order.
    """

    direction: str
    terms: tuple = ()
    cutoff: float = None

    def __post_init__(self):
        if self.direction not in (AT_ZERO, AT_INFINITY):
            raise ContractViolation(f'Unknown expansion direction: {self.direction}')
        object.__setattr__(self, 'cutoff', _as_cutoff(self.cutoff))

    @classmethod
    def from_terms(cls, direction, terms=(), cutoff=None):
        """Build from ExpansionTerms, (alpha, k, coeff) triples or a {(alpha, k): coeff} mapping."""
        if hasattr(terms, 'items'):
            items = [(alpha, k, c) for (alpha, k), c in terms.items()]
        else:
            items = [
                (t.alpha, t.k, t.coeff) if isinstance(t, ExpansionTerm) else t
                for t in terms
            ]
        return cls(direction, merge_terms(items), cutoff)

    @classmethod
    def zero(cls, direction, cutoff=None):
        return cls(direction, (), cutoff)

    @property
    def at_zero(self):
        return self.direction == AT_ZERO

    @property
    def cutoff_value(self):
        return _cutoff_value(self.cutoff)

    def is_complete_for(self, re_alpha):
        """True when the coefficients for exponents with this real part are all declared."""
        if self.at_zero:
            return re_alpha <= self.cutoff_value
        return re_alpha >= -self.cutoff_value

    def as_dict(self):
        return {term.key: term.coeff for term in self.terms}

    def coefficient(self, alpha, k=0):
        key = (Exponent.of(alpha), k)
        for term in self.terms:
            if term.key == key:
                return term.coeff
        return mpmath.mpf(0)

    def exponents(self):
        return sorted({term.alpha for term in self.terms})

    def max_log_power(self, alpha):
        alpha = Exponent.of(alpha)
        powers = [term.k for term in self.terms if term.alpha == alpha]
        return max(powers) if powers else None

    def real_exponent_range(self):
        reals = [term.alpha.re for term in self.terms]
        if not reals:
            return None
        return min(reals), max(reals)

    def evaluate(self, x):
        """Value of the truncated sum at a real point x > 0."""
        x = mpmath.mpmathify(x)
        if isinstance(x, mpmath.mpc) or x <= 0:
            raise ContractViolation('Expansions are evaluated only at real x > 0')
        log_x = mpmath.log(x)
        total = mpmath.mpf(0)
        for term in self.terms:
            value = term.coeff * mpmath.power(x, term.alpha.value)
            if term.k:
                value *= log_x ** term.k
            total += value
        return total

    def scale(self, factor):
        factor = coefficient(factor)
        if factor == 0:
            return AsymptoticExpansion.zero(self.direction, self.cutoff)
        return AsymptoticExpansion(
            self.direction,
            merge_terms((t.alpha, t.k, t.coeff * factor) for t in self.terms),
            self.cutoff,
        )

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        from .algebra import add
        return add(self, other)

    def __sub__(self, other):
        from .algebra import add
        return add(self, -other)

    def __mul__(self, other):
        from .algebra import multiply
        return multiply(self, other)

    def shift(self, gamma):
        """Multiply by x^γ."""
        gamma = Exponent.of(gamma)
        cutoff = self.cutoff
        if cutoff is not None:
            cutoff = cutoff + float(gamma.re) if self.at_zero else cutoff - float(gamma.re)
        return AsymptoticExpansion(
            self.direction,
            merge_terms((t.alpha + gamma, t.k, t.coeff) for t in self.terms),
            cutoff,
        )

    def truncate(self, order):
        """Keep only the terms with Re α ≤ order (at zero) or Re α ≥ −order (at infinity)."""
        if self.at_zero:
            kept = tuple(t for t in self.terms if t.alpha.re <= order)
        else:
            kept = tuple(t for t in self.terms if t.alpha.re >= -order)
        return AsymptoticExpansion(self.direction, kept, min(self.cutoff_value, order))

    def dilate(self, lam):
        """Expansion of u ↦ λ·f(λu) given the expansion of f."""
        lam = mpmath.mpmathify(lam)
        if lam <= 0:
            raise ContractViolation('Dilation factor must be positive')
        log_lam = mpmath.log(lam)
        items = []
        for term in self.terms:
            prefactor = term.coeff * mpmath.power(lam, term.alpha.value + 1)
            for j in range(term.k + 1):
                items.append((
                    term.alpha,
                    j,
                    prefactor * mpmath.binomial(term.k, j) * log_lam ** (term.k - j),
                ))
        return AsymptoticExpansion(self.direction, merge_terms(items), self.cutoff)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


@dataclass(frozen=True)
class LaurentData:
    """Laurent coefficients of a meromorphic function at ``location``.

    ``coeffs[m]`` is the coefficient of (z − a)^(−m); m > 0 is the principal part and
    m = 0 the finite part, which is absent when only the principal part is known.
    """

    location: object
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {
            int(m): coefficient(c)
            for m, c in self.coeffs.items()
            if m <= 0 or c != 0
        }
        object.__setattr__(self, 'coeffs', MappingProxyType(cleaned))

    @property
    def order(self):
        principal = [m for m, c in self.coeffs.items() if m > 0 and c != 0]
        return max(principal) if principal else 0

    @property
    def is_regular(self):
        return self.order == 0

    @property
    def residue(self):
        return self.coefficient(1)

    @property
    def finite_part(self):
        return self.coeffs.get(0)

    def coefficient(self, m):
        return self.coeffs.get(m, mpmath.mpf(0))

    def principal_value(self, point):
        """Value of the principal part at ``point``."""
        offset = mpmath.mpmathify(point) - self.location
        return mpmath.fsum(
            c / offset ** m for m, c in self.coeffs.items() if m > 0
        )

    def times_series(self, series):
        """Laurent data of the product with a holomorphic function given by Taylor coefficients at the same point."""
        order = self.order
        if len(series) < order + 1:
            raise ContractViolation(
                f'Need {order + 1} Taylor coefficients to multiply a pole of order {order}'
            )
        coeffs = {}
        for m in range(order, 0, -1):
            coeffs[m] = mpmath.fsum(
                self.coefficient(j) * series[j - m] for j in range(m, order + 1)
            )
        if self.finite_part is not None:
            coeffs[0] = mpmath.fsum(
                self.coeffs.get(j, 0) * series[j] for j in range(0, order + 1)
            )
        return LaurentData(self.location, coeffs)
