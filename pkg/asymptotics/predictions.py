"""Large-z expansions predicted from the heat coefficients of a model."""
import logging
from dataclasses import dataclass, field

import mpmath

from expansions.regint import integrate
from expansions.terms import AT_INFINITY, AT_ZERO, AsymptoticExpansion, Exponent, ExpansionTerm
from fredholm.products import resolvent_power_trace
from special.functions import gamma_pole_data, harmonic, pf_dgamma, pf_drgamma, to_mp
from spectral.determinants import taylor_polynomial
from spectral.zeta import declared_expansion
from zetafred.conf import zetafred_setting
from zetafred.exceptions import ContractViolation
from zetafred.precision import quadrature_tol

logger = logging.getLogger(__name__)

PREDICTED = 'predicted'
FITTED = 'fitted'

PROVENANCE_CHOICES = [
    (PREDICTED, 'Predicted from heat coefficients'),
    (FITTED, 'Fitted to numerical samples'),
]


def term_label(alpha, k):
    alpha = Exponent.of(alpha)
    parts = []
    if alpha.re or alpha.im:
        parts.append(f'z^({-alpha})')
    if k:
        parts.append('log z' if k == 1 else f'log^{k} z')
    return ' '.join(parts) or '1'


@dataclass(frozen=True)
class LargeZExpansion:
    """Σ c·z^(−α)·log^k z as z → ∞.

    ``expansion`` holds the same terms as x^(−α) at infinity; ``sources`` maps each
    (α, k) to the heat coefficients and rules it was computed from.
    """

    expansion: AsymptoticExpansion
    provenance: str = PREDICTED
    sources: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def from_items(cls, items, cutoff=None, provenance=PREDICTED, diagnostics=None):
        """Build from (alpha, k, coeff) or (alpha, k, coeff, source) items in the z^(−α) convention."""
        raw = []
        sources = {}
        for item in items:
            alpha, k, coeff = Exponent.of(item[0]), item[1], item[2]
            raw.append((-alpha, k, coeff))
            if len(item) > 3:
                sources.setdefault((alpha, k), []).append(item[3])
        expansion = AsymptoticExpansion.from_terms(AT_INFINITY, raw, cutoff)
        present = {(-t.alpha, t.k) for t in expansion.terms}
        sources = {key: tuple(labels) for key, labels in sources.items() if key in present}
        return cls(expansion, provenance, sources, diagnostics or {})

    @property
    def terms(self):
        """Terms with ``alpha`` the exponent of z^(−α), in increasing α."""
        return tuple(sorted(
            (ExpansionTerm(-t.alpha, t.k, t.coeff) for t in self.expansion.terms),
            key=lambda term: (term.alpha, -term.k),
        ))

    @property
    def cutoff(self):
        return self.expansion.cutoff

    def keys(self):
        return [term.key for term in self.terms]

    def coefficient(self, alpha, k=0):
        return self.expansion.coefficient(-Exponent.of(alpha), k)

    def evaluate(self, z):
        return self.expansion.evaluate(z)

    def truncate(self, order):
        """Keep the terms with Re α ≤ order."""
        expansion = self.expansion.truncate(order)
        present = {(-t.alpha, t.k) for t in expansion.terms}
        sources = {key: labels for key, labels in self.sources.items() if key in present}
        return LargeZExpansion(expansion, self.provenance, sources, dict(self.diagnostics))

    def plus(self, items):
        """This expansion plus exact (alpha, k, coeff, source) items."""
        items = list(items)
        current = [(term.alpha, term.k, term.coeff) for term in self.terms]
        result = LargeZExpansion.from_items(current + items, self.expansion.cutoff, self.provenance)
        sources = dict(self.sources)
        for item in items:
            if len(item) > 3:
                key = (Exponent.of(item[0]), item[1])
                sources[key] = sources.get(key, ()) + (item[3],)
        present = set(result.keys())
        sources = {key: labels for key, labels in sources.items() if key in present}
        return LargeZExpansion(result.expansion, self.provenance, sources)


def _group_by_exponent(expansion, offset=0):
    groups = {}
    for term in expansion.terms:
        groups.setdefault(term.alpha + offset, {})[term.k] = term.coeff
    return sorted(groups.items())


def _watson_coefficient(coefficients, alpha, k, sign=1):
    # (−1)^k Σ_{j≥k} A_j·C(j, k)·(Pf ∂^(j−k) Γ)(α)
    return sign * (-1) ** k * mpmath.fsum(
        a * mpmath.binomial(j, k) * pf_dgamma(j - k, alpha.value)
        for j, a in coefficients.items()
        if j >= k
    )


def _infinity_cutoff(expansion, offset):
    return None if expansion.cutoff is None else expansion.cutoff + offset


def watson_regint(q_expansion, label='q'):
    """Large-z expansion of ⨍₀^∞ e^(−zt) q(t) dt from the expansion of q at 0.

    A term A·t^(α−1)·log^k t of q gives z^(−α) log^i z terms through the derivatives of Γ
    at α, plus a z^n log^(k+1) z term when α = −n.
    """
    if not q_expansion.at_zero:
        raise ContractViolation('Watson expansion needs the expansion of q at t -> 0+')
    items = []
    for alpha, coefficients in _group_by_exponent(q_expansion, offset=1):
        for k in range(max(coefficients) + 1):
            items.append((alpha, k, _watson_coefficient(coefficients, alpha, k), f'{label} at t^{alpha - 1}'))
        n = alpha.nonpositive_integer()
        if n is not None:
            residue = to_mp(gamma_pole_data(n).residue)
            for k, a in coefficients.items():
                items.append((
                    alpha, k + 1, a * (-1) ** (k + 1) * residue / (k + 1),
                    f'{label} at t^{alpha - 1}, pole of Gamma at {alpha}',
                ))
    return LargeZExpansion.from_items(items, _infinity_cutoff(q_expansion, 1))


def predict_log_det_zeta_expansion(model):
    """Large-z expansion of log det_ζ(L+z); its z^0 coefficient is zero."""
    heat = declared_expansion(model)
    items = []
    for alpha, coefficients in _group_by_exponent(heat):
        n = alpha.nonpositive_integer()
        if n is None:
            for k in range(max(coefficients) + 1):
                items.append((
                    alpha, k, _watson_coefficient(coefficients, alpha, k, sign=-1),
                    f'heat coefficients at t^{alpha}',
                ))
        elif n == 0:
            items.append((0, 1, coefficients.get(0, 0), 'A^H_00'))
        else:
            residue = to_mp(gamma_pole_data(n).residue)
            a = coefficients.get(0, 0)
            items.append((-n, 1, a * residue, f'A^H_-{n},0 with Res Gamma(-{n})'))
            items.append((-n, 0, -a * residue * to_mp(harmonic(n)), f'A^H_-{n},0 with L_{n}'))
    prediction = LargeZExpansion.from_items(items, heat.cutoff)
    if prediction.coefficient(0, 0) != 0:
        raise ContractViolation(f'Constant term of the log det_zeta expansion of {model.name} is nonzero')
    logger.debug(f'Predicted log det_zeta expansion of {model.name}: {len(prediction.terms)} terms')
    return prediction


def predict_resolvent_expansion(model, N):
    """Large-z expansion of tr (L+z)^(−N) = (1/(N−1)!)·∫₀^∞ t^(N−1)·e^(−zt)·tr e^(−tL) dt."""
    if N < model.schatten_p:
        raise ContractViolation(f'tr (L+z)^(-{N}) needs N >= p = {model.schatten_p}')
    q = declared_expansion(model).shift(N - 1).scale(1 / mpmath.factorial(N - 1))
    return watson_regint(q, label=f'heat coefficients of {model.name} (N={N})')


def heat_from_resolvent(resolvent, N):
    """Heat coefficients recovered from the large-z expansion of tr (L+z)^(−N).

    A^H_{αk} = (N−1)!·Σ_{m≥k} A^R_{βm}·(−1)^m·C(m, k)·(1/Γ)^(m−k)(β) with β = α + N.
    """
    items = []
    for beta, coefficients in _group_by_exponent(resolvent.expansion):
        beta = -beta
        if beta.nonpositive_integer() is not None:
            raise ContractViolation(f'Resolvent term z^({-beta}) has no heat counterpart for N={N}')
        for k in range(max(coefficients) + 1):
            value = mpmath.factorial(N - 1) * mpmath.fsum(
                a * (-1) ** m * mpmath.binomial(m, k) * pf_drgamma(m - k, beta.value)
                for m, a in coefficients.items()
                if m >= k
            )
            items.append((beta - N, k, value))
    cutoff = None if resolvent.cutoff is None else resolvent.cutoff - N
    return AsymptoticExpansion.from_terms(AT_ZERO, items, cutoff)


def predict_fredholm_expansion(model):
    """Large-z expansion of log det_p(I + zL⁻¹) = log det_ζ(L+z) − Σ_{j<p} c_j z^j."""
    coefficients = taylor_polynomial(model, model.schatten_p - 1)
    polynomial = [
        (-j, 0, -c, 'log det_zeta(L)' if j == 0 else f'Taylor coefficient c_{j}')
        for j, c in enumerate(coefficients)
    ]
    return predict_log_det_zeta_expansion(model).plus(polynomial)


def _tail_integral(a, m, Z):
    """∫_Z^∞ z^(−a−1)·log^m z dz for Re a > 0."""
    log_z = mpmath.log(Z)
    # I_m = Z^(−a)·log^m Z / a + (m/a)·I_{m−1}
    value = Z ** (-a) / a
    for j in range(1, m + 1):
        value = Z ** (-a) * log_z ** j / a + j * value / a
    return value


def zeta_from_resolvent(model, s, N):
    """ζ(s;L) = Γ(N)/(Γ(s)Γ(N−s))·∫₀^∞ z^(N−1−s)·tr (L+z)^(−N) dz.

    Valid between the abscissa of convergence of Σ λ^(−s) and N. The integral beyond
    RESOLVENT_SPLIT uses the predicted resolvent expansion in closed form.
    """
    s = mpmath.mpmathify(s)
    expansion = predict_resolvent_expansion(model, N)
    abscissa = max((float(-t.alpha.re) for t in declared_expansion(model).terms if t.alpha.re < 0), default=0)
    if not abscissa < mpmath.re(s) < N:
        raise ContractViolation(f'zeta from tr(L+z)^(-{N}) needs {abscissa} < Re s < {N}, got s = {s}')
    split = mpmath.mpf(zetafred_setting('RESOLVENT_SPLIT'))
    near = integrate(
        lambda z: mpmath.power(z, N - 1 - s) * resolvent_power_trace(model, z, N),
        [0, 1, split], quadrature_tol(), 'resolvent integral',
    )
    far = mpmath.fsum(
        term.coeff * _tail_integral(term.alpha.value + s - N, term.k, split)
        for term in expansion.terms
    )
    prefactor = mpmath.gamma(N) * mpmath.rgamma(s) * mpmath.rgamma(N - s)
    return prefactor * (near + far)
