from dataclasses import dataclass, field

import mpmath


@dataclass(frozen=True)
class ComparisonRow:
    key: str
    predicted: object
    observed: object
    tolerance: float = None

    @property
    def error(self):
        return abs(mpmath.mpmathify(self.predicted) - mpmath.mpmathify(self.observed))

    @property
    def ok(self):
        return self.tolerance is None or self.error <= self.tolerance


@dataclass(frozen=True)
class ExpansionComparison:
    """Predicted against measured expansion data, with the verdict of the check that produced it."""

    label: str
    rows: tuple = ()
    passed: bool = True
    slope: float = None
    expected_slope: float = None
    message: str = ''
    diagnostics: dict = field(default_factory=dict)

    @property
    def max_error(self):
        return max((row.error for row in self.rows), default=mpmath.mpf(0))

    @property
    def failed_rows(self):
        return [row for row in self.rows if not row.ok]
