"""Errors raised by the zetafred library."""


class ZetafredError(ValueError):
    """Base class for all library errors."""


class ContractViolation(ZetafredError):
    """Operands do not satisfy an operation's preconditions."""


class InsufficientExpansionError(ZetafredError):
    """A declared expansion is not complete to the order an operation needs."""

    def __init__(self, message, required=None, cutoff=None):
        super().__init__(message)
        self.required = required
        self.cutoff = cutoff


class QuadratureError(ZetafredError):
    """Adaptive quadrature did not reach the requested accuracy."""

    def __init__(self, message, value=None, error=None, interval=None):
        super().__init__(message)
        self.value = value
        self.error = error
        self.interval = interval


class GammaPoleError(ZetafredError):
    """Gamma evaluated at one of its poles."""

    def __init__(self, pole_data):
        super().__init__(
            f'Gamma has a pole at s = {-pole_data.n} '
            f'(residue {pole_data.residue}, finite part {pole_data.finite_part})'
        )
        self.pole_data = pole_data


class HurwitzPoleError(ZetafredError):
    """Hurwitz zeta evaluated at s = 1."""

    def __init__(self, a, finite_part):
        super().__init__(f'Hurwitz zeta has a pole at s = 1 for a = {a}')
        self.residue = 1
        self.finite_part = finite_part


class ModelRejected(ZetafredError):
    """A spectrum model violates one of the model invariants."""

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = errors or {}


class HeatTraceError(ZetafredError):
    """The heat trace cannot be summed to the requested tolerance."""


class ConsistencyError(ZetafredError):
    """Two independent computations of the same quantity disagree."""

    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second


class FitConditioningError(ZetafredError):
    """The least-squares basis is too ill-conditioned on the sample grid."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition
