"""Exception hierarchy.

Every error carries a short machine-readable ``code`` used by the CLI's
standard-error JSON.  Input problems derive from :class:`ValidationError`,
numerical breakdowns from :class:`NumericalError`.
"""


class BeamsplitError(Exception):
    code = "error"


class ValidationError(BeamsplitError, ValueError):
    code = "validation"


class NumericalError(BeamsplitError, ArithmeticError):
    code = "numerical"


class NegativeMass(ValidationError):
    code = "negative_mass"


class MassDeficit(ValidationError):
    code = "mass_deficit"


class DomainError(ValidationError):
    code = "domain"


class EtaZero(DomainError):
    code = "eta_zero"


class ZeroMean(ValidationError):
    code = "zero_mean"


class NotAPmf(NumericalError):
    code = "not_a_pmf"


class PrecisionExhausted(NumericalError):
    code = "precision_exhausted"


class MomentOverflow(NumericalError, OverflowError):
    code = "overflow"


class Divergent(NumericalError):
    code = "divergent"


class ConvergenceFailure(NumericalError):
    code = "convergence_failure"


class StepFailure(NumericalError):
    code = "step_failure"

    def __init__(self, message, last_good_eta=None):
        super().__init__(message)
        self.last_good_eta = last_good_eta


class NonIntegrable(NumericalError):
    code = "non_integrable"
