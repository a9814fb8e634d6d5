"""Exception hierarchy shared by every module.

Numerical failures (singular operators, oracle disagreement, a broken
internal identity) derive from :class:`NumericalFailure`; the CLI maps those
to exit code 3.
"""


class KaczmarzError(Exception):
    pass


class DimensionMismatch(KaczmarzError, ValueError):
    pass


class FieldMismatch(KaczmarzError, ValueError):
    pass


class IndexOutOfRange(KaczmarzError, IndexError):
    pass


class NotHermitian(KaczmarzError, ValueError):
    pass


class NotPositive(KaczmarzError, ValueError):
    pass


class NotPeriodic(KaczmarzError, ValueError):
    pass


class InvalidSequence(KaczmarzError, ValueError):
    pass


class HypothesisViolation(KaczmarzError, ValueError):
    pass


class SpanDeficiency(KaczmarzError, ValueError):
    pass


class NoPositiveOperator(KaczmarzError, ValueError):
    """No positive operator maps the analysis sequence onto the synthesis one."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class NumericalFailure(KaczmarzError, ArithmeticError):
    pass


class SingularOperator(NumericalFailure):
    pass


class NotAlmostEffective(NumericalFailure):
    pass


class OracleDisagreement(NumericalFailure):
    def __init__(self, message, radius=None, iteration_rate=None):
        super().__init__(message)
        self.radius = radius
        self.iteration_rate = iteration_rate


class IdentityViolation(NumericalFailure):
    pass
