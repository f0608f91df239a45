"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its documented exit statuses without a lookup table.
"""


class LpLabError(Exception):
    exit_code = 1


class NoNonzeroSingularValue(LpLabError, ValueError):
    pass


class InfeasibleAffine(LpLabError, ValueError):
    exit_code = 2


class InfeasibleSet(LpLabError, ValueError):
    exit_code = 2


class EvaluationError(LpLabError, ArithmeticError):
    pass


class AssumptionViolation(LpLabError):
    """The instance has no optimum, or one side has no non-optimal feasible point."""

    exit_code = 2


class UnboundedPrimal(AssumptionViolation):
    pass


class NotOnAffine(LpLabError, ValueError):
    pass


class NotUnique(LpLabError):
    pass


class NotApplicable(LpLabError):
    pass


class MissingParameter(LpLabError, ValueError):
    exit_code = 64


class InstanceTooLarge(LpLabError):
    exit_code = 3


class InvalidParameter(LpLabError, ValueError):
    exit_code = 64


class ParseError(LpLabError, ValueError):
    exit_code = 64

    def __init__(self, path, message="invalid value"):
        super().__init__(f"{path}: {message}")
        self.path = path


class GenerationFailed(LpLabError):
    pass
