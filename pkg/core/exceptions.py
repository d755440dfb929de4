"""
Exception hierarchy shared by every ergolab app.

Each error carries a stable machine-readable ``code`` and the exit status the
command-line surface maps it to.
"""


class ErgolabError(Exception):
    """Base class for all domain errors"""
    code = 'ergolab-error'
    exit_code = 1

    def __init__(self, message='', **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def as_dict(self):
        return {
            'code': self.code,
            'type': type(self).__name__,
            'message': self.message,
            'details': self.details,
        }


class ValidationFailure(ErgolabError):
    """Input that violates an operation's precondition"""
    code = 'validation-failure'
    exit_code = 1


class AlphabetMismatch(ValidationFailure):
    code = 'alphabet-mismatch'


class WindowOverrun(ValidationFailure):
    code = 'window-overrun'


class IllegalWord(ValidationFailure):
    code = 'illegal-word'


class InvalidParameters(ValidationFailure):
    code = 'invalid-parameters'


class InsufficientDepth(ValidationFailure):
    code = 'insufficient-depth'


class SingularMatrix(ValidationFailure):
    code = 'singular-matrix'


class NonPeriodicMeasure(ValidationFailure):
    code = 'non-periodic-measure'


class InfeasibleTargets(ValidationFailure):
    code = 'infeasible-targets'


class LegalityViolation(ValidationFailure):
    """A built word failed its legality re-check (planner bug)"""
    code = 'legality-violation'


class BudgetExhausted(ErgolabError):
    """A resource guard stopped the computation"""
    code = 'budget-exhausted'
    exit_code = 2


class CapExceeded(BudgetExhausted):
    code = 'cap-exceeded'


class BudgetExceeded(BudgetExhausted):
    code = 'budget-exceeded'


class AcceptanceFailure(ErgolabError):
    code = 'acceptance-failure'
    exit_code = 3
