"""Exception hierarchy.

Errors split into two families so the command line can map them onto exit
codes: ``InputError`` (bad data or usage, exit 2) and ``CheckFailed`` (a
mathematical condition was violated, exit 1).
"""


class ArtifactError(Exception):
    exit_code = 2


class InputError(ArtifactError):
    exit_code = 2


class CheckFailed(ArtifactError):
    exit_code = 1

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonFinite(InputError):
    pass


class BadPrime(InputError):
    pass


class ParentMismatch(InputError):
    pass


class NotAUnit(CheckFailed):
    pass


class NotInIdeal(CheckFailed):
    pass


class NoPD(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class RelationViolated(CheckFailed):
    pass


class BudgetExceeded(InputError):
    pass


class BaseMismatch(InputError):
    pass


class InsufficientPrecision(InputError):
    pass


class NotInVImage(CheckFailed):
    pass


class KernelMismatch(CheckFailed):
    pass


class NotAFrameHom(CheckFailed):
    pass


class DatumInvalid(CheckFailed):
    pass


class NotFinite(InputError):
    pass


class NotAdmissible(CheckFailed):
    pass


class PrecisionExhausted(CheckFailed):
    pass


class NotALift(CheckFailed):
    pass


class CoefficientExtractionFailed(CheckFailed):
    pass


class NotEqualOverR(CheckFailed):
    pass


class BijectionFailure(CheckFailed):
    pass


class CrystalInvalid(CheckFailed):
    pass


class ParseError(InputError):
    pass
