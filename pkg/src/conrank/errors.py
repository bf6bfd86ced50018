"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class ConrankError(Exception):
    exit_code = 70


class FieldError(ConrankError):
    exit_code = 71


class FieldReductionImpossible(FieldError):
    pass


class WindowError(ConrankError):
    exit_code = 72


class DegreeWindowTooSmall(WindowError):
    pass


class WindowTooShort(WindowError):
    pass


class WindowMismatch(WindowError):
    pass


class NonLinearInput(ConrankError):
    exit_code = 73


class ResolutionError(ConrankError):
    exit_code = 74


class NotFinitelyGeneratedInWindow(ResolutionError):
    pass


class InsufficientChain(ResolutionError):
    pass


class PurityCheckFailed(ConrankError):
    exit_code = 75


class ReductionError(ConrankError):
    exit_code = 76


class MuNotSurjective(ReductionError):
    pass


class NoSurjectionFound(ReductionError):
    pass


class BundleError(ConrankError):
    exit_code = 77


class DegenerateSample(BundleError):
    pass


class MonadConditionFailed(BundleError):
    pass


class RankVerifyError(ConrankError):
    exit_code = 78


class NotSquare(RankVerifyError):
    pass


class TreeError(ConrankError):
    exit_code = 79


class RootNotLinear(TreeError):
    pass


class DocumentError(ConrankError):
    exit_code = 65
