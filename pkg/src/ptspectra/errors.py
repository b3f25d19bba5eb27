"""Exception hierarchy shared by all modules."""


class PtSpectraError(Exception):
    """Base class for every error raised by the package."""


class InvalidDimensionError(PtSpectraError, ValueError):
    pass


class InvalidInputError(PtSpectraError, ValueError):
    pass


class ContractViolation(PtSpectraError, ValueError):
    pass


class UnsupportedSpecError(PtSpectraError, ValueError):
    pass


class SolverFailure(PtSpectraError, RuntimeError):
    """QR iteration hit its sweep cap; ``deflated`` counts the eigenvalues found."""

    def __init__(self, message, deflated=0):
        super().__init__(message)
        self.deflated = deflated


class NumericalError(PtSpectraError, RuntimeError):
    pass


class DegenerateContourError(NumericalError):
    pass


class StepSizeError(NumericalError):
    pass


class NoConvergenceError(NumericalError):
    pass


class StalledError(NumericalError):
    pass
