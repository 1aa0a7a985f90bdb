"""Exception hierarchy shared by the library and the command line."""


class TensionLabError(Exception):
    """Base class for all errors raised by tensionlab."""


class DimensionError(TensionLabError, ValueError):
    """Operand shapes do not fit together."""


class NotHermitianError(TensionLabError, ValueError):
    pass


class NotUnitaryError(TensionLabError, ValueError):
    pass


class NormalizationError(TensionLabError, ValueError):
    pass


class ZeroProbabilityError(TensionLabError, ValueError):
    """Projection onto a branch the state has (numerically) no weight in."""


class NotInSpectrumError(TensionLabError, ValueError):
    pass


class NonCommutingError(TensionLabError, ValueError):
    """Observables that must be jointly measurable do not commute."""


class NotMeasurableError(TensionLabError, ValueError):
    """An inequality term is not contained in any context of the scenario."""


class SchmidtRankError(TensionLabError, ValueError):
    pass


class SearchSpaceOverflow(TensionLabError, ValueError):
    """Exhaustive enumeration would exceed its configured size limit."""


class NumericalError(TensionLabError, ArithmeticError):
    """A numerical routine failed (non-convergence, breakdown)."""


class ConvergenceError(NumericalError):
    pass


class LPError(NumericalError):
    pass


class DocumentError(TensionLabError, ValueError):
    """A scenario document failed to parse or validate.

    ``field`` names the offending location, e.g. ``"state"``,
    ``"observables.A0"`` or ``"contexts[2]"``.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class ScenarioError(TensionLabError, ValueError):
    """A scenario is structurally inconsistent (unknown names, empty parts)."""
