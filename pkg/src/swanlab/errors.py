"""Exception hierarchy shared by all swanlab modules."""


class SwanlabError(Exception):
    """Base class for every error raised by swanlab."""


class InvalidInput(SwanlabError, ValueError):
    pass


class InvalidContext(SwanlabError, ValueError):
    pass


class PrecisionExhausted(SwanlabError, ArithmeticError):
    """A decision would need more p-adic digits than the working precision holds."""


class NoConvergenceCertificate(SwanlabError, ArithmeticError):
    pass


class NotFixedByCartier(SwanlabError, ValueError):
    pass


class NotKilledByCartier(SwanlabError, ValueError):
    pass


class TrivialCharacter(SwanlabError):
    """The Kummer class is a p-th power at working precision."""


class NotFierce(SwanlabError):
    """The Kummer class defines an extension that is not fierce (unramified part)."""


class RequiresConstantExtension(SwanlabError):
    """The computation needs a larger constant field.

    ``suggested_m`` is the p-adic exponent of the ramification index to retry
    with (``e = (p-1) * p**m``); ``suggested_f`` the residue degree.
    """

    def __init__(self, message, suggested_m=None, suggested_f=None):
        super().__init__(message)
        self.suggested_m = suggested_m
        self.suggested_f = suggested_f


class SolverBoundExceeded(SwanlabError):
    pass


class IterationBudgetExceeded(SwanlabError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class InternalInconsistency(SwanlabError, AssertionError):
    """A computed result violates a theorem it must satisfy."""
