"""Exception hierarchy shared across the package."""


class SieveError(Exception):
    """Base class for every error raised by qfsieve."""


class CapExceeded(SieveError):
    """An enumeration would exceed its configured size cap."""


class OverflowError128(SieveError, OverflowError):
    """A value does not fit the supported 128-bit width."""


class NonCoprimeModuli(SieveError, ValueError):
    pass


class ReducibleForm(SieveError, ValueError):
    pass


class NonstandardLeadingCoefficient(SieveError, ValueError):
    pass


class DZero(SieveError, ValueError):
    pass


class NoAdmissibleResidue(SieveError, ValueError):
    pass


class NotSquarefree(SieveError, ValueError):
    pass


class NotCoprimeToD(SieveError, ValueError):
    pass


class StepTooCoarse(SieveError, ValueError):
    pass


class InconsistentParams(SieveError, ValueError):
    pass


class ConstraintViolated(SieveError, ValueError):
    pass


class FOutOfRange(SieveError, ValueError):
    pass


class NoFeasiblePoint(SieveError, ValueError):
    pass
