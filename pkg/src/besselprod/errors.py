"""Exception hierarchy shared by all modules."""


class BesselProdError(Exception):
    """Base class for library errors."""


class DomainError(BesselProdError, ValueError):
    """Argument outside the domain where a function is defined."""


class UnsupportedOrderError(BesselProdError, ValueError):
    pass


class DegeneracyError(BesselProdError, ValueError):
    """Scales too close for a formula that divides by their separation."""


class PreconditionError(BesselProdError, ValueError):
    pass


class ConvergenceError(BesselProdError, RuntimeError):
    """Quadrature gave up; carries the best estimate and its error bar."""

    def __init__(self, message, value=float("nan"), abs_err=float("inf")):
        super().__init__(message)
        self.value = value
        self.abs_err = abs_err


class StepSizeError(BesselProdError, ValueError):
    pass


class NotFoundError(BesselProdError, KeyError):
    """Missing database entry. ``reason`` is 'out_of_range' or 'not_generated'."""

    def __init__(self, key, reason):
        super().__init__(f"{key}: {reason}")
        self.key = key
        self.reason = reason


class ParseError(BesselProdError, ValueError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class IntegrityError(BesselProdError, ValueError):
    pass
