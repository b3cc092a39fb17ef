"""Exception hierarchy shared by all modules."""


class RevnetsError(Exception):
    pass


class UnknownId(RevnetsError):
    """An identifier is not part of the declared carrier."""


class UnderflowError(RevnetsError, ValueError):
    """Multiset difference would produce a negative multiplicity."""


class NotEnabled(RevnetsError):
    def __init__(self, message, reasons=()):
        super().__init__(message)
        self.reasons = list(reasons)


class NotAConfiguration(RevnetsError):
    pass


class ExplorationLimitExceeded(RevnetsError):
    pass


class CarrierTooLarge(RevnetsError):
    pass


class SearchSpaceTooLarge(RevnetsError):
    pass


class TypeMismatch(RevnetsError):
    pass


class ValidationError(RevnetsError):
    """Raised by ``validate_*`` functions; carries the full violation list."""

    def __init__(self, what, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid {what}: {lines}")


class InvalidMorphism(ValidationError):
    def __init__(self, violations):
        super().__init__("morphism", violations)


class InvariantViolation(RevnetsError):
    """A property that holds for every valid input failed: a library bug."""
