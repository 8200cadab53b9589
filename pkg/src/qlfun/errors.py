"""Exception hierarchy shared across the package."""


class QlfunError(Exception):
    """Base class for all package errors."""


class DomainValidationError(QlfunError):
    """A precondition on the inputs is violated (wrong disk, bad modulus, ...)."""


class PrecisionUnderflowError(QlfunError):
    """A p-adic result would carry fewer retained digits than the policy floor."""


class UnsupportedCharacterError(DomainValidationError):
    """Character values do not embed into the requested value domain."""


class SeriesBudgetError(QlfunError):
    """A series failed to meet its tail tolerance within the allotted terms."""
