"""Exception hierarchy shared by every module of the package."""


class NilcontactError(Exception):
    """Base class for all errors raised by nilcontact."""


class DimensionError(NilcontactError, ValueError):
    pass


class NotNilpotentError(NilcontactError, ValueError):
    pass


class JacobiError(NilcontactError, ValueError):
    """Raised when a bracket table fails the Jacobi identity.

    ``violations`` holds the offending ``JacobiViolation`` records.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotAnIdealError(NilcontactError, ValueError):
    pass


class NotClosedError(NilcontactError, ValueError):
    pass


class DegenerateFormError(NilcontactError, ValueError):
    pass


class NotContactError(NilcontactError, ValueError):
    pass


class NotAdaptedError(NilcontactError, ValueError):
    """The supplied basis is not adapted; ``location`` names the first mismatch."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class DeltaError(NilcontactError, ValueError):
    pass


class NormalFormError(NilcontactError, RuntimeError):
    """Internal failure of the normal-form reduction.

    This is never expected for a contact filiform algebra; seeing it means a
    structural invariant broke.
    """


class FormatError(NilcontactError, ValueError):
    """Malformed input file; ``where`` locates the offending field."""

    def __init__(self, message, where=None):
        if where:
            message = f"{where}: {message}"
        super().__init__(message)
        self.where = where
