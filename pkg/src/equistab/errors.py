"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class EquistabError(Exception):
    """Base class for all errors raised by equistab."""

    exit_code = 1
    code = "error"


class DomainError(EquistabError, ValueError):
    """An argument lies outside the domain of the operation."""

    exit_code = 2
    code = "domain"


class ValidationError(EquistabError, ValueError):
    """Input data is malformed or violates a structural invariant."""

    exit_code = 2
    code = "validation"


class ResourceBoundError(EquistabError):
    """A configured size bound would be exceeded."""

    exit_code = 3
    code = "resource"
