class BisetCalcError(Exception):
    """Base class for user-facing errors."""


class GroupSpecError(BisetCalcError):
    """A group could not be read from its name or file."""


class InvalidPermutation(GroupSpecError, ValueError):
    pass


class GroupTooLarge(BisetCalcError):
    pass


class NotNormalError(BisetCalcError, ValueError):
    pass


class InternalFault(RuntimeError):
    """A self-check failed; the result would have been wrong."""
