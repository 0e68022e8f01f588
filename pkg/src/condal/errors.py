"""Exception hierarchy shared by every condal module."""


class CondalError(Exception):
    """Base class for all library errors."""


class AlgebraMismatchError(CondalError, ValueError):
    """Operands belong to different algebras."""


class UndefinedConditionalError(CondalError, ValueError):
    """A conditional was given an impossible (bottom) antecedent."""


class CapExceededError(CondalError):
    """A size cap (atoms, variables, subset search) would be exceeded."""


class GuardError(CondalError, ValueError):
    """A decision procedure's side condition does not hold."""


class ParseError(CondalError, ValueError):
    """Syntax error in a formula or conditional term string."""

    def __init__(self, message, position=None, text=None):
        self.message = message
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
