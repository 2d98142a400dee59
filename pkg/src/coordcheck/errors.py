"""Exception hierarchy shared by every coordcheck module."""


class CoordCheckError(Exception):
    """Base class for all errors raised by coordcheck."""


class PresentationMismatchError(CoordCheckError):
    """Two operands live in different ring presentations."""


class UnknownVariableError(CoordCheckError):
    """A variable name is not declared in the ambient presentation."""


class NoLeadingTermError(CoordCheckError):
    """The zero polynomial has no leading term."""


class ArityError(CoordCheckError):
    """Wrong number of polynomials, variables or matrix dimensions."""


class IllDefinedDerivationError(CoordCheckError):
    """A derivation (or map) does not send the relation ideal into itself."""


class BudgetExhaustedError(CoordCheckError):
    """A Groebner computation ran past its step budget."""


class ParseError(CoordCheckError):
    """Syntax error in a coordinate-check script, with a source position."""

    def __init__(self, message, line=0, column=0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class UndeclaredIdentifierError(ParseError):
    pass


class ShadowingError(ParseError):
    pass
