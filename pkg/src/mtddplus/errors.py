"""Exception hierarchy shared by every module."""


class MtddError(Exception):
    """Base class for all errors raised by the package."""


class ParseError(MtddError):
    def __init__(self, msg, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + msg)


class ValidationError(MtddError):
    """A grammar, automaton or machine violates a structural invariant."""


class MismatchError(MtddError):
    """Operands disagree in ring, dimension or height."""


class LimitError(MtddError):
    """A size or densification cap was exceeded."""
