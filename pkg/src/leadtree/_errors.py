"""Exception hierarchy shared by every module."""


class LeadTreeError(Exception):
    """Base class for all errors raised by leadtree."""


class ParameterError(LeadTreeError, ValueError):
    """An argument is outside its allowed range."""


class InputError(LeadTreeError, ValueError):
    """Malformed or non-finite input data.

    ``line`` is the 1-based line number in the source file when known.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class DegenerateInputError(InputError):
    """Input is well-formed but cannot support the requested computation."""


class StructuralError(LeadTreeError):
    """A tree or parent array violates its structural invariants."""


class ModeViolationError(StructuralError):
    """``prefix_fast`` splitting was requested for a non-prefix center set."""


class IncompleteAssignmentError(StructuralError):
    """Some point's nearest-higher-density chain never reaches a center."""
