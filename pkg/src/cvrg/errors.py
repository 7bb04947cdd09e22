"""Exception types shared across the package."""


class CVRGError(Exception):
    """Base class for all package errors."""


class GeometryError(CVRGError, ValueError):
    """Invalid geometric input (degenerate segment, self-intersecting polygon, ...)."""


class GuardError(CVRGError):
    """A problem size exceeds a hard guard of an exact method."""


class InfeasibleError(CVRGError):
    """The instance cannot be served (e.g. a weight exceeds the capacity)."""


class PrecedenceError(CVRGError, ValueError):
    """The precedence relation is cyclic or references unknown customers."""


class ParseError(CVRGError):
    """A text document does not follow the instance/solution grammar."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ValidationError(CVRGError):
    """A solution violates an instance invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
