from typing import Optional


class ELatLabError(Exception):
    """Base class for every error raised by the engine."""


class GroupSpecError(ELatLabError, ValueError):
    def __init__(self, message: str, token: Optional[str] = None, position: Optional[int] = None):
        self.token = token
        self.position = position
        where = ""
        if token is not None:
            where = f" (token {token!r}"
            where += f" at position {position})" if position is not None else ")"
        super().__init__(f"{message}{where}")


class GroupConstructionError(ELatLabError, ValueError):
    pass


class OrderBoundError(ELatLabError):
    """A configured resource bound was exceeded."""


class ThresholdExceededError(OrderBoundError):
    pass


class NotNormalError(ELatLabError, ValueError):
    pass


class SubgroupError(ELatLabError, ValueError):
    pass


class LatticeConsistencyError(ELatLabError):
    pass


class MalformedTableError(ELatLabError, ValueError):
    pass


class EquivalenceError(ELatLabError, ValueError):
    pass


class NonCanonicalError(ELatLabError, ValueError):
    pass


class MalformedMapError(ELatLabError, ValueError):
    pass


class InvalidIsomorphismError(ELatLabError, ValueError):
    pass


class ELatticeFileError(ELatLabError, ValueError):
    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None, column: Optional[int] = None):
        self.field = field
        self.line = line
        self.column = column
        parts = []
        if field:
            parts.append(f"field {field!r}")
        if line is not None:
            parts.append(f"line {line}, column {column}")
        suffix = f" [{'; '.join(parts)}]" if parts else ""
        super().__init__(f"{message}{suffix}")


class UnknownCheckError(ELatLabError, ValueError):
    pass


class ScopeError(OrderBoundError):
    """A requested suite scope exceeds the configured bounds."""
