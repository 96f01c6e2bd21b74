"""Exception types shared by every module."""


class StructuralError(ValueError):
    """Operands do not live in the same ambient object (group, field, dimension)."""


class DomainError(ValueError):
    """Operands violate an operation's mathematical precondition."""


class ResourceError(RuntimeError):
    """An enumeration would exceed a configured budget."""

    def __init__(self, message: str, bound: int | None = None):
        super().__init__(message)
        self.bound = bound
