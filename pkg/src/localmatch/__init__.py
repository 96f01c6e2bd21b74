"""Matchings in finite abelian groups and matched subspaces in finite field extensions."""

__version__ = "0.1.0"

from .errors import DomainError, ResourceError, StructuralError

__all__ = ["DomainError", "ResourceError", "StructuralError", "__version__"]
