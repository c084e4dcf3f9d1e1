"""Lattice and conic-bundle computations for real rational surfaces with involutions."""

from .errors import InconsistentError, InputError, SurfaceError

__all__ = ["InconsistentError", "InputError", "SurfaceError"]
__version__ = "0.1.0"
