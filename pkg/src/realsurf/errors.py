"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class SurfaceError(Exception):
    """Base class for all errors raised by realsurf."""


class InputError(SurfaceError, ValueError):
    """Malformed input or violated precondition (CLI exit code 2)."""


class InconsistentError(SurfaceError):
    """Input is well formed but mathematically inconsistent (CLI exit code 3)."""
