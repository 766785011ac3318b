"""Exception types shared across the package."""


class VscptError(Exception):
    """Base class for all errors raised by :mod:`vscpt`."""


class ParameterError(VscptError, ValueError):
    """A physical or numerical parameter violates a precondition."""


class SolverError(VscptError, RuntimeError):
    """A numerical solver failed to reach its requested accuracy."""
