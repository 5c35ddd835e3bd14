"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
numerical-invariant violations with 3.
"""


class QsyncError(Exception):
    """Base class for all package-specific errors."""


class InvalidTruncationError(QsyncError, ValueError):
    """Fock truncation does not define a valid space (n_max < 1)."""


class TruncationLeakageError(QsyncError, ValueError):
    """Requested state leaks past the Fock truncation more than tolerated."""

    def __init__(self, message: str, required_n_max: int):
        super().__init__(message)
        self.required_n_max = required_n_max


class SingularCouplingError(QsyncError, ValueError):
    """The qubit-qubit decoupling condition has no usable solution."""


class PositivityError(QsyncError, ValueError):
    """A density matrix has an eigenvalue below the positivity tolerance."""


class InvariantViolationError(QsyncError, RuntimeError):
    """A trajectory state broke a trace/Hermiticity/positivity invariant."""


class StiffnessError(QsyncError, RuntimeError):
    """The adaptive integrator failed to advance (step-size underflow)."""


class ConfigError(QsyncError, ValueError):
    """A scenario or sweep configuration failed validation."""
