"""Exception types raised by the library."""


class AuemError(Exception):
    """Base class for all library errors."""


class InvalidArgument(AuemError, ValueError):
    """An argument violates an operation's precondition."""


class UnsupportedDimension(AuemError, ValueError):
    """The operation is not defined for the requested dimension."""


class FidelityTooLow(AuemError, ValueError):
    """Requested fidelity lies below the bound required by a construction."""

    def __init__(self, fidelity: float, bound: float, d: int):
        self.fidelity = fidelity
        self.bound = bound
        self.d = d
        super().__init__(
            f"fidelity {fidelity!r} is below the minimal-interaction bound "
            f"{bound!r} for d={d}"
        )


class DegenerateConfiguration(AuemError, ValueError):
    """The requested quantity is undefined for a degenerate parameter choice."""
