"""Exception types shared across the package."""


class BanklaineError(Exception):
    """Base class for all package errors."""


class IntegrationDomainError(BanklaineError):
    """Coefficient evaluated to a nonfinite value during integration."""

    def __init__(self, z, value):
        self.z = z
        self.value = value
        super().__init__(f"coefficient nonfinite at z={z!r}: {value!r}")


class StiffnessError(BanklaineError):
    """Step size underflowed; the problem is too stiff for this stepper."""

    def __init__(self, z, step):
        self.z = z
        self.step = step
        super().__init__(f"step size underflow ({step:.3e}) at z={z!r}")


class RealityViolationError(BanklaineError):
    """A nominally real evaluation produced a significant imaginary part."""


class InsufficientScanError(BanklaineError):
    """Queried radius exceeds the scanned extent of a census."""


class InsufficientDataError(BanklaineError):
    """Too few zeros (or samples) for the requested estimate."""


class BoundaryTooCloseError(BanklaineError):
    """Contour quadrature failed to converge; a zero sits near the boundary."""


class NotABankLaineZeroError(BanklaineError):
    """|E'| at a putative zero is not within tolerance of 1."""

    def __init__(self, zero, eprime_abs):
        self.zero = zero
        self.eprime_abs = eprime_abs
        super().__init__(
            f"|E'({zero!r})| = {eprime_abs:.6e} is not close to 1"
        )


class CriticalPointError(BanklaineError):
    """Schwarzian requested where U' = 0."""


class EvaluationAtZeroError(BanklaineError):
    """Quantity undefined at a zero of E (division by E)."""


class MapDomainError(BanklaineError):
    """Point lies outside the domain of a region-restricted map."""


class ConstructionError(BanklaineError):
    """A one-time construction step (curve trace, boundary solve) failed."""


class UnreliableSampleError(BanklaineError):
    """Finite-difference dilatation sample too close to a pole or critical point."""
