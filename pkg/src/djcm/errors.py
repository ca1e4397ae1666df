"""Exception and warning types raised by djcm."""


class DJCMError(ValueError):
    """Base class for numerical and domain errors in djcm."""


class MagnitudeOverflow(DJCMError):
    """A deformation value exceeded the allowed magnitude."""


class TruncationTooLarge(DJCMError):
    """The Fock truncation needed for the requested accuracy exceeds the cap."""


class IndexOrderTooHigh(DJCMError):
    """A moment of order higher than supported was requested."""


class OutOfRange(DJCMError):
    """An index lies outside the truncated state."""


class VacuumState(DJCMError):
    """The mean photon number vanishes, so a normalized witness is undefined."""


class OrderOverflow(DJCMError):
    """A Fock or Laguerre order exceeds the supported maximum."""


class GridTooLarge(DJCMError):
    """A phase-space grid has too many nodes."""


class StepTooLarge(DJCMError):
    """An integration step is too coarse for the fastest rate in a manifold."""


class WeakCouplingWarning(UserWarning):
    """Coupling is not small against the atomic frequencies (RWA regime)."""
