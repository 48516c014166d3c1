"""Exception and warning types shared across the package."""


class NonFiniteParameterError(ValueError):
    """A physical parameter is NaN or infinite."""


class NonPositiveKappaError(ValueError):
    """The cavity decay rate must be strictly positive."""


class ZeroDriveError(ValueError):
    """An operation that divides by the drive amplitude got E = 0."""


class ZeroMeanError(ValueError):
    """Poisson comparison is undefined for zero mean photon number."""


class ZeroMeanPhotonError(ValueError):
    """Correlation ratios are meaningless when the mean photon number is
    numerically zero."""


class DimTooSmallError(ValueError):
    """A ladder operator needs at least a two-dimensional space."""


class LengthTooSmallError(ValueError):
    """Amplitude vectors must cover photon numbers 0..3 at minimum."""


class StepInvalidError(ValueError):
    """Time integration got a non-positive step or a negative horizon."""


class SingularSystemError(RuntimeError):
    """The steady-state amplitude system could not be factorized."""


class SingularAfterConstraintError(RuntimeError):
    """The trace-constrained Liouvillian solve failed; the steady-state
    manifold is degenerate or the operator is malformed."""


class UnknownParameterError(ValueError):
    """A sweep axis names a parameter that does not exist."""


class UnknownObservableError(ValueError):
    """A sweep requested an observable that no solution path provides."""


class UnknownPresetError(ValueError):
    """No figure preset is registered under the requested name."""


class RegimeWarning(UserWarning):
    """Parameters leave the weak-drive / dispersive regime where the
    perturbative formulas are trustworthy."""
