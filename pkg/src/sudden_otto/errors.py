"""Exception hierarchy for cycle construction and analysis."""


class SuddenOttoError(Exception):
    """Base class for all package-specific failures."""


class DegenerateAdiabat(SuddenOttoError):
    """Field-ramp endpoints coincide; the ramp propagator is undefined
    (the caller should substitute the identity)."""


class MarginalCycle(SuddenOttoError):
    """The one-cycle map has a unit-modulus contraction eigenvalue, so the
    periodic steady state is not unique."""


class NoConvergence(SuddenOttoError):
    """Repeated cycle application failed to settle within the iteration
    budget."""


class PhysicalityViolation(SuddenOttoError):
    """A reconstructed density matrix has a negative eigenvalue beyond
    numerical tolerance."""


class ClassInapplicable(SuddenOttoError):
    """An approximate ramp propagator class was requested for parameters
    that violate its defining ordering outright."""


class RegimeViolation(SuddenOttoError):
    """A closed-form approximation was evaluated outside its domain of
    validity."""


class NoMaximum(SuddenOttoError):
    """The closed-form cooling-power maximum does not exist for the given
    parameters."""


class StepTooLarge(SuddenOttoError):
    """The dense integrator could not reach its accuracy target within the
    step-halving budget."""


class ConfigError(SuddenOttoError):
    """A run configuration is malformed or inconsistent."""
