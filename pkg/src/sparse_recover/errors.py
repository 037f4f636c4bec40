class AssumptionViolation(Exception):
    """Input data breaks a separation assumption an algorithm relies on."""


class NumericalFailure(RuntimeError):
    """A resampling loop or matrix routine gave up."""
