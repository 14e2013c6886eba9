"""Exception and warning types shared across catgen."""


class NumericalError(RuntimeError):
    """A quadrature, optimiser or matrix routine failed to converge."""


class PhysicalityError(NumericalError):
    """A computed channel or state violates a physical bound beyond tolerance."""


class ModeUndefinedError(ValueError):
    """The antisymmetric temporal mode does not exist at zero click separation."""


class TruncationWarning(UserWarning):
    """Fock-space truncation leaves more tail mass than requested."""
