"""Optical Schrödinger-cat generation by two-photon subtraction from OPO squeezed light."""

__version__ = "0.1.0"

from .errors import ModeUndefinedError, NumericalError, PhysicalityError, TruncationWarning
from .opo import OpoParams
from .conditional import decompose, interference_decompose, small_epsilon
from .channel import GaussianChannel
from .wigner import fidelity_to_cat, plus_state, w_plus_closed

__all__ = [
    "GaussianChannel", "ModeUndefinedError", "NumericalError", "OpoParams", "PhysicalityError",
    "TruncationWarning", "decompose", "fidelity_to_cat", "interference_decompose",
    "plus_state", "small_epsilon", "w_plus_closed",
]
