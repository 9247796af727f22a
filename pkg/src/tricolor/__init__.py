"""Proper 3-colorings of discrete tori, their height functions and level sets."""

from .errors import (
    InconsistentGradient,
    LevelMismatch,
    NonPeriodicResult,
    NotInImage,
    PreconditionFailed,
    ScaffoldInvariantViolated,
    TooLarge,
    TricolorError,
    WindowOverflow,
    WindowUnstable,
    ZeroSlope,
)
from .heights import Coloring, QuasiPeriodicHF, TorusHHF, lift, mod3, slope, validate
from .lattice import Dims, Torus, Window

__version__ = "0.1.0"
