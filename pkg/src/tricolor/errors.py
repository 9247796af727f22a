"""Exception types raised by the toolkit."""

from __future__ import annotations


class TricolorError(Exception):
    """Base class for every error raised by this package."""


class WindowOverflow(TricolorError):
    """A windowed computation needed cells outside its window."""


class WindowUnstable(TricolorError):
    """Doubling the window changed the answer, up to the largest window."""


class LevelMismatch(TricolorError):
    """Anchor heights are incompatible with the requested level."""


class TooLarge(TricolorError):
    """The requested enumeration exceeds the feasibility guard."""


class NonPeriodicResult(TricolorError):
    """The mod-3 reduction of a function with slope outside 3Z^d."""


class InconsistentGradient(TricolorError):
    """Integrating a coloring gradient produced conflicting heights."""


class PreconditionFailed(TricolorError):
    """A documented precondition of an operation does not hold."""


class ZeroSlope(TricolorError):
    """An orientation was requested for the zero slope."""


class ScaffoldInvariantViolated(TricolorError):
    """A structural fact about the flattening scaffold failed at runtime."""


class NotInImage(TricolorError):
    """The function cannot be the image of the flattening map."""
