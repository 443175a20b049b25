"""Exception hierarchy for hardylab.

Every error raised by the library derives from HardyLabError so callers can
catch the whole family.  Most also derive from ValueError because they signal
bad arguments or bad data.
"""


class HardyLabError(Exception):
    """Base class for all hardylab errors."""


# --- function / grid plumbing ------------------------------------------------

class GridTooSparse(HardyLabError, ValueError):
    """Grid has too few points for the requested transform."""


class MissingTailModel(HardyLabError, ValueError):
    """An operation needs decay information beyond the grid edges."""


class CsvFormatError(HardyLabError, ValueError):
    """Malformed CSV input; carries the offending 1-based line number."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


# --- Hardy criterion and continuation ----------------------------------------

class NonPositiveOffset(HardyLabError, ValueError):
    """Line offsets for the Hardy criterion must be strictly positive."""


class PoleOnContinuationLine(HardyLabError, ValueError):
    """A model pole lies inside the half-plane strip being tested."""


class WrongHalfPlane(HardyLabError, ValueError):
    """Continuation point is not strictly interior to the half-plane."""


class TruncationErrorExceeded(HardyLabError, ValueError):
    """Estimated truncation error is above the requested tolerance."""


class NonCausalInput(HardyLabError, ValueError):
    """Time-domain signal has nonzero mass at negative times."""


class NonIntegrableInput(HardyLabError, ValueError):
    """Signal is not square-integrable on the half line."""


# --- quadrature ---------------------------------------------------------------

class SingularityOutsideGrid(HardyLabError, ValueError):
    """Principal-value singularity must lie strictly inside the grid span."""


class ToleranceNotMet(HardyLabError, ValueError):
    """Quadrature error estimate exceeds the requested tolerance."""


class NonDecayingIntegrand(HardyLabError, ValueError):
    """Integrand does not decay fast enough for the half-line integral."""


class NegativeTime(HardyLabError, ValueError):
    """Semigroup boundary: the time parameter cannot be negative."""


# --- states and transition ----------------------------------------------------

class InvalidSpec(HardyLabError, ValueError):
    """Constructor specification violates its invariants."""


class NonAnalyticInput(HardyLabError, ValueError):
    """Operation needs closed-form (analytic model) channel functions."""


class IncompatibleChannels(HardyLabError, ValueError):
    """Channel quantum numbers are malformed or of the wrong type."""


# --- lab-time ensembles ---------------------------------------------------------

class CausalityViolation(HardyLabError, ValueError):
    """Registration earlier than preparation; carries offending indices."""

    def __init__(self, indices, message=None):
        self.indices = tuple(indices)
        if message is None:
            message = f"registration precedes preparation at indices {list(self.indices)}"
        super().__init__(message)


class InvalidRate(HardyLabError, ValueError):
    """Decay rate must be strictly positive."""


class InvalidSchemeLength(HardyLabError, ValueError):
    """Sequential preparation scheme has fewer instants than requested events."""


class EmptyEnsemble(HardyLabError, ValueError):
    """Statistics requested on an empty event list."""


class GridMismatch(HardyLabError, ValueError):
    """Comparison grids are empty or of different lengths."""
