"""Exception hierarchy shared by every module in the package.

All model-level failures derive from MarketModelError, which itself
derives from ValueError so that generic callers can treat bad inputs
uniformly.
"""


class MarketModelError(ValueError):
    """Base class for contract and model errors raised by this package."""


class ContractViolationError(MarketModelError):
    """An argument broke a structural precondition (shape, length, type)."""


class ParameterRangeError(MarketModelError):
    """A numeric parameter fell outside its admissible range."""


class BracketingError(MarketModelError):
    """Root bracket endpoints do not straddle a sign change."""


class ImproperStateError(MarketModelError):
    """Operation needs a normalizable strategy but got a delta-like one."""


class DegenerateStateError(MarketModelError):
    """Strategy has zero norm and cannot be normalized."""


class RepresentationError(MarketModelError):
    """Strategy is in the wrong representation for the requested operation."""


class DegenerateDensityError(MarketModelError):
    """Requested phase-space density is singular (e.g. |r| = 1)."""


class TruncationError(MarketModelError):
    """A series or basis expansion failed to capture the state."""


class NotApplicableError(MarketModelError):
    """The requested analysis is outside its domain of validity."""
