"""Exception hierarchy."""


class BilatticeError(Exception):
    """Base class for every error raised by this package."""


class SizeLimitExceeded(BilatticeError):
    """A closure or search grew past the configured cap."""


class GroundMismatch(BilatticeError):
    """Objects living on incompatible ground spaces were combined."""


class DegenerateRelation(BilatticeError):
    """An operation that needs a nondegenerate support relation got one with an empty row or column."""


class InternalInconsistency(BilatticeError):
    """A self-checking decision produced an answer that failed its own verification."""


class InvalidInstance(BilatticeError):
    """An instance document could not be parsed or violates its schema."""
