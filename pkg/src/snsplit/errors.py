"""Exception hierarchy shared across the package."""


class SnsplitError(Exception):
    """Base class for all snsplit errors."""


class InvalidSplit(SnsplitError):
    """Splitting/trimming ratios violate 0 < eta < epsilon < 1/2."""


class InsufficientSample(SnsplitError):
    """Sample too short for the requested split (m1 < 1 or N < 4)."""


class DimensionMismatch(SnsplitError):
    """Panel, direction or plan dimensions are inconsistent."""


class DegenerateSeries(SnsplitError):
    """Every scan position has a zero self-normalizer (e.g. constant input)."""


class InvalidPreset(SnsplitError):
    """Unknown shift preset name or incompatible dimension."""


class NotPositiveDefinite(SnsplitError):
    """Covariance factorization failed."""


class FormatError(SnsplitError):
    """Corrupt or inconsistent null-sample file."""
