"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: DataError -> 2, NumericalError -> 3.
Anything else fatal is a usage error (exit 1).
"""


class StorynetError(Exception):
    """Base class for all package errors."""


class DataError(StorynetError):
    """Bad or missing input data (manifests, text files, windows)."""


class ManifestError(DataError):
    """Manifest file violates the manifest contract."""


class WindowError(DataError):
    """A sample window does not fit inside its token stream."""


class EmptyStreamError(DataError):
    """An operation that needs tokens received an empty stream."""


class NumericalError(StorynetError):
    """A numerical procedure could not produce a result."""


class FitError(NumericalError):
    """Power-law fit failed (too few points, or nothing positive)."""


class RegionFitError(FitError):
    """A degree-distribution region had too few points to fit.

    ``region`` names the failing piece ("gamma1", "gamma2" or "gamma3").
    """

    def __init__(self, region: str, message: str):
        super().__init__(f"{region}: {message}")
        self.region = region


class SingularCovarianceError(NumericalError):
    """Pooled covariance is singular or too ill-conditioned to invert."""
