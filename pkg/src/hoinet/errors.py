"""Exception hierarchy shared across the package.

Caller bugs (bad indices, empty subsets) raise plain ValueError; the classes
below mark conditions of the data or of the numerics that a pipeline may want
to catch and handle (e.g. skip a benchmark run).
"""


class HoinetError(Exception):
    """Base class for analysis failures."""


class DataValidationError(HoinetError):
    """Input data violates the format contract (ingestion, ragged rows, NaN)."""


class TableTooLargeError(HoinetError):
    """Requested probability table exceeds the dense-table cell cap."""


class IdentificationError(HoinetError):
    """Model identification failed (rank deficiency, degenerate residuals)."""


class NonStationaryModelError(IdentificationError):
    """Model has companion spectral radius >= 1; covariances undefined."""


class CovarianceError(HoinetError):
    """Covariance propagation or a restricted solve failed numerically."""
