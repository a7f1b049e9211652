"""Exception types shared across the package."""


class SearchBoundExceeded(ValueError):
    """A brute-force or exhaustive search would exceed its configured bound."""


class SingularSubmatrixError(ValueError):
    """The Fourier submatrix for a sampling/frequency pair is not invertible."""
