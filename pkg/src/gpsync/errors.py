"""Exception types shared across the package."""


class GpsyncError(Exception):
    """Base class for all package-specific errors."""


class DegeneratePopulations(GpsyncError):
    """Eigenvalues of a density matrix are too close to label eigenvectors."""


class IllConditionedPhase(GpsyncError):
    """The complex number whose argument defines a phase has near-zero modulus."""


class NonUniqueSteadyState(GpsyncError):
    """The Liouvillian null space is empty or has dimension > 1."""


class TraceDriftError(GpsyncError):
    """Time integration became unstable (trace drift above the abort threshold)."""


class LabelingError(GpsyncError):
    """Eigenvector matching between neighboring time steps is ambiguous."""


class ConfigError(GpsyncError):
    """Invalid configuration file or command-line parameter."""
