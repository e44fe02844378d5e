"""Exception taxonomy shared across the engine."""


class GeoformalError(Exception):
    """Base class for all engine errors."""


class DimensionMismatchError(GeoformalError):
    pass


class ScalarKindError(GeoformalError):
    """Exact and floating values may never mix inside one computation."""


class GradeError(GeoformalError):
    """Operation requires a homogeneous input of a particular grade."""


class MetricError(GeoformalError):
    """Gram matrix rejected (non-symmetric, not positive, or unsupported shape)."""


class LieAlgebraError(GeoformalError):
    """Structure constants violate antisymmetry/Jacobi, or a subalgebra check failed."""


class SpaceError(GeoformalError):
    """Invalid homogeneous-space descriptor (e.g. disconnected isotropy)."""


class RingError(GeoformalError):
    """Malformed ring presentation (inhomogeneous relation, degree overflow...)."""


class PatternInapplicableError(GeoformalError):
    """A certificate family was requested for parameters outside its hypotheses."""


class CertificateUnavailableError(GeoformalError):
    """No valid certificate could be assembled; carries the failing step."""

    def __init__(self, message, failed_step=None, witness=None):
        super().__init__(message)
        self.failed_step = failed_step
        self.witness = witness


class ConfigError(GeoformalError):
    """Malformed CLI configuration input."""
