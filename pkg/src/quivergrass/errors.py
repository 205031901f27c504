"""Exception types shared across the package."""


class QuiverGrassError(Exception):
    """Base class for all package errors."""


class ValidationError(QuiverGrassError):
    """Input data violates a structural requirement."""


class EndpointMismatch(ValidationError):
    pass


class NonNormedRelation(ValidationError):
    pass


class ShortRelation(ValidationError):
    pass


class LengthExceedsBound(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class InvalidModule(ValidationError):
    pass


class InvalidTops(ValidationError):
    pass


class AlgebraMismatch(ValidationError):
    pass


class TopNotDominated(ValidationError):
    pass


class MissingCoordinate(ValidationError):
    pass


class InvalidSkeleton(ValidationError):
    pass


class RankDrop(QuiverGrassError):
    """The generic rank of a subspace family could not be certified."""


class Cancelled(QuiverGrassError):
    """A long computation was interrupted through its cancellation token."""
