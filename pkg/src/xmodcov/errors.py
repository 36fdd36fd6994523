"""Exception types shared across the package."""


class AlgebraError(ValueError):
    """Base class; ``witness`` carries the offending indices when known."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAHomomorphism(AlgebraError):
    pass


class NotASubgroup(AlgebraError):
    pass


class NotNormal(AlgebraError):
    pass


class BoundExceeded(AlgebraError):
    pass


class UnknownObject(AlgebraError):
    pass


class NotTransitive(AlgebraError):
    pass


class MissingComponentChoice(AlgebraError):
    pass


class NotACovering(AlgebraError):
    pass


class HypothesisViolated(AlgebraError):
    pass


class InterchangeViolated(AlgebraError):
    pass


class DegreeTooHigh(AlgebraError):
    pass


class NotACocycle(AlgebraError):
    pass


class NotEquivariant(AlgebraError):
    pass


class InvalidFactorSet(AlgebraError):
    pass


class ObstructionNonzero(AlgebraError):
    pass


class NotInvariant(AlgebraError):
    pass
