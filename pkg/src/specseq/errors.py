"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`SpecSeqError`, which is a :class:`ValueError`, so callers that only
care about "bad input" can catch that.
"""


class SpecSeqError(ValueError):
    pass


class DimensionMismatch(SpecSeqError):
    pass


class NotContained(SpecSeqError):
    pass


class NotAField(SpecSeqError):
    pass


class NotAComplex(SpecSeqError):
    def __init__(self, degree, witness, message=None):
        self.degree = degree
        self.witness = witness
        super().__init__(message or f"d∘d != 0 leaving degree {degree} (column {witness!r})")


class FiltrationNotPreserved(SpecSeqError):
    pass


class IllDefined(SpecSeqError):
    pass


class UnboundedEnumeration(SpecSeqError):
    pass


class NotFirstQuadrant(SpecSeqError):
    pass


class NotCollapsed(SpecSeqError):
    pass


class MissingDifferential(SpecSeqError):
    def __init__(self, positions):
        self.positions = list(positions)
        super().__init__(f"no differential supplied at unforced positions {self.positions}")


class GroupError(SpecSeqError):
    pass


class NotAssociative(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotAHomomorphism(GroupError):
    pass


class ActionNotFree(SpecSeqError):
    pass


class NotEquivariant(SpecSeqError):
    pass


class ResourceCapExceeded(SpecSeqError):
    """Raised before building an object whose size exceeds a configured cap."""


class BadFaceArity(SpecSeqError):
    pass


class SimplicialIdentityViolation(SpecSeqError):
    pass


class FiltrationNotMonotone(SpecSeqError):
    pass
