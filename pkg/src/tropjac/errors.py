"""Exception hierarchy.

Every domain error derives from :class:`TropJacError`; the CLI maps those to
exit code 1 and prints the class name.
"""


class TropJacError(Exception):
    pass


class SchemaError(TropJacError, ValueError):
    pass


class GraphError(TropJacError, ValueError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class LeafVertexError(GraphError):
    pass


class LengthMismatchError(TropJacError, ValueError):
    pass


class EmptyPolynomialError(TropJacError, ValueError):
    pass


class NonIntegerSlopeError(TropJacError, ValueError):
    pass


class BoundaryError(TropJacError, ValueError):
    pass


class DegreeMismatchError(TropJacError, ValueError):
    pass


class NotPositiveDefiniteError(TropJacError, ValueError):
    pass


class KappaConstancyError(TropJacError, RuntimeError):
    pass


class IterationCapExceeded(TropJacError, RuntimeError):
    pass


class FiringError(TropJacError, RuntimeError):
    pass


class NegativeChipError(TropJacError, ValueError):
    pass


class RankAuditError(TropJacError, RuntimeError):
    pass


class CyclicOrientationError(TropJacError, ValueError):
    pass


class BoundExceededError(TropJacError, ValueError):
    pass


class MalformedDomainError(TropJacError, ValueError):
    pass
