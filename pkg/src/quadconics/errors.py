"""Exception taxonomy for the geometry kernel.

Every failure mode a caller can act on gets its own class; they all descend
from GeometryError so service and CLI layers can map them to exit code 2 /
HTTP 422 uniformly.
"""


class GeometryError(Exception):
    """Base class for all kernel-level errors."""


# scalar backend
class BackendMismatch(GeometryError):
    """Exact and float scalars were mixed in one object or operation."""


class DivisionByZero(GeometryError):
    pass


class NonFiniteResult(GeometryError):
    """A float operation produced NaN or infinity."""


class NegativeRadicand(GeometryError):
    pass


class NonSquareRational(GeometryError):
    """Exact square root requested for a rational that is not a perfect square."""


# projective kernel
class CoincidentPoints(GeometryError):
    pass


class CoincidentLines(GeometryError):
    pass


class DegenerateInput(GeometryError):
    pass


class NotCollinear(GeometryError):
    pass


class DegeneratePosition(GeometryError):
    pass


class SingularMap(GeometryError):
    pass


# conics
class NoUniqueConic(GeometryError):
    pass


class Inconsistent(GeometryError):
    """Guard for impossible linear-algebra states (should never fire)."""


class PointNotOnConic(GeometryError):
    pass


class DegenerateConic(GeometryError):
    pass


class NonSquareDiscriminant(GeometryError):
    """Exact backend hit an irrational intersection; caller must switch
    backend or resample parameters."""


class InsidePoint(GeometryError):
    """No real tangents exist from the given point."""


# quadrilateral configurations
class VertexNotOnConic(GeometryError):
    pass


class DegenerateQuadrilateral(GeometryError):
    pass


class SamplerExhausted(GeometryError):
    pass


class MissingFamily(GeometryError):
    pass


# claim verification
class UnknownSubject(GeometryError):
    pass


class NotACircle(GeometryError):
    pass


class InfiniteVertex(GeometryError):
    pass


# Poncelet dynamics
class DegeneratePencil(GeometryError):
    pass


class InsideInner(GeometryError):
    pass


class TangentFromOnConic(GeometryError):
    """Start point lies on the inner conic: only one tangent exists."""


class NotInscribed(GeometryError):
    pass


class NotCircumscribed(GeometryError):
    pass


class PencilMismatch(GeometryError):
    pass


class SequenceDegenerated(GeometryError):
    pass


# polygon dynamics
class DegenerateDiagonals(GeometryError):
    pass
