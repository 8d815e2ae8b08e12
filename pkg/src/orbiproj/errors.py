"""Exception hierarchy.

Every error raised by the library derives from :class:`OrbiprojError`, and
the class name doubles as the machine-readable error code the CLI prints.
"""


class OrbiprojError(Exception):
    """Base class for domain errors."""

    @property
    def code(self):
        return type(self).__name__

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


# projective geometry
class NonCollinear(OrbiprojError):
    pass


class NonConcurrent(OrbiprojError):
    pass


class Degenerate(OrbiprojError):
    pass


class IncidentCenter(OrbiprojError):
    pass


class BadOrder(OrbiprojError):
    pass


class CoincidentArguments(OrbiprojError):
    pass


class DegenerateLocus(OrbiprojError):
    pass


# signatures
class NonNegativeEuler(OrbiprojError):
    pass


class WrongBoundaryKind(OrbiprojError):
    pass


class MissingComponent(OrbiprojError):
    pass


class MalformedSignature(OrbiprojError):
    pass


# hyperbolic plane
class DomainViolation(OrbiprojError):
    pass


class NonSpacelike(OrbiprojError):
    pass


# solvers
class InvariantOutOfRegion(OrbiprojError):
    pass


class TwoOrderTwoCones(OrbiprojError):
    pass


class FiberArityMismatch(OrbiprojError):
    pass


class ConvexityFailure(OrbiprojError):
    pass


class BadCrossRatio(OrbiprojError):
    pass


class ConstraintViolated(OrbiprojError):
    pass


class BothOrdersTwo(OrbiprojError):
    pass


class BadParameter(OrbiprojError):
    pass


class MalformedStructure(OrbiprojError):
    pass


# surgery
class InvariantMismatch(OrbiprojError):
    pass


class OrientationClash(OrbiprojError):
    pass


class NotHyperbolic(OrbiprojError):
    pass


class NegativeEigenvalues(OrbiprojError):
    pass


class NotPurelyHyperbolic(OrbiprojError):
    pass


# developing maps
class ChartFailure(OrbiprojError):
    pass


class ExplosionLimit(OrbiprojError):
    pass


# command line
class CheckFailed(OrbiprojError):
    pass
