"""Exception hierarchy.

Validation problems derive from ``ValidationError`` and numerical
breakdowns from ``NumericalError`` so the CLI can map them to exit codes.
"""


class InrectError(Exception):
    pass


class ValidationError(InrectError, ValueError):
    pass


class NumericalError(InrectError, ArithmeticError):
    pass


class TooFewVertices(ValidationError):
    pass


class DuplicateVertex(ValidationError):
    pass


class NotConvex(ValidationError):
    pass


class DegenerateArea(ValidationError):
    pass


class NonUnitDirection(ValidationError):
    pass


class InvalidEps(ValidationError):
    pass


class KernelNotContained(ValidationError):
    pass


class DegeneratePolygon(NumericalError):
    pass


class UnboundedPolytope(NumericalError):
    pass


class NumericalDegeneracy(NumericalError):
    pass


class NotFullDimensional(NumericalError):
    pass


class DegenerateSimplex(NumericalError):
    pass


class Infeasible(NumericalError):
    pass


class ConstructionFailure(NumericalError):
    pass
