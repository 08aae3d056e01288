"""Exception hierarchy.

``RegionError`` covers malformed input (the CLI maps it to exit code 2),
``NumericalError`` covers failures of the linear algebra or the enumeration
(exit code 3).
"""


class BoundaryIsingError(Exception):
    pass


class RegionError(BoundaryIsingError, ValueError):
    """Input does not describe a valid matching / region."""


class DuplicateIndex(RegionError):
    pass


class FixedPoint(RegionError):
    pass


class OddSize(RegionError):
    pass


class IndexOutOfRange(RegionError, IndexError):
    pass


class InvalidShape(RegionError):
    """The angle sequence violates the pairing or interleaving constraints."""


class NotADescent(RegionError):
    pass


class ChainNotClosed(RegionError):
    pass


class AlternatingAmbiguous(RegionError):
    pass


class UnpairableDirections(RegionError):
    pass


class LiftFailed(RegionError):
    pass


class BadSamplePoints(RegionError):
    pass


class DomainError(RegionError):
    pass


class NumericalError(BoundaryIsingError, ArithmeticError):
    pass


class Singular(NumericalError):
    pass


class SingularProduct(Singular):
    pass


class RankDeficient(NumericalError):
    pass


class ResidualImaginary(NumericalError):
    pass


class SignPatternViolation(NumericalError):
    pass


class AsymmetryAboveTolerance(NumericalError):
    pass


class GenericityFailure(NumericalError):
    pass


class ColoringInconsistent(NumericalError):
    pass


class TooLarge(NumericalError):
    pass


class SpreadTooLarge(NumericalError):
    pass
