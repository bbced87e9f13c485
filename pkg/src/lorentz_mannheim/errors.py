class MannheimError(Exception):
    pass


class SpecError(MannheimError, ValueError):
    """Bad input description: unknown family, bad parameters, malformed file."""


class UnknownFamily(SpecError):
    pass


class BadParams(SpecError):
    pass


class UnsupportedFormat(SpecError):
    pass


class EmptyReport(SpecError):
    pass


class GeometryError(MannheimError, ArithmeticError):
    """The requested geometric object does not exist or is degenerate."""


class NotUnit(GeometryError):
    pass


class ModeMismatch(GeometryError):
    pass


class OutOfRange(GeometryError):
    pass


class TooFewSamples(SpecError):
    pass


class NullVelocity(GeometryError):
    pass


class NotRegular(GeometryError):
    pass


class ZeroCurvature(GeometryError):
    pass


class NullFrameVector(GeometryError):
    pass


class FrenetConsistencyError(GeometryError):
    pass


class UnlistedConfiguration(GeometryError):
    pass


class ZeroTorsion(GeometryError):
    pass


class ImaginarySpeed(GeometryError):
    pass


class DegeneratePair(GeometryError):
    pass


class DivisionDegenerate(GeometryError):
    pass


class DegenerateSpeed(GeometryError):
    pass


class NotPlanar(GeometryError):
    pass


class PairingError(GeometryError):
    pass


class NotMonotone(GeometryError):
    pass
