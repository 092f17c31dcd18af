"""Exceptions raised by the solvers."""


class SpectrumError(Exception):
    """Base class for every error raised by this package."""


class NotAnEigenpair(SpectrumError):
    pass


class DegenerateEigenfunction(SpectrumError):
    pass


class GridTooCoarse(SpectrumError):
    pass


class BoundaryRoot(SpectrumError):
    pass


class NonConvergence(SpectrumError):
    pass


class DegenerateJacobian(SpectrumError):
    pass


class MissingExtremum(SpectrumError):
    pass


class SymmetryViolation(SpectrumError):
    pass


class LostTrack(SpectrumError):
    pass


class DomainError(SpectrumError, ValueError):
    pass


class SearchExhausted(SpectrumError):
    pass


class NearDegenerate(SpectrumError):
    pass


class FredholmViolated(SpectrumError):
    pass
