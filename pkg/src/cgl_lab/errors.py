"""Exception hierarchy shared by all cgl_lab modules."""


class CGLLabError(Exception):
    """Base class for every error raised by this package."""


# parameter validation / conversion
class NonPositiveDiffusion(CGLLabError):
    pass


class NonPositivePower(CGLLabError):
    pass


class ZeroNonlinearity(CGLLabError):
    pass


# grids and fields
class BadGridSpec(CGLLabError):
    pass


class SizeMismatch(CGLLabError):
    pass


class BadExponent(CGLLabError):
    pass


# bound-state construction
class DegenerateParameters(CGLLabError):
    pass


class NegativeEta(CGLLabError):
    pass


class NonPositiveFrequency(CGLLabError):
    pass


class EdgeDecayViolated(CGLLabError):
    pass


# continuation
class IndexOutOfRange(CGLLabError):
    pass


class NewtonDiverged(CGLLabError):
    pass


class JacobianSingular(CGLLabError):
    pass


class BranchNotInvertible(CGLLabError):
    pass


class NotEnoughPoints(CGLLabError):
    pass


# time stepping
class SubstepBlowup(CGLLabError):
    def __init__(self, message, t_star=None, node=None):
        super().__init__(message)
        self.t_star = t_star
        self.node = node


# diagnostics
class MissingMonitors(CGLLabError):
    pass


class EigensolveFailed(CGLLabError):
    pass


class ZeroProfile(CGLLabError):
    pass


# scenario files
class ParseError(CGLLabError):
    pass
