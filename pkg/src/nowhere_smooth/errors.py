"""Exception hierarchy shared by all modules."""


class NowhereSmoothError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(NowhereSmoothError, ValueError):
    """Invalid configuration (unknown key, bad value, memory policy)."""


class AmbiguousComparison(NowhereSmoothError):
    """A rational cannot be ordered against an enclosure that contains it."""


class NonPositiveProfile(NowhereSmoothError):
    """The radial profile is not certified to stay strictly positive."""


class NonPositiveRadius(NowhereSmoothError):
    """A sampled radius is zero or negative."""


class EmptySample(NowhereSmoothError, ValueError):
    pass


class CurveNotClosed(NowhereSmoothError):
    pass


class EmptyTargets(NowhereSmoothError, ValueError):
    pass


class EmptyInput(NowhereSmoothError, ValueError):
    pass


class EmptyErosion(NowhereSmoothError):
    """No cell survives erosion; epsilon exceeds the inradius at this resolution."""


class NoneFound(NowhereSmoothError):
    """No epsilon on the ladder passes reconstruction."""


class InsufficientScales(NowhereSmoothError, ValueError):
    pass
