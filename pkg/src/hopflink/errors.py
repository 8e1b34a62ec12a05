"""Exception hierarchy shared by all modules."""


class HopflinkError(Exception):
    """Base class for every error raised by the package."""


class SizeError(HopflinkError, ValueError):
    pass


class PoleError(HopflinkError, ValueError):
    """A point maps to infinity under stereographic projection."""


class DomainMismatch(HopflinkError, TypeError):
    """A map, point, or operation was used outside its domain (S2 vs S3)."""


class PatchSingularity(HopflinkError, ValueError):
    """A gauge patch was evaluated at (or next to) its singular pole."""


class DegenerateFrame(HopflinkError, ValueError):
    pass


class BandDegeneracy(HopflinkError, ValueError):
    pass


class CurvesTooClose(HopflinkError, ValueError):
    pass


class OpenCurve(HopflinkError, ValueError):
    pass


class LadderBottom(HopflinkError, ValueError):
    """A lowering operator was applied to a state already at m = -j."""


class InvalidLabel(HopflinkError, ValueError):
    pass


class ConvergenceError(HopflinkError, RuntimeError):
    pass


class IoError(HopflinkError, OSError):
    pass
