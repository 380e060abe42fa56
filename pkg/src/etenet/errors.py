"""Exception hierarchy shared by all etenet modules."""


class EtenetError(Exception):
    """Base class for all library errors."""


# panel
class EmptySeries(EtenetError):
    pass


class NoPriorClose(EtenetError):
    """First calendar date precedes every observation; cannot forward-fill."""


class NonPositivePrice(EtenetError):
    pass


class TooShort(EtenetError):
    pass


class DuplicateLabel(EtenetError):
    pass


class LagTooLarge(EtenetError):
    pass


# discretize
class EmptyData(EtenetError):
    pass


class ZeroWidth(EtenetError):
    pass


class OutOfRange(EtenetError):
    """Value outside the binning range; the bins were fit on different data."""


class LengthMismatch(EtenetError):
    pass


# matrices
class LabelMismatch(EtenetError):
    pass


class KindMismatch(EtenetError):
    pass


class ZeroVariance(EtenetError):
    pass


class ShapeMismatch(EtenetError):
    pass


class ShapeTooSmall(EtenetError):
    pass


# graphs / embedding
class EmptyGraph(EtenetError):
    pass


class NonConvergence(EtenetError):
    pass


class DegenerateInput(EtenetError):
    pass


# flows / cli
class UnknownLabel(EtenetError):
    pass


class InvalidParams(EtenetError):
    pass


class MissingArtifact(EtenetError):
    pass
