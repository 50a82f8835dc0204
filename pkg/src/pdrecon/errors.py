"""Exception hierarchy shared by every module."""


class PdReconError(Exception):
    """Base class for all library errors."""


class GraphError(PdReconError, ValueError):
    """Invalid graph construction input."""


class OrderOutOfRange(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class ParamOutOfRange(GraphError):
    pass


class SetOutOfRange(PdReconError, ValueError):
    """A vertex-set mask has bits at or above the graph order."""


class ResourceCapError(PdReconError):
    """A computation would exceed a configured size cap."""


class OrderTooLargeForExhaustive(ResourceCapError):
    pass


class OrderTooLargeForEnumeration(ResourceCapError):
    pass


class ReconTooLarge(ResourceCapError):
    pass


class SearchTooLarge(ResourceCapError):
    pass


class TooLargeForCanonical(ResourceCapError):
    pass


class KBelowXNumber(PdReconError, ValueError):
    pass


class NotAVertex(PdReconError, KeyError):
    pass


class UnknownCheckId(PdReconError, KeyError):
    pass
