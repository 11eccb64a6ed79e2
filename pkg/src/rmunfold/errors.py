"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for geometric failures."""


class DegenerateInput(GeometryError):
    """Input points coincide or are otherwise unusable."""


class DegenerateHull(GeometryError):
    """Hull input is collinear/coplanar or too small."""


class InternalError(RuntimeError):
    """An invariant the algorithms rely on was violated."""


class NotAnEdge(GeometryError):
    """A vertex pair is not an edge of the triangulation."""


class NotAPath(GeometryError):
    """A vertex sequence does not follow mesh edges."""


class NoBracket(RuntimeError):
    """A bisection could not find a sign change on its interval."""


class TooLarge(ValueError):
    """Instance exceeds the size bound of an exhaustive procedure."""


class NoRmConnection(RuntimeError):
    """A vertex could not be joined radially monotonically to the forest.

    Attributes:
        vertex: the stuck vertex index.
        best_tau: the best (smallest) worst-turn angle among the rejected,
            non radially monotone candidates, or None if no candidate existed.
    """

    def __init__(self, vertex, best_tau=None):
        self.vertex = vertex
        self.best_tau = best_tau
        extra = "" if best_tau is None else f" (best non-rm turn {best_tau:.4f} rad)"
        super().__init__(f"no radially monotone connection for vertex {vertex}{extra}")


class DisconnectedDual(GeometryError):
    """Cutting the given edges disconnects the face-dual graph."""


class NotSpanning(GeometryError):
    """Edge set does not span all mesh vertices."""


class CyclicCut(GeometryError):
    """Edge set contains a cycle so it is not a cut tree."""
