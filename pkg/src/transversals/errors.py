"""Exception hierarchy."""


class TransversalError(Exception):
    """Base class for every error raised by this package."""


class EmptyInput(TransversalError, ValueError):
    pass


class NotDisjoint(TransversalError):
    pass


class NoWitness(TransversalError):
    pass


class NotTransversal(TransversalError):
    pass


class LevelOutOfRange(TransversalError, ValueError):
    pass


class Inconclusive(TransversalError):
    """Too many boundary-ambiguous faces; refine the mesh.

    The partially computed report is attached as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotBracketed(TransversalError):
    pass


class WitnessNotFound(TransversalError):
    pass


class ValidationFailed(TransversalError):
    pass


class FrameDegenerate(TransversalError):
    pass


class OutOfRange(TransversalError, ValueError):
    pass


class DisjointnessFailure(TransversalError):
    pass


class EpsTooLarge(TransversalError, ValueError):
    pass


class PlacementFailure(TransversalError):
    pass


class StartTransversal(TransversalError):
    pass


class SceneError(TransversalError, ValueError):
    """Malformed scene document."""
