class AlcoveError(Exception):
    """Base class for every error raised by the toolkit"""


class DomainError(AlcoveError, ValueError):
    """Input outside the domain of an operation (bad rank, non-minuscule index, point outside the alcove)"""


class DimensionMismatchError(DomainError):
    """Vectors or matrices of incompatible sizes"""


class UnboundedPolytopeError(DomainError):
    """Vertex enumeration was requested for an unbounded half-space system"""


class DegeneratePolytopeError(DomainError):
    """A polytope expected to be full-dimensional is not"""


class BalanceError(DomainError):
    """A balanced-root support violates the disjointness, swap or minuscule conditions"""


class FaceCapExceededError(AlcoveError):
    """The face lattice is larger than the configured cap"""

    def __init__(self, cap: int, label: str = ''):
        self.cap = cap
        self.label = label
        super().__init__(f'face lattice of {label or "polytope"} exceeds the cap of {cap} faces')


class VerificationError(AlcoveError):
    """An exact internal self-check failed"""


class ConfigurationError(AlcoveError):
    """Invalid environment configuration"""


class UsageError(AlcoveError):
    """Command line could not be parsed"""
