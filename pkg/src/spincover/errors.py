"""Exception hierarchy shared by every spincover module."""


class SpinCoverError(Exception):
    """Base class for all library errors."""


class InvariantError(SpinCoverError, ValueError):
    """An input violates a structural precondition (shape, determinant, symmetry)."""


class MembershipError(SpinCoverError, ValueError):
    """A matrix is not a member of the group it is claimed to belong to."""


class GenericityError(SpinCoverError):
    """The Shirokov normalisation MM^rev vanishes, so the minor formula cannot be used."""


class UnsupportedError(SpinCoverError, ValueError):
    """The requested strategy, signature or table entry is not available."""


class BasisError(SpinCoverError, ValueError):
    """A one-vector basis is not in the catalog or violates its axioms."""
