"""Exception hierarchy shared by every module.

The CLI maps ``LevelLabError`` subclasses to exit code 2; anything else is a bug.
"""


class LevelLabError(Exception):
    pass


class InputError(LevelLabError, ValueError):
    """Malformed or inconsistent input (descriptor mismatch, bad literal, ...)."""


class ResourceError(LevelLabError):
    """A configured cap (field size, Groebner size, extension degree) was exceeded."""


class MembershipError(LevelLabError, ValueError):
    """Target is not in the group generated by the base."""


class UnsupportedError(LevelLabError):
    """Valid input outside the implemented range (e.g. characteristic 2 or 3)."""


class CharacteristicError(UnsupportedError):
    """A level order is divisible by the characteristic."""


class SingularCurveError(InputError):
    """Weierstrass model with zero discriminant."""


class InvalidBasisError(LevelLabError):
    """Torsion basis whose Weil pairing is not primitive."""


class ConsistencyError(LevelLabError):
    """Internal cross-check failed; signals a bug or an invalid object."""
