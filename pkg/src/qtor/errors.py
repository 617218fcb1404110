"""Exception hierarchy shared by all qtor modules.

Every error carries a short machine-readable ``code`` (used by the CLI,
which maps any QtorError to exit status 2) plus whatever structured
fields make the failure reproducible: an offending face and its
determinant, a degree, a prime, and so on.
"""

from __future__ import annotations


class QtorError(Exception):
    """Base class for all errors raised by this package."""

    code = "qtor.Error"


class ParseError(QtorError):
    """Malformed JSON input; ``field`` names the offending entry."""

    code = "serialize.Parse"

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


# --- linalg ---------------------------------------------------------------

class DimensionMismatchError(QtorError):
    code = "linalg.DimensionMismatch"


# --- manifold input -------------------------------------------------------

class ValidationError(QtorError):
    """Combinatorial input rejected before any topology is computed."""

    code = "manifold.Invalid"


class NotPureError(ValidationError):
    code = "manifold.NotPure"

    def __init__(self, face, expected):
        super().__init__(
            "maximal face %r has %d vertices, expected %d" % (sorted(face), len(face), expected)
        )
        self.face = tuple(sorted(face))
        self.expected = expected


class DanglingVertexError(ValidationError):
    code = "manifold.DanglingVertex"

    def __init__(self, vertex):
        super().__init__("facet %d appears in no maximal face" % vertex)
        self.vertex = vertex


class NonUnimodularError(ValidationError):
    code = "manifold.NonUnimodular"

    def __init__(self, face, det):
        super().__init__(
            "characteristic minor on face %r has determinant %d, need +-1" % (sorted(face), det)
        )
        self.face = tuple(sorted(face))
        self.det = det


class NotSphereLikeError(ValidationError):
    """Purity held but the h-vector is not symmetric and nonnegative.

    A cheap necessary condition for the face complex to be a simplicial
    sphere; full sphere recognition is out of scope.
    """

    code = "manifold.NotSphereLike"

    def __init__(self, h_vector):
        super().__init__("h-vector %r fails symmetry/nonnegativity" % (list(h_vector),))
        self.h_vector = tuple(h_vector)


# --- cohomology -----------------------------------------------------------

class RankMismatchError(QtorError):
    """Graded ranks disagree with the h-vector; invalid input slipped past
    validation, or basis selection failed."""

    code = "cohomology.RankMismatch"


class WrongDimensionError(QtorError):
    code = "cohomology.WrongDimension"


# --- K-theory -------------------------------------------------------------

class FullnessFailureError(QtorError):
    """The Chern-character image is not full in some degree: its
    associated-graded piece misses part of the integral cohomology.
    Signals data that is not the K-theory of an evenly generated complex."""

    code = "ktheory.FullnessFailure"


class KernelMismatchError(QtorError):
    """The relation lattice of the source generators does not embed in the
    target's, so no lift can send generator to corresponding generator."""

    code = "ktheory.KernelMismatch"


class NotIsoError(QtorError):
    code = "ktheory.NotIso"


# --- e-invariants ---------------------------------------------------------

class MalformedConeError(QtorError):
    code = "einvariant.MalformedCone"


class NotDeformableError(QtorError):
    """Truncating the cone below the requested skeleton is inconsistent:
    the attaching map does not compress into that skeleton."""

    code = "einvariant.NotDeformable"


class EvenPrimeError(QtorError):
    code = "einvariant.EvenPrime"

    def __init__(self, message="p = 2 is outside the odd-primary criterion; use the dimension <= 4 route"):
        super().__init__(message)


class RangeExceededError(QtorError):
    code = "einvariant.RangeExceeded"

    def __init__(self, message, dim=None, bound=None):
        super().__init__(message)
        self.dim = dim
        self.bound = bound


class LiftFailedError(QtorError):
    code = "einvariant.LiftFailed"


# --- rigidity -------------------------------------------------------------

class BoundTooLargeError(QtorError):
    code = "rigidity.BoundTooLarge"

    def __init__(self, candidates, cap):
        super().__init__(
            "isomorphism search would enumerate %d matrices, above the cap %d" % (candidates, cap)
        )
        self.candidates = candidates
        self.cap = cap
