"""Error taxonomy shared by every torus-lab module.

Each error carries a stable ``name`` which the CLI prints as
``error[<name>]``.
"""

from __future__ import annotations


class TorusLabError(ValueError):
    """Base class for all domain errors raised by torus-lab."""

    name = "internal-error"


class TruncationTooSmallError(TorusLabError):
    """The truncation level p is too small for the requested computation."""

    name = "truncation-too-small"


class InvalidSequenceError(TorusLabError):
    """A sequence form is malformed."""

    name = "invalid-sequence"


class NotInNormalFormError(TorusLabError):
    """A word is legal but not of sequence shape."""

    name = "not-in-normal-form"


class MalformedPsiError(TorusLabError):
    """A Ψ-code violates the shape rules."""

    name = "malformed-psi"


class NoPsiFormError(TorusLabError):
    """A sequence has no Ψ-code (not rigid, not strongly reduced)."""

    name = "no-psi-form"


class InvalidParameterError(TorusLabError):
    """A numeric or configuration parameter is out of range."""

    name = "invalid-parameter"


class InvalidInputError(TorusLabError):
    """Inputs are individually valid but unusable together."""

    name = "invalid-input"


class NotABandError(TorusLabError):
    """A cyclic word is a proper power or otherwise not a band."""

    name = "not-a-band"


class NotAnEdgeError(TorusLabError):
    """Two components are not adjacent."""

    name = "not-an-edge"


class UnsupportedError(TorusLabError):
    """The operation is not defined for this kind of component."""

    name = "unsupported"


class NotAComponentGVectorError(TorusLabError):
    """An integer triple is not the g-vector of any component."""

    name = "not-a-component-gvector"


class SearchBoundExceededError(TorusLabError):
    """A bounded search hit its iteration cap."""

    name = "search-bound-exceeded"


class InternalError(TorusLabError):
    """An invariant that must always hold was violated."""

    name = "internal-error"


__all__ = [
    "InternalError",
    "InvalidInputError",
    "InvalidParameterError",
    "InvalidSequenceError",
    "MalformedPsiError",
    "NoPsiFormError",
    "NotABandError",
    "NotAComponentGVectorError",
    "NotAnEdgeError",
    "NotInNormalFormError",
    "SearchBoundExceededError",
    "TorusLabError",
    "TruncationTooSmallError",
    "UnsupportedError",
]
