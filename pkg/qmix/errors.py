# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""


__all__ = ("QMixError", "SpecError", "DimensionError", "NotHermitianError",
           "NotPositiveError", "RankDeficientError",
           "NotTracePreservingError", "NotPrimitiveError",
           "NotReversibleError", "NotLazyError", "TheoryViolationError")


class QMixError(Exception):
    """Base class for every error raised by qmix.

    Attributes
    ----------

    message: :class:`str`
        Human readable description of the failure
    """

    kind = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        """Machine readable form, one JSON object per error on stderr."""
        payload = {"error": self.kind, "message": self.message}
        for key, value in self.details.items():
            if value is not None:
                payload[key] = value
        return payload


class SpecError(QMixError):
    """A generator spec or JSON payload does not match the schema.

    Attributes
    ----------

    field: :class:`str`
        Dotted path of the offending field, if known

    line: :class:`int`
        Line of the JSON document where decoding failed, if known
    """

    kind = "malformed_spec"

    def __init__(self, message, field=None, line=None):
        super().__init__(message, field=field, line=line)
        self.field = field
        self.line = line


class DimensionError(QMixError, ValueError):
    kind = "dimension_mismatch"


class NotHermitianError(QMixError, ValueError):
    kind = "not_hermitian"


class NotPositiveError(QMixError, ValueError):
    kind = "not_positive"

    def __init__(self, message="requires a positive definite operator",
                 **details):
        super().__init__(message, **details)


class RankDeficientError(QMixError, ValueError):
    kind = "rank_deficient"


class NotTracePreservingError(QMixError, ValueError):
    kind = "not_trace_preserving"


class NotPrimitiveError(QMixError):
    kind = "not_primitive"


class NotReversibleError(QMixError, ValueError):
    kind = "not_reversible"


class NotLazyError(QMixError, ValueError):
    kind = "not_lazy"


class TheoryViolationError(QMixError):
    """An identity that must hold up to rounding failed beyond tolerance.

    Attributes
    ----------

    lhs: :class:`float`
        Left hand side of the checked identity

    rhs: :class:`float`
        Right hand side of the checked identity
    """

    kind = "theory_violation"

    def __init__(self, message, lhs=None, rhs=None):
        super().__init__(message, lhs=lhs, rhs=rhs)
        self.lhs = lhs
        self.rhs = rhs
