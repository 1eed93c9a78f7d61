# src/arbor/errors.py

"""
Error types raised by arbor services.

Every error carries a stable machine-readable ``code`` so the CLI (and any
script driving the library) can branch on the failure kind without parsing
messages.
"""

from __future__ import annotations

from enum import Enum
from typing import Any, Optional


class ErrorCode(str, Enum):
    INVALID_ARGUMENT = "invalid-argument"
    DIMENSION_MISMATCH = "dimension-mismatch"
    TRUNCATION_MISMATCH = "truncation-mismatch"
    NONZERO_CONSTANT_TERM = "nonzero-constant-term"
    NOT_INVERTIBLE = "singular-linear-term"
    NON_IDENTITY_LINEAR_TERM = "non-identity-linear-term"
    RESOURCE_LIMIT = "resource-limit"
    MISSING_COEFFICIENT = "missing-coefficient"
    MALFORMED_INPUT = "malformed-json"
    UNKNOWN_VERB = "unknown-verb"
    USAGE = "usage"
    INCONSISTENT_RESULT = "inconsistent-result"


class ArborError(ValueError):
    """Base class; subclasses pin ``code``."""

    code: ErrorCode = ErrorCode.INVALID_ARGUMENT

    def __init__(self, message: str, *, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"code": self.code.value, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return {"error": payload}


class InvalidArgumentError(ArborError):
    code = ErrorCode.INVALID_ARGUMENT


class DimensionMismatchError(ArborError):
    code = ErrorCode.DIMENSION_MISMATCH


class TruncationMismatchError(ArborError):
    code = ErrorCode.TRUNCATION_MISMATCH


class NonzeroConstantTermError(InvalidArgumentError):
    code = ErrorCode.NONZERO_CONSTANT_TERM


class NotInvertibleError(ArborError):
    code = ErrorCode.NOT_INVERTIBLE


class NonIdentityLinearTermError(InvalidArgumentError):
    code = ErrorCode.NON_IDENTITY_LINEAR_TERM


class ResourceLimitError(ArborError):
    """A configured cap (leaves, partition ground set, degree, memo cells) was exceeded."""

    code = ErrorCode.RESOURCE_LIMIT

    def __init__(self, resource: str, requested: int, limit: int):
        super().__init__(
            f"{resource} limit exceeded: requested {requested}, limit is {limit}",
            details={"resource": resource, "requested": requested, "limit": limit},
        )
        self.resource = resource
        self.requested = requested
        self.limit = limit


class MissingCoefficientError(ArborError, LookupError):
    code = ErrorCode.MISSING_COEFFICIENT

    def __init__(self, vertex_type: int, outdegree: Any):
        super().__init__(
            f"no coefficient for type {vertex_type} with outdegree {tuple(outdegree)}",
            details={"type": vertex_type, "outdegree": list(outdegree)},
        )
        self.vertex_type = vertex_type
        self.outdegree = outdegree


class MalformedInputError(ArborError):
    code = ErrorCode.MALFORMED_INPUT


class UsageError(ArborError):
    code = ErrorCode.USAGE


class UnknownVerbError(UsageError):
    code = ErrorCode.UNKNOWN_VERB


class InconsistentResultError(ArborError):
    """Two independent computations of the same quantity disagreed."""

    code = ErrorCode.INCONSISTENT_RESULT
