"""Exception hierarchy.

Every error raised on bad input derives from :class:`InferCostError`, so the
CLI can map the whole family to exit status 1. Validation errors carry the
offending field name and, when raised while parsing a file, the 1-based line
number.
"""

from __future__ import annotations

from typing import Optional


class InferCostError(Exception):
    """Base class for all package errors."""


class ValidationError(InferCostError, ValueError):
    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.field = field
        self.line = line

    def __str__(self) -> str:
        prefix = f"line {self.line}: " if self.line is not None else ""
        return f"{prefix}{self.message}"


# core types
class NonPositiveLatency(ValidationError):
    pass


class NonFiniteInput(ValidationError):
    pass


class MetricOutOfRange(ValidationError):
    pass


class UnknownPrecision(ValidationError):
    pass


class DuplicateKey(ValidationError):
    pass


class NegativeLatencyBound(ValidationError):
    pass


class EmptyPrecisionSet(ValidationError):
    pass


# ingest
class EmptyQuoteList(ValidationError):
    pass


class NegativeRate(ValidationError):
    pass


class UnknownConfig(ValidationError):
    pass


class MalformedHeader(ValidationError):
    pass


class MalformedRow(ValidationError):
    pass


class WarmupExceedsLength(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class EmptyPairs(ValidationError):
    pass


# cost engine
class MissingPrice(InferCostError, KeyError):
    def __init__(self, config_id: str):
        super().__init__(config_id)
        self.config_id = config_id

    def __str__(self) -> str:
        return f"no price for config {self.config_id!r}"


class EmptyRecordSet(ValidationError):
    pass


class ZeroBaseline(ValidationError):
    pass


class EmptyList(ValidationError):
    pass


# stats
class NoPostWarmupSamples(ValidationError):
    pass


class InvalidAlpha(ValidationError):
    pass


class NTooLarge(ValidationError):
    pass


# harness
class NegativeDelay(ValidationError):
    pass


class BackendSpecError(ValidationError):
    pass


class BackendFailure(InferCostError, RuntimeError):
    def __init__(self, iteration: int, cause: BaseException):
        super().__init__(f"backend failed at iteration {iteration}: {cause!r}")
        self.iteration = iteration
        self.cause = cause


# report / cli selectors
class NoMatch(ValidationError):
    pass


class AmbiguousSelector(ValidationError):
    pass
