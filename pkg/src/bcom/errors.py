"""Exception hierarchy and resource limits shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass


class BcomError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for this failure."""

    exit_code = 1


class ValidationError(BcomError, ValueError):
    exit_code = 2


class GroupValidationError(ValidationError):
    """A multiplication table failed a group axiom.

    ``witness`` holds the first failing element or triple.
    """

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class SimplicialError(ValidationError):
    pass


class TruncationError(ValidationError):
    pass


class ResourceLimitError(BcomError):
    exit_code = 3


class VerificationError(BcomError):
    exit_code = 4


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    value = int(raw)
    if value <= 0:
        raise ValidationError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Limits:
    max_group_order: int = 500
    max_subgroup_search_order: int = 400
    max_subgroups: int = 20000
    max_symmetric_degree: int = 5
    max_tuple_estimate: int = 10**9
    max_simplices: int = 3_000_000

    @classmethod
    def from_env(cls) -> "Limits":
        base = cls()
        return cls(
            max_group_order=_env_int("BCOM_MAX_GROUP_ORDER", base.max_group_order),
            max_subgroup_search_order=_env_int(
                "BCOM_MAX_SUBGROUP_SEARCH_ORDER", base.max_subgroup_search_order
            ),
            max_subgroups=_env_int("BCOM_MAX_SUBGROUPS", base.max_subgroups),
            max_symmetric_degree=_env_int(
                "BCOM_MAX_SYMMETRIC_DEGREE", base.max_symmetric_degree
            ),
            max_tuple_estimate=_env_int("BCOM_MAX_TUPLE_ESTIMATE", base.max_tuple_estimate),
            max_simplices=_env_int("BCOM_MAX_SIMPLICES", base.max_simplices),
        )


def limits() -> Limits:
    """Current limits; environment overrides are re-read on every call."""
    return Limits.from_env()
