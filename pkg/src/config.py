# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Capacity limits shared by every construction.

The limits are read from the environment so that batch runs can raise them without
code changes. Values are validated by pydantic.
"""

import logging
import os

from pydantic import BaseModel, Field, ValidationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "HOLIM_"


class CapacityError(RuntimeError):
    """Raised when a construction would exceed a configured limit."""

    def __init__(self, limit: str, value: int, what: str):
        super().__init__(f"{what} exceeds the configured limit {limit}={value}")
        self.limit = limit
        self.value = value


class Limits(BaseModel):
    """Resource limits for enumerations and exhaustive searches."""

    max_simplices: int = Field(
        default=200_000, gt=0, description="Largest number of simplices enumerated in a nerve."
    )
    max_generators: int = Field(
        default=20_000, gt=0, description="Largest rank of a single chain group."
    )
    max_iso_objects: int = Field(
        default=10, gt=0, description="Largest object count for isomorphism search."
    )
    max_powerset_n: int = Field(
        default=9, ge=0, description="Largest n accepted by the power set constructors."
    )

    @classmethod
    def from_env(cls, **overrides: int) -> "Limits":
        """Build limits from `HOLIM_*` environment variables.

        Args:
            overrides: explicit values that win over the environment

        Returns:
            The validated limits.
        """
        values: dict[str, object] = {}
        for name in cls.model_fields:
            raw = os.environ.get(ENV_PREFIX + name.upper())
            if raw is not None:
                logger.debug("Limit %s overridden from environment: %s", name, raw)
                values[name] = raw
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            logger.error("Invalid capacity limits: %s", e)
            raise

    def check(self, limit: str, count: int, what: str):
        """Raise `CapacityError` when `count` is above the named limit."""
        value = getattr(self, limit)
        if count > value:
            logger.error("%s: %d > %s=%d", what, count, limit, value)
            raise CapacityError(limit, value, what)
