# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Unit tests for the config module."""

import pytest
from pydantic import ValidationError

from config import CapacityError, Limits


class TestLimits:
    """Tests for Limits."""

    def test_defaults(self, monkeypatch):
        """Without environment overrides the documented defaults apply."""
        for name in ("SIMPLICES", "GENERATORS", "ISO_OBJECTS", "POWERSET_N"):
            monkeypatch.delenv(f"HOLIM_MAX_{name}", raising=False)
        limits = Limits.from_env()
        assert limits.max_simplices == 200_000
        assert limits.max_generators == 20_000
        assert limits.max_iso_objects == 10
        assert limits.max_powerset_n == 9

    def test_environment_override(self, monkeypatch):
        """HOLIM_* variables override the defaults."""
        monkeypatch.setenv("HOLIM_MAX_SIMPLICES", "50")
        assert Limits.from_env().max_simplices == 50

    def test_explicit_override_wins(self, monkeypatch):
        """Keyword overrides win over the environment; None is ignored."""
        monkeypatch.setenv("HOLIM_MAX_GENERATORS", "50")
        limits = Limits.from_env(max_generators=7, max_simplices=None)
        assert limits.max_generators == 7

    def test_invalid_environment(self, monkeypatch):
        """Non-positive limits are rejected by validation."""
        monkeypatch.setenv("HOLIM_MAX_SIMPLICES", "0")
        with pytest.raises(ValidationError):
            Limits.from_env()


class TestCheck:
    """Tests for Limits.check()."""

    def test_within_limit(self):
        """Counts up to the limit pass."""
        Limits(max_simplices=10).check("max_simplices", 10, "nerve")

    def test_over_limit(self):
        """The error names the limit and its value."""
        with pytest.raises(CapacityError, match="max_simplices=10") as e:
            Limits(max_simplices=10).check("max_simplices", 11, "nerve")
        assert e.value.limit == "max_simplices"
        assert e.value.value == 10
