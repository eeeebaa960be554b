"""Tests for environment settings and seeded streams."""

from __future__ import annotations

import pytest
from pydantic import ValidationError

from vsn_alloc.config import ENV_LOG_LEVEL, ENV_NODE_LIMIT, ENV_TIME_LIMIT, load_settings
from vsn_alloc.rng import SeededRNG


class TestSettings:
    def test_defaults(self) -> None:
        settings = load_settings({})
        assert settings.time_limit_s == 60.0
        assert settings.node_limit == 100_000
        assert settings.log_level == "WARNING"

    def test_environment_overrides(self) -> None:
        settings = load_settings(
            {ENV_TIME_LIMIT: "2.5", ENV_NODE_LIMIT: "40", ENV_LOG_LEVEL: "debug"}
        )
        assert settings.time_limit_s == 2.5
        assert settings.node_limit == 40
        assert settings.log_level == "DEBUG"

    def test_empty_values_are_ignored(self) -> None:
        assert load_settings({ENV_TIME_LIMIT: ""}).time_limit_s == 60.0

    def test_rejects_non_positive_limit(self) -> None:
        with pytest.raises(ValidationError):
            load_settings({ENV_TIME_LIMIT: "0"})


class TestSeededRNG:
    def test_same_seed_same_draws(self) -> None:
        a, b = SeededRNG(5), SeededRNG(5)
        assert [a.uniform(0, 1) for _ in range(5)] == [b.uniform(0, 1) for _ in range(5)]

    def test_fork_ignores_parent_state(self) -> None:
        parent = SeededRNG(11)
        before = parent.fork("nodes").uniform(0, 1)
        parent.uniform(0, 1)
        assert parent.fork("nodes").uniform(0, 1) == before

    def test_forks_differ_by_name(self) -> None:
        rng = SeededRNG(11)
        assert rng.fork("nodes").seed != rng.fork("sinks").seed

    def test_permutation_leaves_input(self) -> None:
        items = [1, 2, 3, 4]
        shuffled = SeededRNG(0).permutation(items)
        assert items == [1, 2, 3, 4]
        assert sorted(shuffled) == items
