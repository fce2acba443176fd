"""Tests for logging helpers."""

import logging

import numpy as np

from nahm_implosion.logging_config import (
    MAX_LOG_BODY_LENGTH,
    format_matrix,
    format_summary,
    get_logger,
    set_log_level,
)


def test_set_log_level_accepts_names_and_numbers():
    """Test string and integer levels on the package logger."""
    set_log_level("debug")
    assert logging.getLogger("nahm_implosion").level == logging.DEBUG
    set_log_level(logging.ERROR)
    assert logging.getLogger("nahm_implosion").level == logging.ERROR
    set_log_level("WARNING")


def test_child_loggers_inherit_level():
    """Test that module loggers inherit the package level."""
    set_log_level("INFO")
    assert get_logger("nahm_implosion.hk_metric").getEffectiveLevel() == logging.INFO
    set_log_level("WARNING")


def test_format_matrix():
    """Test shape and dtype prefix of rendered matrices."""
    text = format_matrix(np.eye(2))
    assert text.startswith("<(2, 2) float64>")
    assert format_matrix(None) == "None"


def test_format_summary_truncates():
    """Test sorted JSON rendering and truncation of long tables."""
    assert format_summary({"b": 1, "a": 2}).index('"a"') < format_summary({"b": 1, "a": 2}).index('"b"')
    long = format_summary({f"key_{i}": i for i in range(500)})
    assert "truncated" in long
    assert len(long) < MAX_LOG_BODY_LENGTH + 100
    assert format_summary(None) == "None"
