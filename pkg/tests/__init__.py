"""Tests for the nahm_implosion numerical laboratory."""
