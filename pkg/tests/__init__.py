"""Tests for gather-cnf."""
