"""Tests for FastAPI Pulse CLI."""
