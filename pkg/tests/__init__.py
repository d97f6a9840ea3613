"""Tests for chua-lyapunov."""
