"""Unit tests for chua-lyapunov."""
