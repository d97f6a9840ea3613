"""Integration tests for chua-lyapunov."""
