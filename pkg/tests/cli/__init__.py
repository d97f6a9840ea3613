"""CLI tests for chua-lyapunov."""
