"""Version information for chua-lyapunov."""

__version__ = "0.1.0"
