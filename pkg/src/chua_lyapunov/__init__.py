"""Lyapunov dimension, convergence and entropy toolkit for the Chua memristor model.

Provides finite-time Lyapunov exponents, Kaplan-Yorke dimensions, analytic
eigenvalue-based dimension bounds and convergence certificates, entropy upper
bounds, and self-excited/hidden attractor classification.
"""

from chua_lyapunov.__version__ import __version__

__all__ = ["__version__"]
