"""Discovery and certification of relaxed Lyapunov functions for polynomial systems."""

__version__ = "0.1.0"
