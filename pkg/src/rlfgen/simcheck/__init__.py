"""Floating-point simulation and empirical cross-checks of certificates."""

from .core import (DIVERGENCE_BOUND, FloatPoly, Trajectory, ValidationConfig, ValidationReport,
                   ball_starts, lie_vs_fd, pack, simulate, validate_rlf)
from .kernels import KERNELS, KERNELS_ENV, numba_kernels, numpy_kernels, select_kernels

__all__ = ["DIVERGENCE_BOUND", "FloatPoly", "Trajectory", "ValidationConfig", "ValidationReport",
           "ball_starts", "lie_vs_fd", "pack", "simulate", "validate_rlf", "KERNELS", "KERNELS_ENV",
           "numba_kernels", "numpy_kernels", "select_kernels"]
