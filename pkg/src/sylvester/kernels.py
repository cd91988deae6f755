"""Selects the compiled kernels when the extension is built, else the Python ones."""
from __future__ import annotations

try:
    from ._kernels import count_points, cube_sum_search

    BACKEND = "cython"
except ImportError:  # extension not built
    from ._kernels_py import count_points, cube_sum_search

    BACKEND = "python"

__all__ = ["BACKEND", "count_points", "cube_sum_search"]
