"""Selects the compiled kernels when built, else the pure-Python ones.

Set ``CODINGTREES_PURE=1`` to force the fallback.
"""
import os

BACKEND = "python"

if os.environ.get("CODINGTREES_PURE", "") not in ("", "0"):
    from codingtrees._kernels_py import between_search, first_difference, lex_compare
else:
    try:
        from codingtrees._ckernels import between_search, first_difference, lex_compare

        BACKEND = "cython"
    except ImportError:  # extension not built
        from codingtrees._kernels_py import between_search, first_difference, lex_compare

__all__ = ["BACKEND", "between_search", "first_difference", "lex_compare"]
