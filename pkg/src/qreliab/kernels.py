"""Backend selection for the hot enumeration kernel.

Prefers the compiled extension and falls back to pure Python when the
extension was not built.  ``BACKEND`` records which one is active.
"""

from __future__ import annotations

try:
    from qreliab._fastcount import count_containing_any

    BACKEND = "cython"
except ImportError:  # extension not built
    from qreliab._purecount import count_containing_any

    BACKEND = "python"

__all__ = ["BACKEND", "count_containing_any"]
