"""Pure-Python fallback for the subset-enumeration kernel."""

from __future__ import annotations


def minimize_masks(masks) -> list[int]:
    """Drop masks that are supersets of another mask (they count nothing new)."""
    unique = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    kept: list[int] = []
    for m in unique:
        if not any(m & k == k for k in kept):
            kept.append(m)
    return kept


def count_containing_any(nbits: int, masks) -> int:
    """Number of x in [0, 2**nbits) such that x is a superset of some mask."""
    kept = minimize_masks(masks)
    if not kept:
        return 0
    if kept[0] == 0:
        return 1 << nbits
    count = 0
    for x in range(1 << nbits):
        for m in kept:
            if x & m == m:
                count += 1
                break
    return count
