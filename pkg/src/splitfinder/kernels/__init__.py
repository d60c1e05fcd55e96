"""Kernel backend selection: compiled extension with pure-Python fallback.

The environment variable ``SPLITFINDER_KERNEL`` forces a backend:
``native`` (error if the extension is missing) or ``pure``.  Without it the
compiled extension is used when importable.  Both backends implement the
same contracts with identical enumeration order and tie-breaking, so the
choice never affects results, only speed.
"""

from __future__ import annotations

import importlib
import os
from collections.abc import Sequence

from . import pure as _pure

_choice = os.environ.get("SPLITFINDER_KERNEL", "").strip().lower()
_native = None
if _choice in ("", "native"):
    try:
        _native = importlib.import_module("._native", __package__)
    except ImportError:
        if _choice == "native":
            raise
        _native = None

BACKEND = "native" if _native is not None else "pure"

# The native kernels index subsets with a 64-bit word; anything wider is
# routed to the pure backend (arbitrary-precision ints).
_NATIVE_MAX_WIDTH = 62


def _impl(width: int):
    if _native is not None and width <= _NATIVE_MAX_WIDTH:
        return _native
    return _pure


def min_subset_split(masks: Sequence[int], width: int) -> tuple[int, int, int | None]:
    return _impl(width).min_subset_split(masks, width)


def find_split_below(
    masks: Sequence[int], width: int, num: int, den: int
) -> int | None:
    return _impl(width).find_split_below(masks, width, num, den)


def batch_min_split(
    masks: Sequence[int], subsets: Sequence[int]
) -> tuple[int, int, int | None]:
    width = _NATIVE_MAX_WIDTH + 1
    if subsets:
        width = max(s.bit_length() for s in subsets)
    return _impl(width).batch_min_split(masks, subsets)


prepare_masks = _pure.prepare_masks
