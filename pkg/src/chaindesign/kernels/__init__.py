"""Kernel dispatch: compiled extension when built, pure Python otherwise.

Set ``CHAINDESIGN_PURE=1`` in the environment to force the pure kernels
even when the compiled module is available.
"""

from __future__ import annotations

import os

import numpy as np

from chaindesign.kernels import _pure

_impl = None
if not os.environ.get("CHAINDESIGN_PURE"):
    try:
        from chaindesign.kernels import _speedups as _impl
    except ImportError:
        _impl = None

IMPLEMENTATION = "cython" if _impl is not None else "python"


def using_speedups() -> bool:
    return _impl is not None


def enumerate_uniform_masks(e, ratios) -> np.ndarray:
    """Uniform-subset masks in stream order, as a uint64 array (v <= 64)."""
    if _impl is not None:
        return _impl.enumerate_uniform_masks(list(e), list(ratios))
    return np.array(_pure.enumerate_uniform_masks(e, ratios), dtype=np.uint64)


def orbit_masks(images, seed: int, cap: int) -> tuple[bool, np.ndarray]:
    """BFS closure of a mask under point permutations (v <= 64)."""
    if _impl is not None:
        return _impl.orbit_masks(np.ascontiguousarray(images, dtype=np.int64), int(seed), int(cap))
    complete, found = _pure.orbit_masks(images, int(seed), int(cap))
    return complete, np.array(found, dtype=np.uint64)


def pair_counts(masks, v: int) -> np.ndarray:
    """Per-pair block counts as a (v, v) int64 matrix, upper triangle."""
    if _impl is not None:
        return _impl.pair_counts(np.ascontiguousarray(masks, dtype=np.uint64), int(v))
    return _pure.pair_counts([int(m) for m in masks], int(v))
