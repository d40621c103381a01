"""Pure-Python kernels over integer block masks.

Blocks are bitmasks with bit ``r`` set for point rank ``r``.  Python
integers are unbounded, so unlike the compiled twin these routines work
for any number of points; they are the reference implementation the
compiled module is tested against.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = ["colex_combinations", "enumerate_uniform_masks", "orbit_masks", "pair_counts"]


def colex_combinations(n: int, t: int) -> Iterator[tuple[int, ...]]:
    """Size-``t`` subsets of ``range(n)`` in colexicographic order."""
    if t == 0:
        yield ()
        return
    combo = list(range(t))
    while True:
        yield tuple(combo)
        pos = 0
        while pos < t:
            limit = combo[pos + 1] if pos + 1 < t else n
            if combo[pos] + 1 < limit:
                break
            pos += 1
        if pos == t:
            return
        combo[pos] += 1
        for i in range(pos):
            combo[i] = i


def enumerate_uniform_masks(e: Sequence[int], ratios: Sequence[int]) -> list[int]:
    """Masks of all subsets uniform with the given per-level ratios.

    Level by level, a class's subsets are assembled from the subsets of
    its chosen subclasses.  Chosen-subclass combinations run in colex
    order and the assembly is depth-first with the last chosen subclass
    varying fastest; the canonical product-set block therefore comes
    first.  The total equals the product-of-binomials block count.
    """
    masks = [1]
    class_size = 1
    for ei, ti in zip(e, ratios):
        if not 1 <= ti <= ei:
            raise ValueError(f"ratio {ti} out of range [1, {ei}]")
        prev = masks
        n_prev = len(prev)
        masks = []
        for combo in colex_combinations(ei, ti):
            shifts = [j * class_size for j in combo]
            idx = [0] * ti
            prefix = [0] * (ti + 1)
            for l in range(ti):
                prefix[l + 1] = prefix[l] | (prev[0] << shifts[l])
            while True:
                masks.append(prefix[ti])
                pos = ti - 1
                while pos >= 0 and idx[pos] == n_prev - 1:
                    idx[pos] = 0
                    pos -= 1
                if pos < 0:
                    break
                idx[pos] += 1
                for l in range(pos, ti):
                    prefix[l + 1] = prefix[l] | (prev[idx[l]] << shifts[l])
        class_size *= ei
    return masks


def orbit_masks(
    images: Iterable[Sequence[int]], seed: int, cap: int
) -> tuple[bool, list[int]]:
    """Breadth-first closure of ``seed`` under the point permutations.

    Returns ``(complete, found)`` where ``found`` is in discovery order;
    ``complete`` is False when the closure passed ``cap`` elements and
    stopped early.
    """
    gens = [[int(x) for x in g] for g in images]
    seed = int(seed)
    found = [seed]
    seen = {seed}
    head = 0
    while head < len(found):
        m = found[head]
        head += 1
        for g in gens:
            rest = m
            im = 0
            while rest:
                low = rest & -rest
                im |= 1 << g[low.bit_length() - 1]
                rest ^= low
            if im not in seen:
                seen.add(im)
                found.append(im)
                if len(found) > cap:
                    return False, found
    return True, found


def pair_counts(masks: Iterable[int], v: int) -> np.ndarray:
    """Number of blocks containing each point pair; ``counts[p, q]`` for p < q."""
    counts = np.zeros((v, v), dtype=np.int64)
    for m in masks:
        m = int(m)
        bits = []
        while m:
            low = m & -m
            bits.append(low.bit_length() - 1)
            m ^= low
        for a in range(len(bits)):
            pa = bits[a]
            for b in range(a + 1, len(bits)):
                counts[pa, bits[b]] += 1
    return counts
