"""The chain stabilizer as explicit point permutations, and its orbits.

The full stabilizer of the partition chain is an iterated wreath product
of symmetric groups; it is generated by two permutations per level (a
transposition and a full cycle of that level's coordinate), each
supported on the level's first class.  Orbits of points, blocks and
flags are plain breadth-first closures with a mandatory cap; block
orbits go through the mask kernels whenever the point count allows.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from random import Random
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from chaindesign import kernels
from chaindesign.chain import ChainPermutation, ChainSpec
from chaindesign.designs import Block, canonical_block, is_uniform
from chaindesign.errors import InternalConsistencyError, OrbitCapError
from chaindesign.feasibility import UniformSequence

__all__ = [
    "GeneratorSet",
    "Flag",
    "wreath_generators",
    "wreath_order",
    "generated_group_order",
    "orbit",
    "orbit_block_masks",
    "stabilizer_transitive_on_block",
    "restricted_block_generators",
    "random_chain_permutation",
    "orbit_membership_witness",
]

DEFAULT_ORBIT_CAP = 10**6


@dataclass(frozen=True)
class GeneratorSet:
    chain: ChainSpec
    gens: tuple[ChainPermutation, ...]

    def __iter__(self):
        return iter(self.gens)

    def __len__(self) -> int:
        return len(self.gens)

    def images_matrix(self) -> np.ndarray:
        if not self.gens:
            return np.empty((0, self.chain.v), dtype=np.int64)
        return np.array([g.images for g in self.gens], dtype=np.int64)


class Flag(NamedTuple):
    """An incident point/block pair, the point by rank."""

    point_rank: int
    block: Block


def _coordinate_generator(chain: ChainSpec, level: int, sigma: Sequence[int]) -> ChainPermutation:
    """Permute coordinate ``level`` by ``sigma`` inside the level's first
    class (all higher coordinates zero); identity elsewhere."""
    images = []
    for r in range(chain.v):
        coords = chain.point_coords(r)
        if any(coords[j] for j in range(level, chain.s)):
            images.append(r)
        else:
            moved = coords[: level - 1] + (sigma[coords[level - 1]],) + coords[level:]
            images.append(chain.point_rank(moved))
    return ChainPermutation(chain, tuple(images))


def _transposition(n: int) -> tuple[int, ...]:
    return (1, 0) + tuple(range(2, n))


def _full_cycle(n: int) -> tuple[int, ...]:
    return tuple((i + 1) % n for i in range(n))


def wreath_generators(chain: ChainSpec) -> GeneratorSet:
    """Two generators per level for the full chain stabilizer."""
    gens = []
    for level in range(1, chain.s + 1):
        n = chain.e[level - 1]
        gens.append(_coordinate_generator(chain, level, _transposition(n)))
        gens.append(_coordinate_generator(chain, level, _full_cycle(n)))
    return GeneratorSet(chain, tuple(gens))


def wreath_order(chain: ChainSpec) -> int:
    """Order of the full stabilizer: one symmetric group per class."""
    order = 1
    for i in range(1, chain.s + 1):
        order *= factorial(chain.e[i - 1]) ** chain.d_counts[i]
    return order


def generated_group_order(gens: GeneratorSet, cap: int = 10**6) -> int:
    """Size of the generated permutation group by plain closure.

    Only sensible for tiny chains; raises :class:`OrbitCapError` beyond
    ``cap`` elements.
    """
    base = [g.images for g in gens]
    identity = tuple(range(gens.chain.v))
    seen = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for x in frontier:
            for g in base:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    fresh.append(y)
                    if len(seen) > cap:
                        raise OrbitCapError(len(seen), cap)
        frontier = fresh
    return len(seen)


def _bfs(seed, neighbours, cap: int) -> set:
    found = [seed]
    seen = {seed}
    head = 0
    while head < len(found):
        x = found[head]
        head += 1
        for y in neighbours(x):
            if y not in seen:
                seen.add(y)
                found.append(y)
                if len(seen) > cap:
                    raise OrbitCapError(len(seen), cap)
    return seen


def orbit_block_masks(
    chain: ChainSpec, gens: GeneratorSet, seed_mask: int, cap: int = DEFAULT_ORBIT_CAP
) -> np.ndarray:
    """Mask orbit via the kernels (needs at most 64 points)."""
    if chain.v > 64:
        raise ValueError("mask orbits require at most 64 points")
    complete, found = kernels.orbit_masks(gens.images_matrix(), seed_mask, cap)
    if not complete:
        raise OrbitCapError(len(found), cap)
    return found


def orbit(seed, gens: GeneratorSet, cap: int = DEFAULT_ORBIT_CAP) -> set:
    """Closure of a point rank, block or flag under the generators."""
    chain = gens.chain
    if isinstance(seed, int):
        return _bfs(seed, lambda r: (g.images[r] for g in gens), cap)
    if isinstance(seed, Block):
        if chain.v <= 64:
            found = orbit_block_masks(chain, gens, seed.mask, cap)
            return {Block.from_mask(chain, int(m)) for m in found}
        ranks = frozenset(seed.ranks)
        closure = _bfs(ranks, lambda B: (frozenset(g.images[r] for r in B) for g in gens), cap)
        return {Block(chain, tuple(B)) for B in closure}
    if isinstance(seed, Flag):
        start = (seed.point_rank, seed.block.mask)
        closure = _bfs(
            start,
            lambda f: ((g.images[f[0]], g.apply_mask(f[1])) for g in gens),
            cap,
        )
        return {Flag(r, Block.from_mask(chain, m)) for r, m in closure}
    raise TypeError(f"cannot orbit a {type(seed).__name__}")


def restricted_block_generators(block: Block) -> GeneratorSet:
    """Generators of a block-stabilizing subgroup that is transitive on
    the block.

    For the canonical block these permute, at each level, only the first
    ``y_i/y_{i-1}`` coordinate values inside the level's first class; for
    any other uniform block the same generators are conjugated by a
    permutation carrying the canonical block onto it.
    """
    chain = block.chain
    y = is_uniform(chain, block)
    gens = []
    for level in range(1, chain.s + 1):
        n = chain.e[level - 1]
        t = y.ratio(level)
        if t < 2:
            continue
        swap = _transposition(n)
        cycle = tuple((i + 1) % t if i < t else i for i in range(n))
        gens.append(_coordinate_generator(chain, level, swap))
        gens.append(_coordinate_generator(chain, level, cycle))

    if block != canonical_block(chain, y):
        witness = orbit_membership_witness(chain, y, block)
        if witness is None:
            raise InternalConsistencyError("uniform block has no canonical witness")
        inv = witness.inverse()
        gens = [inv.compose(g).compose(witness) for g in gens]
    return GeneratorSet(chain, tuple(gens))


def stabilizer_transitive_on_block(block: Block) -> bool:
    """Whether the restricted stabilizing generators reach all of the
    block from one of its points."""
    if len(block) == 1:
        return True
    gens = restricted_block_generators(block)
    reached = _bfs(
        block.ranks[0],
        lambda r: (g.images[r] for g in gens),
        cap=block.chain.v,
    )
    return reached == set(block.ranks)


def _permutation_from_sigmas(
    chain: ChainSpec, sigmas: Mapping[tuple[int, int], Sequence[int]]
) -> ChainPermutation:
    """Assemble a chain permutation from per-(level, class) coordinate
    permutations, applied from the top level down; missing entries are
    the identity."""
    images = []
    for r in range(chain.v):
        coords = list(chain.point_coords(r))
        idx = 0
        for level in range(chain.s, 0, -1):
            sigma = sigmas.get((level, idx))
            x = coords[level - 1] if sigma is None else sigma[coords[level - 1]]
            coords[level - 1] = x
            idx = x + chain.e[level - 1] * idx
        images.append(chain.point_rank(tuple(coords)))
    return ChainPermutation(chain, tuple(images))


def random_chain_permutation(chain: ChainSpec, rng: Random) -> ChainPermutation:
    """Uniform random element of the full chain stabilizer."""
    sigmas: dict[tuple[int, int], Sequence[int]] = {}
    for level in range(chain.s, 0, -1):
        n = chain.e[level - 1]
        for idx in range(chain.d_counts[level]):
            perm = list(range(n))
            rng.shuffle(perm)
            sigmas[(level, idx)] = perm
    return _permutation_from_sigmas(chain, sigmas)


def orbit_membership_witness(
    chain: ChainSpec, y: UniformSequence, block: Block
) -> ChainPermutation | None:
    """A chain permutation carrying the canonical block onto ``block``.

    Built constructively, level by level: at each class the coordinate
    values met by the target pick where the canonical values go.  Returns
    None when the target is not uniform with ``y``.
    """
    y.validate_for_chain(chain)
    if len(block) != y.k:
        return None
    sigmas: dict[tuple[int, int], Sequence[int]] = {}

    def assign(level: int, target: list[tuple[int, ...]], idx: int) -> bool:
        if level == 0:
            return len(target) == 1
        n = chain.e[level - 1]
        t = y.ratio(level)
        chosen = sorted({p[level - 1] for p in target})
        if len(chosen) != t:
            return False
        rest = [x for x in range(n) if x not in chosen]
        sigma = chosen + rest
        sub = {j: [] for j in chosen}
        for p in target:
            sub[p[level - 1]].append(p[: level - 1])
        if any(len(pts) * t != len(target) for pts in sub.values()):
            return False
        sigmas[(level, idx)] = sigma
        return all(
            assign(level - 1, sub[j], j + chain.e[level - 1] * idx) for j in chosen
        )

    if not assign(chain.s, [tuple(p) for p in block.points], 0):
        return None
    g = _permutation_from_sigmas(chain, sigmas)
    image = {g.images[r] for r in canonical_block(chain, y).ranks}
    if image != set(block.ranks):
        return None
    return g
