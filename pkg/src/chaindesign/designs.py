"""Block construction, enumeration and exact design parameters.

The block set of a feasible parameter pair is the family of all point
sets that are uniform with the derived uniform sequence; it is generated
by the canonical product-set block.  The block count is the exact
product of binomials, and the pair-multiplicity and replication numbers
follow by double counting.  Everything uses unbounded integers: most
feasible parameter sets have block counts far beyond machine range, so
enumeration is guarded by an explicit cap while the arithmetic is not.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from random import Random
from typing import Iterable, Iterator

import numpy as np

from chaindesign import kernels
from chaindesign.chain import ChainSpec, ClassId, array_of
from chaindesign.errors import (
    EnumerationCapError,
    InfeasibleError,
    InternalConsistencyError,
    NotUniformError,
)
from chaindesign.feasibility import UniformSequence, check_ft
from chaindesign.kernels import _pure

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "Block",
    "DesignSpec",
    "canonical_block",
    "is_uniform",
    "block_count",
    "enumerate_blocks",
    "uniform_masks",
    "design_spec",
    "family_params",
    "collapse_chain",
    "random_uniform_block",
    "export_design",
]

DEFAULT_ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class Block:
    """A set of points of one chain, stored as sorted ranks."""

    chain: ChainSpec
    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        ranks = tuple(sorted(int(r) for r in self.ranks))
        object.__setattr__(self, "ranks", ranks)
        if len(set(ranks)) != len(ranks):
            raise ValueError("block points must be distinct")
        if ranks and not (0 <= ranks[0] and ranks[-1] < self.chain.v):
            raise ValueError("block rank out of range")

    @classmethod
    def from_points(cls, chain: ChainSpec, points: Iterable[tuple[int, ...]]) -> Block:
        return cls(chain, tuple(chain.point_rank(chain.validate_point(p)) for p in points))

    @classmethod
    def from_mask(cls, chain: ChainSpec, mask: int) -> Block:
        ranks = []
        mask = int(mask)
        while mask:
            low = mask & -mask
            ranks.append(low.bit_length() - 1)
            mask ^= low
        return cls(chain, tuple(ranks))

    @property
    def points(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.chain.point_coords(r) for r in self.ranks)

    @property
    def mask(self) -> int:
        m = 0
        for r in self.ranks:
            m |= 1 << r
        return m

    @property
    def k(self) -> int:
        return len(self.ranks)

    def __len__(self) -> int:
        return len(self.ranks)


def canonical_block(chain: ChainSpec, y: UniformSequence) -> Block:
    """The product-set block: coordinate ``i`` runs over the first
    ``y_i/y_{i-1}`` values."""
    y.validate_for_chain(chain)
    coords = itertools.product(*(range(t) for t in y.ratios()))
    return Block.from_points(chain, coords)


def is_uniform(chain: ChainSpec, block: Block) -> UniformSequence:
    """Per-level intersection sizes if constant on every met class.

    Raises :class:`NotUniformError` with a witness level and two classes
    of different nonzero counts otherwise; empty blocks are rejected.
    """
    if len(block) == 0:
        raise ValueError("uniformity is defined for nonempty blocks")
    points = block.points
    values = [1]
    for level in range(1, chain.s + 1):
        counts: dict[tuple[int, ...], int] = {}
        for p in points:
            suffix = p[level:]
            counts[suffix] = counts.get(suffix, 0) + 1
        distinct = set(counts.values())
        if len(distinct) > 1:
            (sfx_a, cnt_a), (sfx_b, cnt_b) = _two_witnesses(counts)
            raise NotUniformError(
                level, ClassId(level, sfx_a), cnt_a, ClassId(level, sfx_b), cnt_b
            )
        values.append(distinct.pop())
    y = UniformSequence(tuple(values))
    y.validate_for_chain(chain)
    return y


def _two_witnesses(counts: dict) -> tuple[tuple, tuple]:
    by_count: dict[int, tuple] = {}
    for sfx, cnt in counts.items():
        by_count.setdefault(cnt, sfx)
        if len(by_count) == 2:
            break
    (cnt_a, sfx_a), (cnt_b, sfx_b) = sorted(by_count.items())
    return (sfx_a, cnt_a), (sfx_b, cnt_b)


def block_count(chain: ChainSpec, y: UniformSequence, k: int | None = None) -> int:
    """Exact number of uniform subsets: product of per-level binomials."""
    y.validate_for_chain(chain)
    if k is None:
        k = y.k
    if y.k != k:
        raise ValueError(f"y ends in {y.k}, expected k = {k}")
    b = 1
    for i in range(1, chain.s + 1):
        b *= comb(chain.e[i - 1], y.ratio(i)) ** (k // y[i])
    return b


def uniform_masks(chain: ChainSpec, y: UniformSequence, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """All uniform-subset masks in stream order (needs at most 64 points)."""
    if chain.v > 64:
        raise ValueError("mask enumeration requires at most 64 points")
    b = block_count(chain, y)
    if b > cap:
        raise EnumerationCapError(b, cap)
    return kernels.enumerate_uniform_masks(chain.e, y.ratios())


def enumerate_blocks(
    chain: ChainSpec, y: UniformSequence, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[Block]:
    """Stream every subset uniform with ``y``, each exactly once.

    Deterministic order (see the kernel docstring); the canonical block
    comes first.  Refuses up front, with the exact count, when it
    exceeds ``cap``.
    """
    b = block_count(chain, y)
    if b > cap:
        raise EnumerationCapError(b, cap)
    if chain.v <= 64:
        masks: Iterable[int] = uniform_masks(chain, y, cap)
    else:
        masks = _pure.enumerate_uniform_masks(chain.e, y.ratios())
    return (Block.from_mask(chain, mask) for mask in masks)


@dataclass(frozen=True)
class DesignSpec:
    """Exact parameters of one feasible design."""

    chain: ChainSpec
    k: int
    d: int
    u: int
    y: UniformSequence
    b: int
    lam: int
    r: int


def design_spec(chain: ChainSpec, k: int) -> DesignSpec:
    """Assemble the exact parameter set; rejects infeasible input."""
    report = check_ft(chain, k)
    if not report.feasible:
        raise InfeasibleError(f"(e={chain}, k={k}) fails ft1={report.ft1} ft2={report.ft2}")
    assert report.y is not None and report.u is not None
    b = block_count(chain, report.y, k)
    v = chain.v
    num_lam = b * k * (k - 1)
    den_lam = v * (v - 1)
    if num_lam % den_lam:
        raise InternalConsistencyError("pair multiplicity is not integral")
    num_r = b * k
    if num_r % v:
        raise InternalConsistencyError("replication number is not integral")
    lam = num_lam // den_lam
    r = num_r // v
    if lam * (v - 1) != r * (k - 1):
        raise InternalConsistencyError("lambda (v-1) != r (k-1)")
    return DesignSpec(chain, k, report.d, report.u, report.y, b, lam, r)


def family_params(s: int, d: int) -> tuple[ChainSpec, int]:
    """The explicit feasible family: each size is ``d`` plus the product
    of all previous, and ``k - 1`` is ``(v - 1)/d``."""
    if s < 2 or d < 2:
        raise ValueError("the family needs s >= 2 and d >= 2")
    e = [d + 1]
    for _ in range(s - 1):
        prod = 1
        for x in e:
            prod *= x
        e.append(d + prod)
    chain = ChainSpec(tuple(e))
    k = 1 + (chain.v - 1) // d
    report = check_ft(chain, k)
    if not report.feasible:
        raise InternalConsistencyError(f"family parameters (s={s}, d={d}) came out infeasible")
    return chain, k


def collapse_chain(chain: ChainSpec, k: int, drop: int) -> tuple[ChainSpec, int]:
    """Delete the nontrivial partition at level ``drop`` (1-based).

    The two neighbouring sizes merge, the point count and block size stay
    fixed, and the shorter chain is feasible again; collapsing recomputes
    the conditions rather than assuming them.
    """
    if chain.s < 3:
        raise ValueError("collapsing needs a chain of length at least 3")
    if not 1 <= drop <= chain.s - 1:
        raise ValueError(f"drop level {drop} out of range [1, {chain.s - 1}]")
    if not check_ft(chain, k).feasible:
        raise InfeasibleError(f"(e={chain}, k={k}) is not feasible")
    e = list(chain.e)
    merged = e[drop - 1] * e[drop]
    new_e = e[: drop - 1] + [merged] + e[drop + 1 :]
    collapsed = ChainSpec(tuple(new_e))
    if not check_ft(collapsed, k).feasible:
        raise InternalConsistencyError(f"collapse of (e={chain}, k={k}) at {drop} not feasible")
    return collapsed, k


def random_uniform_block(chain: ChainSpec, y: UniformSequence, rng: Random) -> Block:
    """A uniform subset drawn by random per-class choices at every level."""
    y.validate_for_chain(chain)

    def build(level: int) -> list[tuple[int, ...]]:
        if level == 0:
            return [()]
        chosen = sorted(rng.sample(range(chain.e[level - 1]), y.ratio(level)))
        return [p + (j,) for j in chosen for p in build(level - 1)]

    return Block.from_points(chain, build(chain.s))


def export_design(
    spec: DesignSpec,
    include_blocks: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[str]:
    """Text export: header lines, then optionally one block per line as
    sorted point ranks; over-cap block lists are marked omitted."""
    yield f"v={spec.chain.v}"
    yield f"k={spec.k}"
    yield f"lambda={spec.lam}"
    yield f"b={spec.b}"
    yield f"e={spec.chain}"
    yield f"y={spec.y}"
    if include_blocks:
        if spec.b > cap:
            yield "blocks=omitted(cap-exceeded)"
        else:
            for block in enumerate_blocks(spec.chain, spec.y, cap):
                yield " ".join(str(r) for r in block.ranks)


def intersection_sizes_ok(chain: ChainSpec, blocks: Iterable[Block], y: UniformSequence) -> bool:
    """Every block meets every class in 0 or the level's uniform size."""
    expected = {level: y[level] for level in range(1, chain.s + 1)}
    for block in blocks:
        arr = array_of(chain, block.points)
        for cid, x in arr.values.items():
            if x != expected[cid.level]:
                return False
    return True
