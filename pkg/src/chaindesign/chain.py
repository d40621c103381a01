"""Point sets carrying a chain of nested partitions.

The point set is the Cartesian product of cyclic index sets with sizes
``e = (e_1, ..., e_s)``.  Level ``i`` of the chain partitions the points by
their last ``s - i`` coordinates, so level 0 is the partition into
singletons and level ``s`` is the whole set.  Points are addressed either
by coordinate tuple or by mixed-radix rank with the first coordinate least
significant; with that encoding every class is a contiguous rank interval,
which the enumeration and orbit kernels exploit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from chaindesign.errors import ChainPreservationError

__all__ = [
    "ChainSpec",
    "ClassId",
    "ArrayFunction",
    "ChainPermutation",
    "class_of",
    "parent_class",
    "classes_meeting",
    "array_of",
    "permute_array",
    "parse_chain",
    "parse_point",
    "format_point",
]


@dataclass(frozen=True)
class ChainSpec:
    """A partition chain determined by the coordinate sizes ``e``."""

    e: tuple[int, ...]
    s: int = field(init=False, compare=False, repr=False)
    v: int = field(init=False, compare=False, repr=False)
    c: tuple[int, ...] = field(init=False, compare=False, repr=False)
    d_counts: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        e = tuple(int(x) for x in self.e)
        object.__setattr__(self, "e", e)
        if len(e) < 2:
            raise ValueError("a chain needs at least two levels")
        if any(x < 2 for x in e):
            raise ValueError("every coordinate size must be at least 2")
        c = [1]
        for x in e:
            c.append(c[-1] * x)
        v = c[-1]
        d_counts = tuple(v // ci for ci in c)
        object.__setattr__(self, "s", len(e))
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "c", tuple(c))
        object.__setattr__(self, "d_counts", d_counts)

    # -- points ---------------------------------------------------------

    def validate_point(self, coords: tuple[int, ...]) -> tuple[int, ...]:
        coords = tuple(int(x) for x in coords)
        if len(coords) != self.s:
            raise ValueError(f"point {coords} has {len(coords)} coordinates, expected {self.s}")
        for x, ei in zip(coords, self.e):
            if not 0 <= x < ei:
                raise ValueError(f"coordinate {x} out of range [0, {ei}) in {coords}")
        return coords

    def point_rank(self, coords: tuple[int, ...]) -> int:
        """Mixed-radix rank of a point, first coordinate least significant."""
        rank = 0
        for x, ci in zip(coords, self.c):
            rank += x * ci
        return rank

    def point_coords(self, rank: int) -> tuple[int, ...]:
        if not 0 <= rank < self.v:
            raise ValueError(f"rank {rank} out of range [0, {self.v})")
        coords = []
        for ei in self.e:
            rank, x = divmod(rank, ei)
            coords.append(x)
        return tuple(coords)

    def points(self) -> Iterator[tuple[int, ...]]:
        for rank in range(self.v):
            yield self.point_coords(rank)

    # -- classes --------------------------------------------------------

    def num_classes(self, level: int) -> int:
        self._check_level(level)
        return self.d_counts[level]

    def class_size(self, level: int) -> int:
        self._check_level(level)
        return self.c[level]

    def class_index(self, cid: ClassId) -> int:
        """Rank of a class among the level's classes (suffix mixed-radix)."""
        idx = 0
        weight = 1
        for x, ei in zip(cid.suffix, self.e[cid.level :]):
            idx += x * weight
            weight *= ei
        return idx

    def class_from_index(self, level: int, index: int) -> ClassId:
        self._check_level(level)
        if not 0 <= index < self.d_counts[level]:
            raise ValueError(f"class index {index} out of range at level {level}")
        suffix = []
        for ei in self.e[level:]:
            index, x = divmod(index, ei)
            suffix.append(x)
        return ClassId(level, tuple(suffix))

    def class_range(self, cid: ClassId) -> range:
        """Ranks of the class's points; classes are contiguous intervals."""
        size = self.c[cid.level]
        start = self.class_index(cid) * size
        return range(start, start + size)

    def class_mask(self, cid: ClassId) -> int:
        r = self.class_range(cid)
        return ((1 << len(r)) - 1) << r.start

    def classes(self, level: int) -> Iterator[ClassId]:
        for idx in range(self.num_classes(level)):
            yield self.class_from_index(level, idx)

    def _check_level(self, level: int) -> None:
        if not 0 <= level <= self.s:
            raise ValueError(f"level {level} out of range [0, {self.s}]")

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.e)


@dataclass(frozen=True)
class ClassId:
    """A class at ``level``, identified by the fixed trailing coordinates."""

    level: int
    suffix: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "suffix", tuple(int(x) for x in self.suffix))

    def __str__(self) -> str:
        return f"C[{self.level}]({','.join(str(x) for x in self.suffix)})"


def class_of(chain: ChainSpec, point: tuple[int, ...], level: int) -> ClassId:
    """The unique level-``level`` class containing ``point``."""
    chain._check_level(level)
    coords = chain.validate_point(point)
    cid = ClassId(level, coords[level:])
    if len(cid.suffix) != chain.s - level:
        raise ValueError("suffix length mismatch")
    return cid


def parent_class(cid: ClassId) -> ClassId:
    """The unique next-level class containing ``cid``."""
    if not cid.suffix:
        raise ValueError("the whole-set class has no parent")
    return ClassId(cid.level + 1, cid.suffix[1:])


def classes_meeting(
    chain: ChainSpec, points: Iterable[tuple[int, ...]], level: int
) -> set[ClassId]:
    """All level-``level`` classes that contain at least one of ``points``."""
    if not 1 <= level <= chain.s:
        raise ValueError(f"level {level} out of range [1, {chain.s}]")
    return {ClassId(level, chain.validate_point(p)[level:]) for p in points}


@dataclass(frozen=True)
class ArrayFunction:
    """Sparse class-intersection counts of a point set, levels 1 to s.

    Absent keys mean an empty intersection.  The value at the whole-set
    class is the size of the underlying set, and each class's value is the
    sum over its subclasses.
    """

    chain: ChainSpec
    values: Mapping[ClassId, int]

    def __getitem__(self, cid: ClassId) -> int:
        return self.values.get(cid, 0)

    def level_items(self, level: int) -> Iterator[tuple[ClassId, int]]:
        for cid, x in self.values.items():
            if cid.level == level:
                yield cid, x

    def level_counts(self, level: int) -> list[int]:
        """Nonzero intersection sizes at one level, sorted."""
        return sorted(x for _, x in self.level_items(level))

    @property
    def set_size(self) -> int:
        return self[ClassId(self.chain.s, ())]

    def validate_aggregation(self) -> None:
        """Check the parent sum rule; raises on violation (test hook)."""
        for cid, x in self.values.items():
            if cid.level == self.chain.s:
                continue
            parent = parent_class(cid)
            children = (
                ClassId(cid.level, (j,) + parent.suffix)
                for j in range(self.chain.e[cid.level])
            )
            total = sum(self[ch] for ch in children)
            if total != self[parent]:
                raise AssertionError(f"aggregation broken at {parent}: {total} != {self[parent]}")


def array_of(chain: ChainSpec, points: Iterable[tuple[int, ...]]) -> ArrayFunction:
    """Intersection counts of ``points`` with every class at levels 1..s."""
    values: dict[ClassId, int] = {}
    for p in points:
        coords = chain.validate_point(p)
        for level in range(1, chain.s + 1):
            cid = ClassId(level, coords[level:])
            values[cid] = values.get(cid, 0) + 1
    return ArrayFunction(chain, values)


@dataclass(frozen=True)
class ChainPermutation:
    """A permutation of the points, stored as the image of every rank."""

    chain: ChainSpec
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.chain.v or set(images) != set(range(self.chain.v)):
            raise ValueError("images do not form a permutation of the point ranks")

    @classmethod
    def identity(cls, chain: ChainSpec) -> ChainPermutation:
        return cls(chain, tuple(range(chain.v)))

    def apply_rank(self, rank: int) -> int:
        return self.images[rank]

    def apply_point(self, coords: tuple[int, ...]) -> tuple[int, ...]:
        return self.chain.point_coords(self.images[self.chain.point_rank(coords)])

    def apply_ranks(self, ranks: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.images[r] for r in ranks))

    def apply_mask(self, mask: int) -> int:
        out = 0
        while mask:
            low = mask & -mask
            out |= 1 << self.images[low.bit_length() - 1]
            mask ^= low
        return out

    def compose(self, other: ChainPermutation) -> ChainPermutation:
        """Permutation acting as self followed by ``other``."""
        return ChainPermutation(self.chain, tuple(other.images[i] for i in self.images))

    def inverse(self) -> ChainPermutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return ChainPermutation(self.chain, tuple(inv))

    def class_image(self, cid: ClassId) -> ClassId:
        """Image class, assuming the permutation preserves the chain."""
        r = self.chain.class_range(cid).start
        return ClassId(cid.level, self.chain.point_coords(self.images[r])[cid.level :])

    def find_chain_violation(self) -> tuple[int, int] | None:
        """First (level, class index) whose image is not a single class."""
        chain = self.chain
        for level in range(1, chain.s):
            size = chain.c[level]
            seen = [-1] * chain.d_counts[level]
            for r, im in enumerate(self.images):
                ci = r // size
                im_ci = im // size
                if seen[ci] == -1:
                    seen[ci] = im_ci
                elif seen[ci] != im_ci:
                    return (level, ci)
        return None

    def preserves_chain(self) -> bool:
        return self.find_chain_violation() is None

    def serialize(self) -> str:
        return " ".join(str(x) for x in self.images)

    @classmethod
    def parse(cls, chain: ChainSpec, text: str) -> ChainPermutation:
        return cls(chain, tuple(int(tok) for tok in text.split()))


def permute_array(a: ArrayFunction, g: ChainPermutation) -> ArrayFunction:
    """The array of the image set: class ``C`` maps to the preimage's count."""
    if a.chain != g.chain:
        raise ValueError("array and permutation live on different chains")
    violation = g.find_chain_violation()
    if violation is not None:
        raise ChainPreservationError(
            f"permutation breaks the partition at level {violation[0]}, class {violation[1]}"
        )
    values = {g.class_image(cid): x for cid, x in a.values.items()}
    return ArrayFunction(a.chain, values)


# -- text formats --------------------------------------------------------

_POINT_TUPLE_RE = re.compile(r"^\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)$")
_POINT_RANK_RE = re.compile(r"^#(\d+)$")


def parse_chain(text: str) -> ChainSpec:
    """Parse a chain written as comma-separated coordinate sizes."""
    try:
        e = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"cannot parse chain {text!r}") from None
    return ChainSpec(e)


def format_point(coords: tuple[int, ...]) -> str:
    return "(" + ",".join(str(x) for x in coords) + ")"


def parse_point(chain: ChainSpec, text: str) -> tuple[int, ...]:
    """Parse ``(d1,d2,...,ds)`` coordinates or ``#r`` rank syntax."""
    text = text.strip()
    m = _POINT_TUPLE_RE.match(text)
    if m:
        coords = tuple(int(tok) for tok in m.group(1).split(","))
        return chain.validate_point(coords)
    m = _POINT_RANK_RE.match(text)
    if m:
        return chain.point_coords(int(m.group(1)))
    raise ValueError(f"cannot parse point {text!r}: expected (d1,...,ds) or #rank")
