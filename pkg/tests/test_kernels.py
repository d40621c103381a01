from math import comb, prod

import numpy as np
import pytest

from chaindesign import kernels
from chaindesign.kernels import _pure

speedups = pytest.importorskip("chaindesign.kernels._speedups") if kernels.using_speedups() else None
needs_speedups = pytest.mark.skipif(
    not kernels.using_speedups(), reason="compiled kernels not built"
)


def expected_count(e, ratios):
    """Count from the product-of-binomials formula, written independently:
    the level-i factor appears once per class the block meets there."""
    y = [1]
    for t in ratios:
        y.append(y[-1] * t)
    k = y[-1]
    return prod(comb(ei, t) ** (k // yi) for ei, t, yi in zip(e, ratios, y[1:]))


def test_colex_order_explicit():
    got = list(_pure.colex_combinations(4, 2))
    assert got == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]


@pytest.mark.parametrize("n,t", [(1, 1), (5, 1), (5, 5), (6, 3), (7, 4)])
def test_colex_complete_and_ordered(n, t):
    got = list(_pure.colex_combinations(n, t))
    assert len(got) == comb(n, t)
    assert len(set(got)) == len(got)
    assert got == sorted(got, key=lambda c: c[::-1])


GRID = [
    ((2, 2), (2, 2)),
    ((4, 4), (2, 3)),
    ((3, 5), (2, 4)),
    ((5, 5), (2, 4)),
    ((2, 3, 4), (2, 2, 3)),
    ((3, 3, 3), (2, 2, 2)),
    ((4, 4), (1, 3)),
    ((4, 4), (4, 2)),
    ((2, 2, 2, 2), (2, 1, 2, 1)),
]


@pytest.mark.parametrize("e,ratios", GRID)
def test_pure_enumeration_count_and_uniqueness(e, ratios):
    masks = _pure.enumerate_uniform_masks(e, ratios)
    assert len(masks) == expected_count(e, ratios)
    assert len(set(masks)) == len(masks)
    k = prod(ratios)
    assert all(bin(m).count("1") == k for m in masks)


@needs_speedups
@pytest.mark.parametrize("e,ratios", GRID)
def test_enumeration_impls_agree_in_order(e, ratios):
    pure = _pure.enumerate_uniform_masks(e, ratios)
    fast = speedups.enumerate_uniform_masks(list(e), list(ratios))
    assert fast.dtype == np.uint64
    assert [int(m) for m in fast] == pure


def test_enumeration_starts_with_canonical_product_block():
    e, ratios = (4, 4), (2, 3)
    masks = _pure.enumerate_uniform_masks(e, ratios)
    canonical = 0
    for d2 in range(3):
        for d1 in range(2):
            canonical |= 1 << (d1 + 4 * d2)
    assert masks[0] == canonical


def test_pure_enumeration_handles_more_than_64_points():
    e = (2, 2, 2, 2, 2, 2, 2)  # v = 128
    ratios = (2, 1, 1, 1, 1, 1, 1)
    masks = _pure.enumerate_uniform_masks(e, ratios)
    assert len(masks) == expected_count(e, ratios) == 64
    assert max(masks).bit_length() > 64


@needs_speedups
def test_speedups_reject_more_than_64_points():
    with pytest.raises(ValueError):
        speedups.enumerate_uniform_masks([2] * 7, [2] * 7)
    with pytest.raises(ValueError):
        speedups.orbit_masks(np.zeros((1, 65), dtype=np.int64), 1, 10)
    with pytest.raises(ValueError):
        speedups.pair_counts(np.zeros(1, dtype=np.uint64), 65)


def cyclic_shift_images(v):
    return np.array([[(i + 1) % v for i in range(v)]], dtype=np.int64)


def test_pure_orbit_masks_cyclic_shift():
    complete, found = _pure.orbit_masks(cyclic_shift_images(6), 0b11, cap=100)
    assert complete
    assert len(found) == 6
    assert found[0] == 0b11


@needs_speedups
def test_orbit_impls_agree_in_discovery_order():
    from chaindesign.chain import ChainSpec
    from chaindesign.designs import canonical_block
    from chaindesign.feasibility import UniformSequence
    from chaindesign.wreath import wreath_generators

    for e, yvals in [((4, 4), (1, 2, 6)), ((3, 5), (1, 2, 8)), ((2, 3, 4), (1, 2, 4, 12))]:
        chain = ChainSpec(e)
        y = UniformSequence(yvals)
        seed = canonical_block(chain, y).mask
        img = wreath_generators(chain).images_matrix()
        c_pure, pure = _pure.orbit_masks(img, seed, cap=10**6)
        c_fast, fast = speedups.orbit_masks(img, seed, cap=10**6)
        assert c_pure and c_fast
        assert [int(m) for m in fast] == pure


@needs_speedups
def test_orbit_cap_stops_early_in_both_impls():
    img = cyclic_shift_images(12)
    c_pure, found_pure = _pure.orbit_masks(img, 1, cap=5)
    c_fast, found_fast = speedups.orbit_masks(img, 1, cap=5)
    assert not c_pure and not c_fast
    assert len(found_pure) == len(found_fast) == 6


def test_orbit_zero_seed_is_fixed():
    complete, found = _pure.orbit_masks(cyclic_shift_images(4), 0, cap=10)
    assert complete and list(found) == [0]
    if kernels.using_speedups():
        complete, found = speedups.orbit_masks(cyclic_shift_images(4), 0, 10)
        assert complete and list(found) == [0]


@needs_speedups
def test_orbit_hash_table_growth():
    # seed with class profile (4,3,2,1,0): the orbit has
    # 5!/(1!1!1!1!1!) * C(5,4) C(5,3) C(5,2) C(5,1) C(5,0) = 300000 sets,
    # forcing several resizes of the visited table
    from math import factorial

    from chaindesign.chain import ChainSpec
    from chaindesign.wreath import wreath_generators

    chain = ChainSpec((5, 5))
    img = wreath_generators(chain).images_matrix()
    seed = 0b1111 | (0b111 << 5) | (0b11 << 10) | (1 << 15)
    expected = factorial(5) * comb(5, 4) * comb(5, 3) * comb(5, 2) * comb(5, 1)
    c_fast, fast = speedups.orbit_masks(img, seed, cap=10**6)
    c_pure, pure = _pure.orbit_masks(img, seed, cap=10**6)
    assert c_fast and c_pure
    assert len(fast) == len(pure) == expected
    assert sorted(int(m) for m in fast) == sorted(pure)


@pytest.mark.parametrize("e,ratios", [((4, 4), (2, 3)), ((3, 5), (2, 4))])
def test_pair_counts_impls_agree(e, ratios):
    v = prod(e)
    masks = _pure.enumerate_uniform_masks(e, ratios)
    pure = _pure.pair_counts(masks, v)
    via_dispatch = kernels.pair_counts(np.array(masks, dtype=np.uint64), v)
    assert (pure == via_dispatch).all()


def test_pair_counts_small_hand_case():
    # blocks {0,1} and {0,2}: pair (0,1) once, (0,2) once, (1,2) never
    counts = _pure.pair_counts([0b011, 0b101], 3)
    assert counts[0, 1] == 1 and counts[0, 2] == 1 and counts[1, 2] == 0


def test_dispatch_layer_types():
    masks = kernels.enumerate_uniform_masks((4, 4), (2, 3))
    assert isinstance(masks, np.ndarray) and masks.dtype == np.uint64
    complete, found = kernels.orbit_masks(cyclic_shift_images(6), 0b11, 100)
    assert isinstance(found, np.ndarray) and found.dtype == np.uint64
    assert complete and len(found) == 6
