#!/usr/bin/env python3
"""Benchmark the compiled mask kernels against the pure-Python twins.

Times uniform-subset enumeration, block-orbit closure and pair counting
on one instance (default: the 50625-block family on a 5x5 chain) and
prints the per-kernel speedup.  Pass sizes as ``e1,e2,... t1,t2,...`` to
benchmark another instance, e.g.::

    python benchmarks/bench_kernels.py 6,6 2,4
"""

import sys
import time

import numpy as np

from chaindesign.chain import ChainSpec
from chaindesign.designs import canonical_block
from chaindesign.feasibility import UniformSequence
from chaindesign.kernels import _pure
from chaindesign.wreath import wreath_generators

try:
    from chaindesign.kernels import _speedups
except ImportError:
    _speedups = None


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t0, out


def main(argv):
    e = tuple(int(x) for x in argv[0].split(",")) if argv else (5, 5)
    ratios = tuple(int(x) for x in argv[1].split(",")) if len(argv) > 1 else (2, 4)
    chain = ChainSpec(e)
    values = [1]
    for t in ratios:
        values.append(values[-1] * t)
    y = UniformSequence(tuple(values))
    y.validate_for_chain(chain)
    gens = wreath_generators(chain)
    images = gens.images_matrix()
    seed = canonical_block(chain, y).mask

    t_enum_pure, masks_pure = timed(_pure.enumerate_uniform_masks, e, ratios)
    b = len(masks_pure)
    print(f"instance: e={chain} ratios={ratios} v={chain.v} blocks={b}")
    print(f"{'kernel':<22}{'pure':>10}{'compiled':>12}{'speedup':>10}")

    rows = []
    t_orbit_pure, (_, orbit_pure) = timed(_pure.orbit_masks, images, seed, b + 1)
    t_pairs_pure, pairs_pure = timed(_pure.pair_counts, masks_pure, chain.v)

    if _speedups is None:
        print("compiled kernels not built; pure timings only")
        for name, t in [
            ("enumerate", t_enum_pure),
            ("orbit", t_orbit_pure),
            ("pair-counts", t_pairs_pure),
        ]:
            print(f"{name:<22}{t:>9.3f}s{'-':>12}{'-':>10}")
        return 0

    t_enum_fast, masks_fast = timed(
        _speedups.enumerate_uniform_masks, list(e), list(ratios)
    )
    t_orbit_fast, (_, orbit_fast) = timed(_speedups.orbit_masks, images, seed, b + 1)
    t_pairs_fast, pairs_fast = timed(
        _speedups.pair_counts, np.asarray(masks_fast, dtype=np.uint64), chain.v
    )

    assert [int(m) for m in masks_fast] == masks_pure
    assert [int(m) for m in orbit_fast] == orbit_pure
    assert (pairs_fast == pairs_pure).all()

    rows = [
        ("enumerate", t_enum_pure, t_enum_fast),
        ("orbit", t_orbit_pure, t_orbit_fast),
        ("pair-counts", t_pairs_pure, t_pairs_fast),
    ]
    for name, t_pure, t_fast in rows:
        ratio = t_pure / t_fast if t_fast > 0 else float("inf")
        print(f"{name:<22}{t_pure:>9.3f}s{t_fast:>11.4f}s{ratio:>9.1f}x")
    print("outputs identical across implementations")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
