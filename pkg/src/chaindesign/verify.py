"""Independent verification of constructed designs.

Two deliberately separate routes certify the pair-multiplicity property:
an arithmetic route evaluating the per-level array sums in exact
rational arithmetic against closed-form targets, and an exhaustive route
that counts, for every point pair, the blocks containing it.  The two
share no summation code; small instances must pass both.  Instances too
large to enumerate get clearly-labelled arithmetic or sampled
certificates with the RNG seed recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Iterable, Sequence

import numpy as np

from chaindesign import kernels
from chaindesign.chain import ChainSpec, array_of, parent_class
from chaindesign.designs import (
    DEFAULT_ENUMERATION_CAP,
    Block,
    DesignSpec,
    canonical_block,
    design_spec,
    enumerate_blocks,
    intersection_sizes_ok,
    is_uniform,
    random_uniform_block,
    uniform_masks,
)
from chaindesign.errors import NotUniformError
from chaindesign.feasibility import check_ft
from chaindesign.wreath import (
    DEFAULT_ORBIT_CAP,
    Flag,
    orbit,
    orbit_block_masks,
    orbit_membership_witness,
    random_chain_permutation,
    stabilizer_transitive_on_block,
    wreath_generators,
)

__all__ = [
    "ArrayConditionResult",
    "PairCountSummary",
    "CheckResult",
    "VerificationCertificate",
    "check_2design_arrays",
    "brute_force_pair_count",
    "incidence_pair_counts",
    "certify_flag_transitive",
    "certify_uniqueness",
    "verify_design",
]

DEFAULT_SAMPLES = 20


# -- arithmetic route ------------------------------------------------------


@dataclass(frozen=True)
class ArrayConditionResult:
    """Per-level array sums against their closed-form targets."""

    passed: bool
    failing_level: int | None
    sums: tuple[tuple[int, Fraction, Fraction], ...]  # (level, lhs, rhs)


def check_2design_arrays(chain: ChainSpec, block: Block) -> ArrayConditionResult:
    """Evaluate the per-level array conditions for the block's orbit design.

    Level 1 compares the sum of ``x(x-1)`` over first-level classes with
    ``k(k-1)(e_1-1)/(v-1)``; each higher level ``i`` compares the sum of
    ``x_C (x_{C+} - x_C)`` over level-``i-1`` classes with
    ``k(k-1)(e_i-1) c_{i-1}/(v-1)``.  All arithmetic is exact.
    """
    if len(block) < 2:
        raise ValueError("the array conditions need a block of size at least 2")
    arr = array_of(chain, block.points)
    k = len(block)
    v = chain.v
    scale = Fraction(k * (k - 1), v - 1)

    sums: list[tuple[int, Fraction, Fraction]] = []
    failing = None

    lhs1 = Fraction(sum(x * (x - 1) for _, x in arr.level_items(1)))
    rhs1 = scale * (chain.e[0] - 1)
    sums.append((1, lhs1, rhs1))
    if lhs1 != rhs1:
        failing = 1

    for i in range(2, chain.s + 1):
        lhs = Fraction(
            sum(x * (arr[parent_class(cid)] - x) for cid, x in arr.level_items(i - 1))
        )
        rhs = scale * (chain.e[i - 1] - 1) * chain.c[i - 1]
        sums.append((i, lhs, rhs))
        if failing is None and lhs != rhs:
            failing = i

    return ArrayConditionResult(failing is None, failing, tuple(sums))


# -- exhaustive route ------------------------------------------------------


@dataclass(frozen=True)
class PairCountSummary:
    """Exact per-pair block counts over a finite block stream."""

    v: int
    n_blocks: int
    min_count: int
    max_count: int
    counts: dict[tuple[int, int], int] = field(repr=False)

    @property
    def constant(self) -> bool:
        return self.min_count == self.max_count

    @property
    def lambda_observed(self) -> int | None:
        return self.min_count if self.constant else None


def _summarize_matrix(matrix: np.ndarray, v: int, n_blocks: int) -> PairCountSummary:
    counts = {}
    lo, hi = None, None
    for p in range(v):
        for q in range(p + 1, v):
            c = int(matrix[p, q])
            counts[(p, q)] = c
            lo = c if lo is None else min(lo, c)
            hi = c if hi is None else max(hi, c)
    return PairCountSummary(v, n_blocks, lo or 0, hi or 0, counts)


def brute_force_pair_count(chain: ChainSpec, blocks: Iterable[Block]) -> PairCountSummary:
    """Count, for every point pair, the blocks containing both points."""
    v = chain.v
    if v <= 64:
        masks = np.fromiter((b.mask for b in blocks), dtype=np.uint64)
        matrix = kernels.pair_counts(masks, v)
        return _summarize_matrix(matrix, v, len(masks))
    matrix = np.zeros((v, v), dtype=np.int64)
    n = 0
    for block in blocks:
        n += 1
        ranks = block.ranks
        for a in range(len(ranks)):
            for b in range(a + 1, len(ranks)):
                matrix[ranks[a], ranks[b]] += 1
    return _summarize_matrix(matrix, v, n)


def incidence_pair_counts(chain: ChainSpec, blocks: Sequence[Block]) -> PairCountSummary:
    """Pair counts again, via per-point incidence lists and intersections.

    A second, structurally different counter kept free of any code shared
    with :func:`brute_force_pair_count`, so the two can cross-check each
    other on corrupted block sets.
    """
    v = chain.v
    incident: list[set[int]] = [set() for _ in range(v)]
    for i, block in enumerate(blocks):
        for r in block.ranks:
            incident[r].add(i)
    counts = {}
    lo, hi = None, None
    for p in range(v):
        for q in range(p + 1, v):
            c = len(incident[p] & incident[q])
            counts[(p, q)] = c
            lo = c if lo is None else min(lo, c)
            hi = c if hi is None else max(hi, c)
    return PairCountSummary(v, len(blocks), lo or 0, hi or 0, counts)


# -- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationCertificate:
    chain: ChainSpec
    k: int
    mode: str
    checks: tuple[CheckResult, ...]
    lambda_observed: int | None = None
    seed: int | None = None

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def serialize(self) -> str:
        lines = [
            f"chain={self.chain}",
            f"k={self.k}",
            f"mode={self.mode}",
        ]
        if self.seed is not None:
            lines.append(f"seed={self.seed}")
        for c in self.checks:
            line = f"check={c.name} pass={'yes' if c.passed else 'no'}"
            if c.detail:
                line += f" {c.detail}"
            lines.append(line)
        if self.lambda_observed is not None:
            lines.append(f"lambda_observed={self.lambda_observed}")
        lines.append(f"result={'pass' if self.all_passed else 'fail'}")
        return "\n".join(lines)


def _sampled_image_checks(
    spec: DesignSpec, rng: Random, samples: int
) -> tuple[CheckResult, CheckResult]:
    """Random stabilizer elements must map the canonical block to uniform
    blocks with the same sequence; random uniform blocks must admit an
    explicit permutation back to the canonical block."""
    chain = spec.chain
    base = canonical_block(chain, spec.y)
    images_ok = 0
    members_ok = 0
    for _ in range(samples):
        g = random_chain_permutation(chain, rng)
        image = Block(chain, g.apply_ranks(base.ranks))
        try:
            if is_uniform(chain, image) == spec.y:
                images_ok += 1
        except NotUniformError:
            pass
        candidate = random_uniform_block(chain, spec.y, rng)
        if orbit_membership_witness(chain, spec.y, candidate) is not None:
            members_ok += 1
    return (
        CheckResult(
            "sampled-block-images",
            images_ok == samples,
            f"uniform-images={images_ok}/{samples}",
        ),
        CheckResult(
            "sampled-orbit-membership",
            members_ok == samples,
            f"witnesses={members_ok}/{samples}",
        ),
    )


def certify_flag_transitive(
    chain: ChainSpec,
    k: int,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    mode: str = "auto",
) -> VerificationCertificate:
    """Certify flag-transitivity of the constructed design.

    Exhaustive mode grows the full flag orbit and checks it is a single
    orbit of size ``b * k``; past the orbit cap the certificate degrades
    to the stabilizer-transitivity check plus seeded sampling.
    """
    spec = design_spec(chain, k)
    exhaustive = spec.b * k <= orbit_cap and chain.v <= 64
    if mode == "exhaustive" and not exhaustive:
        raise ValueError(f"flag orbit of size {spec.b * k} exceeds cap {orbit_cap}")
    if mode == "arithmetic":
        exhaustive = False

    base = canonical_block(chain, spec.y)
    checks = [
        CheckResult(
            "stabilizer-transitive-on-block",
            stabilizer_transitive_on_block(base),
            "restricted generators reach the whole block",
        )
    ]
    used_seed = None
    if exhaustive:
        gens = wreath_generators(chain)
        flags = orbit(Flag(base.ranks[0], base), gens, cap=orbit_cap)
        checks.append(
            CheckResult(
                "flag-orbit-size",
                len(flags) == spec.b * k,
                f"size={len(flags)} expected={spec.b * k}",
            )
        )
        mode_used = "exhaustive"
    else:
        rng = Random(seed)
        used_seed = seed
        checks.extend(_sampled_image_checks(spec, rng, samples))
        mode_used = "arithmetic"
    return VerificationCertificate(chain, k, mode_used, tuple(checks), seed=used_seed)


def certify_uniqueness(
    chain: ChainSpec,
    k: int,
    trials: int = DEFAULT_SAMPLES,
    cap: int = DEFAULT_ENUMERATION_CAP,
    seed: int = 0,
) -> VerificationCertificate:
    """Certify that the uniform family is exactly one orbit.

    Under the cap this is literal set equality between the enumerated
    uniform subsets and the orbit of the canonical block; above it, a
    sampled containment check (every sampled uniform subset admits a
    witness into the orbit), with the mode recorded.
    """
    spec = design_spec(chain, k)
    base = canonical_block(chain, spec.y)
    if spec.b <= cap and chain.v <= 64:
        enumerated = np.sort(uniform_masks(chain, spec.y, cap))
        reached = np.sort(orbit_block_masks(chain, wreath_generators(chain), base.mask, cap=spec.b))
        equal = enumerated.shape == reached.shape and bool(np.all(enumerated == reached))
        checks = (
            CheckResult(
                "orbit-equals-uniform-family",
                equal,
                f"enumerated={len(enumerated)} orbit={len(reached)}",
            ),
        )
        return VerificationCertificate(chain, k, "exhaustive", checks)
    rng = Random(seed)
    ok = 0
    for _ in range(trials):
        candidate = random_uniform_block(chain, spec.y, rng)
        if orbit_membership_witness(chain, spec.y, candidate) is not None:
            ok += 1
    checks = (
        CheckResult("sampled-orbit-containment", ok == trials, f"witnesses={ok}/{trials}"),
    )
    return VerificationCertificate(chain, k, "sampled", checks, seed=seed)


def verify_design(
    chain: ChainSpec,
    k: int,
    mode: str = "auto",
    enum_cap: int = DEFAULT_ENUMERATION_CAP,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
) -> VerificationCertificate:
    """Full certificate for one parameter pair.

    Exhaustive mode (chosen automatically when the block count and flag
    orbit fit their caps) enumerates all blocks, counts every point pair,
    compares the orbit with the enumeration, checks the intersection-size
    law, and grows the flag orbit.  Arithmetic mode keeps the exact array
    conditions and the stabilizer check, and adds seeded sampling.
    """
    if mode not in ("auto", "exhaustive", "arithmetic"):
        raise ValueError(f"unknown mode {mode!r}")
    report = check_ft(chain, k)
    if not report.feasible:
        return VerificationCertificate(
            chain,
            k,
            "arithmetic",
            (CheckResult("feasible", False, f"ft1={report.ft1} ft2={report.ft2}"),),
        )
    spec = design_spec(chain, k)
    can_exhaust = chain.v <= 64 and spec.b <= enum_cap and spec.b * k <= orbit_cap
    if mode == "exhaustive" and not can_exhaust:
        raise ValueError(
            f"exhaustive verification needs b={spec.b} <= {enum_cap} "
            f"and b*k <= {orbit_cap} and v <= 64; raise the caps or use auto"
        )
    exhaustive = can_exhaust if mode == "auto" else mode == "exhaustive"

    base = canonical_block(chain, spec.y)
    checks: list[CheckResult] = [CheckResult("feasible", True, f"d={spec.d} u={spec.u} y={spec.y}")]
    arr_result = check_2design_arrays(chain, base)
    checks.append(
        CheckResult(
            "array-conditions",
            arr_result.passed,
            "all levels exact"
            if arr_result.passed
            else f"first failure at level {arr_result.failing_level}",
        )
    )
    checks.append(
        CheckResult(
            "stabilizer-transitive-on-block",
            stabilizer_transitive_on_block(base),
            "restricted generators reach the whole block",
        )
    )

    lambda_observed = None
    used_seed = None
    if exhaustive:
        blocks = list(enumerate_blocks(chain, spec.y, enum_cap))
        checks.append(
            CheckResult("block-count", len(blocks) == spec.b, f"enumerated={len(blocks)} b={spec.b}")
        )
        gens = wreath_generators(chain)
        enumerated = np.sort(uniform_masks(chain, spec.y, enum_cap))
        reached = np.sort(orbit_block_masks(chain, gens, base.mask, cap=spec.b))
        checks.append(
            CheckResult(
                "orbit-equals-enumeration",
                enumerated.shape == reached.shape and bool(np.all(enumerated == reached)),
                f"orbit={len(reached)}",
            )
        )
        pairs = brute_force_pair_count(chain, blocks)
        lam_ok = pairs.constant and pairs.lambda_observed == spec.lam
        checks.append(
            CheckResult(
                "pair-count-constant",
                lam_ok,
                f"min={pairs.min_count} max={pairs.max_count} lambda={spec.lam}",
            )
        )
        lambda_observed = pairs.lambda_observed
        checks.append(
            CheckResult(
                "intersection-sizes",
                intersection_sizes_ok(chain, blocks, spec.y),
                "every block meets every class in 0 or y_i",
            )
        )
        flags = orbit(Flag(base.ranks[0], base), gens, cap=orbit_cap)
        checks.append(
            CheckResult(
                "flag-orbit-size",
                len(flags) == spec.b * k,
                f"size={len(flags)} expected={spec.b * k}",
            )
        )
        mode_used = "exhaustive"
    else:
        rng = Random(seed)
        used_seed = seed
        checks.extend(_sampled_image_checks(spec, rng, samples))
        mode_used = "arithmetic"

    return VerificationCertificate(
        chain, k, mode_used, tuple(checks), lambda_observed=lambda_observed, seed=used_seed
    )
