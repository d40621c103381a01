"""Divisibility conditions for flag-transitive parameters.

Everything here is exact integer or rational arithmetic.  The two
conditions tested by :func:`check_ft` are

* FT1: ``v - 1`` divides ``(k - 1) * d`` with ``d = gcd(e_1-1, ..., e_s-1)``;
* FT2: for each ``i < s`` the value ``y_i`` is a positive integer dividing
  ``(e_{i+1} - 1) * c_i / d``,

where ``y_i = 1 + (k-1)(c_i - 1)/(v-1)`` and ``c_i`` is the level-``i``
class size.  When both hold the ``y_i`` form a uniform sequence with
strictly increasing, bounded ratios, and every consequence asserted by
:func:`arithmetic_facts` follows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from chaindesign.chain import ChainSpec
from chaindesign.errors import InternalConsistencyError, NonIntegralYError

__all__ = [
    "UniformSequence",
    "FT2Witness",
    "FeasibilityReport",
    "ArithmeticFacts",
    "y_value",
    "y_sequence",
    "check_ft",
    "search_k",
    "arithmetic_facts",
]


@dataclass(frozen=True)
class UniformSequence:
    """Per-level intersection sizes ``(y_0, ..., y_s)``.

    The sequence of an actual uniform set additionally has each entry
    dividing the next with quotient at most the level size; that part
    needs the chain and is enforced by :meth:`validate_for_chain`, which
    every construction path calls.  Raw arithmetic results (where the
    divisibility can legitimately fail) skip it.
    """

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        values = tuple(int(y) for y in self.values)
        object.__setattr__(self, "values", values)
        if not values or values[0] != 1:
            raise ValueError("a uniform sequence starts with y_0 = 1")
        if any(y <= 0 for y in values):
            raise ValueError("uniform sequence entries must be positive")

    def validate_for_chain(self, chain: ChainSpec) -> None:
        if len(self.values) != chain.s + 1:
            raise ValueError(f"expected {chain.s + 1} entries, got {len(self.values)}")
        for i, ei in enumerate(chain.e, start=1):
            if self.values[i] % self.values[i - 1] != 0:
                raise ValueError(f"y_{i-1} = {self.values[i-1]} does not divide y_{i} = {self.values[i]}")
            if self.ratio(i) > ei:
                raise ValueError(f"ratio y_{i}/y_{i-1} exceeds e_{i} = {ei}")

    def ratio(self, i: int) -> int:
        """The integer quotient ``y_i / y_{i-1}``."""
        if self.values[i] % self.values[i - 1] != 0:
            raise ValueError(f"y_{i-1} does not divide y_{i}")
        return self.values[i] // self.values[i - 1]

    def ratios(self) -> tuple[int, ...]:
        return tuple(self.ratio(i) for i in range(1, len(self.values)))

    @property
    def k(self) -> int:
        return self.values[-1]

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return ",".join(str(y) for y in self.values)


def _check_k(chain: ChainSpec, k: int) -> None:
    if not 2 <= k < chain.v:
        raise ValueError(f"k = {k} out of range [2, {chain.v})")


def chain_gcd(chain: ChainSpec) -> int:
    """gcd of the ``e_i - 1``; divides ``c_i - 1`` for every level."""
    d = 0
    for ei in chain.e:
        d = gcd(d, ei - 1)
    return d


def y_value(chain: ChainSpec, k: int, i: int) -> Fraction:
    """Exact value of ``y_i``, integral or not."""
    return 1 + Fraction(k - 1, chain.v - 1) * (chain.c[i] - 1)


def y_sequence(chain: ChainSpec, k: int) -> UniformSequence:
    """All ``y_i`` for the given block size.

    Raises :class:`NonIntegralYError` naming the first index whose value
    is not an integer.  When every value is integral, ``y_s = k``.
    """
    _check_k(chain, k)
    values = []
    for i in range(chain.s + 1):
        y = y_value(chain, k, i)
        if y.denominator != 1:
            raise NonIntegralYError(i, y)
        values.append(int(y))
    return UniformSequence(tuple(values))


@dataclass(frozen=True)
class FT2Witness:
    """Evidence for one index of the second condition."""

    index: int
    y: Fraction
    divisor_target: int
    integral: bool
    divides: bool

    @property
    def ok(self) -> bool:
        return self.integral and self.divides


@dataclass(frozen=True)
class FeasibilityReport:
    chain: ChainSpec
    k: int
    d: int
    ft1: bool
    ft2: bool
    witnesses: tuple[FT2Witness, ...]
    u: int | None = None
    y: UniformSequence | None = None

    @property
    def feasible(self) -> bool:
        return self.ft1 and self.ft2


def check_ft(chain: ChainSpec, k: int) -> FeasibilityReport:
    """Evaluate both divisibility conditions with full witnesses."""
    _check_k(chain, k)
    d = chain_gcd(chain)
    ft1 = ((k - 1) * d) % (chain.v - 1) == 0
    u = (k - 1) * d // (chain.v - 1) if ft1 else None

    witnesses = []
    ft2 = True
    for i in range(1, chain.s):
        yi = y_value(chain, k, i)
        integral = yi.denominator == 1 and yi > 0
        target = (chain.e[i] - 1) * chain.c[i] // d
        divides = integral and target % int(yi) == 0
        witnesses.append(FT2Witness(i, yi, target, integral, divides))
        ft2 = ft2 and integral and divides

    y = None
    if ft1 and ft2:
        y = y_sequence(chain, k)
        y.validate_for_chain(chain)
    return FeasibilityReport(chain, k, d, ft1, ft2, tuple(witnesses), u, y)


def search_k(chain: ChainSpec) -> list[tuple[int, FeasibilityReport]]:
    """All block sizes in ``[2, v)`` passing both conditions, ascending.

    Only ``k`` with ``k - 1`` a multiple of ``(v - 1)/d`` can pass the
    first condition, so just those candidates are tested.
    """
    d = chain_gcd(chain)
    found = []
    if d >= 2:
        step = (chain.v - 1) // d
        for m in range(1, d):
            k = 1 + m * step
            report = check_ft(chain, k)
            if report.feasible:
                found.append((k, report))
    return found


@dataclass(frozen=True)
class ArithmeticFacts:
    """Consequences of feasibility, re-derived and checked one by one."""

    u: int
    differences: tuple[int, ...] = field(default=())
    ratios: tuple[int, ...] = field(default=())


def arithmetic_facts(report: FeasibilityReport) -> ArithmeticFacts:
    """Check the arithmetic consequences of a feasible report.

    Verifies that every ``y_i`` is coprime to ``u``, that the difference
    ``y_i - y_{i-1}`` equals ``(k-1)(e_i - 1) c_{i-1} / (v-1)`` exactly,
    and that consecutive ratios lie strictly between 1 and ``e_i``.  A
    failure means an implementation bug, not bad input.
    """
    if not report.feasible or report.y is None or report.u is None:
        raise ValueError("arithmetic facts require a feasible report")
    chain, y, u = report.chain, report.y, report.u
    scale = Fraction(report.k - 1, chain.v - 1)
    diffs = []
    for i in range(1, chain.s + 1):
        if gcd(y[i], u) != 1:
            raise InternalConsistencyError(f"y_{i} = {y[i]} shares a factor with u = {u}")
        expected = scale * (chain.e[i - 1] - 1) * chain.c[i - 1]
        if y[i] - y[i - 1] != expected:
            raise InternalConsistencyError(
                f"difference y_{i} - y_{i - 1} = {y[i] - y[i - 1]} != {expected}"
            )
        ratio = y.ratio(i)
        if not 1 < ratio < chain.e[i - 1]:
            raise InternalConsistencyError(
                f"ratio y_{i}/y_{i-1} = {ratio} not strictly between 1 and {chain.e[i - 1]}"
            )
        diffs.append(y[i] - y[i - 1])
    if gcd(y[0], u) != 1:
        raise InternalConsistencyError("y_0 must be coprime to u")
    return ArithmeticFacts(u=u, differences=tuple(diffs), ratios=y.ratios())
