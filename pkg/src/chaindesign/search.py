"""Exhaustive parameter sweeps over bounded coordinate sizes.

Ordered tuples are scanned as-is (no symmetry reduction, so transposed
tuples each get their own rows), block-size candidates are restricted to
the arithmetic progression forced by the first divisibility condition,
and for length-3 chains every candidate verdict is cross-checked against
an independently coded spelling of the three conditions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from chaindesign.chain import ChainSpec
from chaindesign.designs import family_params
from chaindesign.errors import InternalConsistencyError
from chaindesign.feasibility import check_ft, chain_gcd

__all__ = ["SearchRow", "search", "emit_table", "three_conditions_s3"]


@dataclass(frozen=True)
class SearchRow:
    e: tuple[int, ...]
    v: int
    k: int
    y: tuple[int, ...]  # y_1 .. y_{s-1}
    family: bool

    def csv(self) -> str:
        cells = [*self.e, self.v, self.k, *self.y, "family" if self.family else "-"]
        return ",".join(str(c) for c in cells)


def three_conditions_s3(e: tuple[int, int, int], k: int) -> bool:
    """The three length-3 conditions, spelled out verbatim and kept
    independent of the generic report for cross-checking."""
    e1, e2, e3 = e
    v = e1 * e2 * e3
    d = gcd(e1 - 1, gcd(e2 - 1, e3 - 1))
    if ((k - 1) * d) % (v - 1) != 0:
        return False
    y1 = 1 + Fraction(k - 1, v - 1) * (e1 - 1)
    if y1.denominator != 1 or y1 <= 0 or ((e2 - 1) * e1 // d) % int(y1) != 0:
        return False
    y2 = 1 + Fraction(k - 1, v - 1) * (e1 * e2 - 1)
    if y2.denominator != 1 or y2 <= 0 or ((e3 - 1) * e1 * e2 // d) % int(y2) != 0:
        return False
    return True


def _is_family(e: tuple[int, ...], k: int) -> bool:
    d = e[0] - 1
    if d < 2:
        return False
    chain, fam_k = family_params(len(e), d)
    return chain.e == e and fam_k == k


def search(s: int, e_max: int) -> list[SearchRow]:
    """All tuples with sizes in ``[2, e_max]`` and the block sizes passing
    both conditions, sorted lexicographically by tuple then block size."""
    if s < 2 or e_max < 2:
        raise ValueError("need s >= 2 and e_max >= 2")
    rows = []
    for e in itertools.product(range(2, e_max + 1), repeat=s):
        chain = ChainSpec(e)
        d = chain_gcd(chain)
        if d < 2:
            continue
        step = (chain.v - 1) // d
        for m in range(1, d):
            k = 1 + m * step
            report = check_ft(chain, k)
            if s == 3 and three_conditions_s3(e, k) != report.feasible:
                raise InternalConsistencyError(
                    f"three-condition check disagrees with the generic report at e={e}, k={k}"
                )
            if report.feasible:
                assert report.y is not None
                rows.append(
                    SearchRow(e, chain.v, k, tuple(report.y)[1:-1], _is_family(e, k))
                )
    rows.sort(key=lambda r: (r.e, r.k))
    return rows


def _header(s: int) -> list[str]:
    return (
        [f"e{i}" for i in range(1, s + 1)]
        + ["v", "k"]
        + [f"y{i}" for i in range(1, s)]
        + ["family"]
    )


def emit_table(rows: list[SearchRow], s: int, fmt: str = "csv") -> str:
    """Render rows as CSV or aligned text; the header is always present."""
    header = _header(s)
    if fmt == "csv":
        lines = [",".join(header)] + [r.csv() for r in rows]
        return "\n".join(lines)
    if fmt == "text":
        table = [header] + [r.csv().split(",") for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(header))]
        lines = [
            "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in table
        ]
        return "\n".join(lines)
    raise ValueError(f"unknown format {fmt!r}")
