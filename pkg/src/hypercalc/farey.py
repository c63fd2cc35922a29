"""Mediant table of reduced fractions in [0, 1].

Row 1 is [(0,1), (1,1)].  Row k has 2^(k-1)+1 entries: odd positions copy
row k-1 and even positions are the component-wise sums (mediants) of the two
flanking row-(k-1) entries.  Every entry is a reduced fraction, every row is
strictly increasing, and every reduced p/q in [0,1] appears first in the row
equal to its mediant-tree depth.  The rational-height splitting of the
hyperoperation engine consumes (numerator, denominator) pairs that are
exactly these table values; `locate` recovers a fraction's first table
position without enumerating rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ResourceError
from .rationals import gcd

DEFAULT_ROW_CAP = 2**20 + 1
DEFAULT_LOCATE_DEPTH_CAP = 10**6


@dataclass(frozen=True)
class FareyEntry:
    top: int  # numerator
    bottom: int  # denominator


@dataclass(frozen=True)
class FareyIndex:
    row: int
    position: int  # 1-based within the row


def farey_row(k: int, *, max_entries: int = DEFAULT_ROW_CAP) -> list[FareyEntry]:
    """Entries of row k, built by the copy/mediant recursion from row 1."""
    if k < 1:
        raise DomainError(f"row index must be >= 1, got {k}")
    if k > 1 and 2 ** (k - 1) + 1 > max_entries:
        raise ResourceError(f"row {k} has {2 ** (k - 1) + 1} entries, cap is {max_entries}")
    row = [FareyEntry(0, 1), FareyEntry(1, 1)]
    for _ in range(k - 1):
        nxt = []
        for left, right in zip(row, row[1:]):
            nxt.append(left)
            nxt.append(FareyEntry(left.top + right.top, left.bottom + right.bottom))
        nxt.append(row[-1])
        row = nxt
    return row


def locate(p: int, q: int, *, max_depth: int = DEFAULT_LOCATE_DEPTH_CAP) -> FareyIndex:
    """First (row, position) at which the reduced fraction p/q appears.

    Descends the mediant tree between the current pair of adjacent table
    neighbors, tracking their positions; O(depth) instead of enumerating
    rows, whose sizes grow exponentially.
    """
    if q <= 0 or p < 0 or p > q:
        raise DomainError(f"{p}/{q} is not a fraction in [0, 1]")
    if gcd(p, q) != 1:
        raise DomainError(f"{p}/{q} is not reduced")
    if (p, q) == (0, 1):
        return FareyIndex(1, 1)
    if (p, q) == (1, 1):
        return FareyIndex(1, 2)
    lo_top, lo_bot, lo_pos = 0, 1, 1
    hi_top, hi_bot = 1, 1
    row = 1
    while row < max_depth:
        row += 1
        lo_pos = 2 * lo_pos - 1
        mid_top, mid_bot = lo_top + hi_top, lo_bot + hi_bot
        # compare p/q with the mediant by cross-multiplication
        lhs, rhs = p * mid_bot, mid_top * q
        if lhs == rhs:
            return FareyIndex(row, lo_pos + 1)
        if lhs < rhs:
            hi_top, hi_bot = mid_top, mid_bot
        else:
            lo_top, lo_bot, lo_pos = mid_top, mid_bot, lo_pos + 1
    raise ResourceError(f"mediant descent for {p}/{q} exceeded depth {max_depth}")
