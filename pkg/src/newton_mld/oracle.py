"""Brute-force minimization of the log discrepancy function over a box.

Deliberately naive: no LP, no pruning.  It is the independent check for
everything the integer program claims.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .discrepancy import boundary
from .errors import EnumerationTooLarge, InputError
from .newton import Covector, SupportSet

DEFAULT_MAX_ENUMERATION = 10**7


@dataclass(frozen=True)
class BoxSearchResult:
    box_bound: int
    min_value: Fraction
    minimizers: tuple[Covector, ...]
    # no minimizer touches a face a_i = box_bound
    interior: bool


def brute_force_min(
    s: SupportSet,
    d: Optional[Sequence] = None,
    box: int = 8,
    max_enumeration: int = DEFAULT_MAX_ENUMERATION,
) -> BoxSearchResult:
    """Evaluate phi on every integer vector in [1, box]^{n+1}."""
    if box < 1:
        raise InputError("box bound must be at least 1")
    dim = s.dimension
    if box**dim > max_enumeration:
        raise EnumerationTooLarge(
            f"box {box} in dimension {dim} needs {box**dim} evaluations "
            f"(ceiling {max_enumeration})"
        )
    d = boundary(d, dim)
    # scale by the common denominator so the loop stays in integers
    den = math.lcm(*(v.denominator for v in d))
    dd = [int(v * den) for v in d]
    pts = s.points
    best = None
    minimizers: list[Covector] = []
    for a in product(range(1, box + 1), repeat=dim):
        low = min(sum(x * y for x, y in zip(a, m)) for m in pts)
        val = sum(x * y for x, y in zip(a, dd)) - den * low
        if best is None or val < best:
            best = val
            minimizers = [a]
        elif val == best:
            minimizers.append(a)
    interior = all(max(a) < box for a in minimizers)
    return BoxSearchResult(box, Fraction(best, den), tuple(minimizers), interior)
