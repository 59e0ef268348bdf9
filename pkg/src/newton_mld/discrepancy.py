"""Log discrepancies of weighted blow-ups and the minimal log discrepancy.

For boundary coefficients delta in [0, 1]^{n+1} the pair is
(C^{n+1}, X + sum (1 - delta_i) H_i), and the weighted blow-up with weights
a has log discrepancy

    phi(a) = (a, delta) - min_{m in Supp} (a, m).

The minimal log discrepancy at the origin is the minimum of phi over
integer covectors a >= 1, or -inf when phi takes a negative value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Optional, Sequence

from .errors import InputError
from .lp import (
    DEFAULT_BOX_GROWTH,
    EQ,
    GE,
    LE,
    Constraint,
    LpProblem,
    Status,
    ilp_minimize,
    simplex_solve,
)
from .newton import (
    Covector,
    FaceTrace,
    SupportSet,
    as_covector,
    in_proper_cone,
    newton_vertices,
    pairing,
    polyhedron_contains,
    supporting_value,
    trace,
)

Boundary = tuple[Fraction, ...]


@dataclass(frozen=True)
class MldValue:
    """Either a finite non-negative rational or minus infinity (``value is None``)."""

    value: Optional[Fraction]

    MINUS_INFINITY_TOKEN = "-inf"

    @classmethod
    def finite(cls, v) -> "MldValue":
        v = Fraction(v)
        if v < 0:
            raise ValueError("a finite minimal log discrepancy is non-negative")
        return cls(v)

    @classmethod
    def minus_infinity(cls) -> "MldValue":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __str__(self):
        return format_rational(self.value) if self.is_finite else self.MINUS_INFINITY_TOKEN


class MldResult(NamedTuple):
    mld: MldValue
    witness: Optional[Covector]
    certified: bool


class Lct(NamedTuple):
    raw: Fraction
    capped: Fraction


@dataclass(frozen=True)
class MldReport:
    dimension: int
    support: tuple
    delta: Boundary
    log_canonical: bool
    mld: MldValue
    witness: Optional[Covector]
    witness_trace: Optional[FaceTrace]
    witness_in_proper_cone: Optional[bool]
    witness_meets_strict_transform: Optional[bool]
    multiplicity: int
    ordinary_blowup_discrepancy: Fraction
    smooth: bool
    certified: bool
    lct: Optional[Lct] = None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def boundary(delta: Optional[Sequence], dimension: int) -> Boundary:
    """Validate boundary coefficients; ``None`` means the reduced pair (all ones)."""
    if delta is None:
        return (Fraction(1),) * dimension
    d = tuple(Fraction(v) for v in delta)
    if len(d) != dimension:
        raise InputError(f"delta has {len(d)} entries, expected {dimension}")
    if any(v < 0 or v > 1 for v in d):
        raise InputError("delta entries must lie in [0, 1]")
    return d


def phi(s: SupportSet, d: Optional[Sequence], a: Sequence) -> Fraction:
    d = boundary(d, s.dimension)
    if len(a) != s.dimension:
        raise InputError(f"covector of length {len(a)} does not match dimension {s.dimension}")
    return pairing(a, d) - supporting_value(s, a)


def is_log_canonical(s: SupportSet, d: Optional[Sequence] = None) -> bool:
    return polyhedron_contains(s, boundary(d, s.dimension))


def _grid(d: Boundary) -> Fraction:
    return Fraction(1, math.lcm(*(v.denominator for v in d)))


def _mld_problem(s: SupportSet, d: Boundary, tied: Sequence = ()) -> LpProblem:
    """Variables a_0..a_n (integer, >= 1) and t (free); minimize (a, delta) - t.

    ``t <= (a, m)`` for every vertex makes t = l(a) at the optimum.  Each
    vertex in ``tied`` additionally gets ``t >= (a, m)``, forcing it into the
    trace.
    """
    n1 = s.dimension
    rows = []
    for m in newton_vertices(s):
        rows.append(Constraint(tuple(-Fraction(v) for v in m) + (Fraction(1),), LE, Fraction(0)))
    for m in tied:
        rows.append(Constraint(tuple(-Fraction(v) for v in m) + (Fraction(1),), GE, Fraction(0)))
    return LpProblem(
        objective=tuple(d) + (Fraction(-1),),
        constraints=tuple(rows),
        lower_bounds=(Fraction(1),) * n1 + (None,),
        integer=(True,) * n1 + (False,),
    )


def mld_pair(
    s: SupportSet,
    d: Optional[Sequence] = None,
    *,
    box: Optional[int] = None,
    box_growth_limit: int = DEFAULT_BOX_GROWTH,
) -> MldResult:
    d = boundary(d, s.dimension)
    # unbounded below unless delta is in the polyhedron; never hand that to the ILP
    if not is_log_canonical(s, d):
        return MldResult(MldValue.minus_infinity(), None, True)
    out = ilp_minimize(
        _mld_problem(s, d), box, box_growth_limit, objective_grid=_grid(d)
    )
    if out.status is not Status.OPTIMAL:
        raise RuntimeError(f"mld integer program ended with status {out.status}")
    witness = tuple(int(v) for v in out.point[: s.dimension])
    # prefer the lightest weight vector among the minimizers
    witness = smallest_minimizer(s, d, out.value, box) or witness
    assert phi(s, d, witness) == out.value
    return MldResult(MldValue.finite(out.value), witness, out.optimality_certified)


def _smallest_witness_problem(s: SupportSet, d: Boundary, target: Fraction, tied=()) -> LpProblem:
    """Minimize sum(a) over covectors with phi(a) <= target (and forced ties)."""
    base = _mld_problem(s, d, tied)
    cut = Constraint(base.objective, LE, target)
    return LpProblem(
        objective=(Fraction(1),) * s.dimension + (Fraction(0),),
        constraints=base.constraints + (cut,),
        lower_bounds=base.lower_bounds,
        integer=base.integer,
    )


def smallest_minimizer(
    s: SupportSet, d: Boundary, target: Fraction, box: Optional[int] = None, tied=()
) -> Optional[Covector]:
    out = ilp_minimize(_smallest_witness_problem(s, d, target, tied), box, 0, objective_grid=Fraction(1))
    if not out.optimal:
        return None
    return tuple(int(v) for v in out.point[: s.dimension])


def proper_cone_minimizer(
    s: SupportSet, d: Optional[Sequence], target, box: Optional[int] = None
) -> Optional[Covector]:
    """Smallest covector with phi = target whose trace holds two vertices, if any.

    Each vertex pair is forced into the trace in turn; the overall smallest
    coordinate sum wins, earlier pairs on ties.
    """
    d = boundary(d, s.dimension)
    target = Fraction(target)
    best = None
    for pair in combinations(newton_vertices(s), 2):
        a = smallest_minimizer(s, d, target, box, tied=pair)
        if a is not None and (best is None or sum(a) < sum(best)):
            best = a
    return best


def intersects_strict_transform(s: SupportSet, a: Sequence[int]) -> bool:
    """Does the exceptional divisor of the a-blow-up meet the strict transform of X?

    It misses it exactly when min (a, m) over the full support is attained once.
    """
    return len(trace(s, a).members) >= 2


def multiplicity(s: SupportSet) -> int:
    return int(supporting_value(s, (1,) * s.dimension))


def ordinary_blowup_discrepancy(s: SupportSet) -> Fraction:
    n = s.dimension - 1
    return Fraction(n - (multiplicity(s) - 1))


def lct(s: SupportSet) -> Lct:
    """Log canonical threshold via min{t : t*(1,..,1) in the Newton polyhedron}."""
    dim = s.dimension
    pts = newton_vertices(s)
    k = len(pts)
    # variables: t, lambda_1..lambda_k, r_1..r_dim, all >= 0
    nv = 1 + k + dim
    rows = []
    for i in range(dim):
        coeffs = [Fraction(1)] + [Fraction(-m[i]) for m in pts] + [
            Fraction(-int(j == i)) for j in range(dim)
        ]
        rows.append(Constraint(tuple(coeffs), EQ, Fraction(0)))
    rows.append(Constraint(tuple([Fraction(0)] + [Fraction(1)] * k + [Fraction(0)] * dim), EQ, 1))
    objective = (Fraction(1),) + (Fraction(0),) * (k + dim)
    out = simplex_solve(LpProblem(objective, tuple(rows), (Fraction(0),) * nv))
    assert out.optimal and out.value > 0
    raw = 1 / out.value
    return Lct(raw, min(raw, Fraction(1)))


def full_report(
    s: SupportSet,
    d: Optional[Sequence] = None,
    *,
    box: Optional[int] = None,
    box_growth_limit: int = DEFAULT_BOX_GROWTH,
    oracle_minimizers: Optional[Sequence[Covector]] = None,
    with_lct: bool = False,
) -> MldReport:
    """Every invariant the tool reports, for one pair.

    When the integer program's witness lies in a maximal cone, a minimizer
    in a proper cone is preferred: first from ``oracle_minimizers`` if given,
    then by a vertex-pair search.
    """
    d = boundary(d, s.dimension)
    res = mld_pair(s, d, box=box, box_growth_limit=box_growth_limit)
    witness = res.witness
    if witness is not None and not in_proper_cone(s, witness):
        alt = None
        for a in oracle_minimizers or ():
            a = as_covector(a, s.dimension)
            if phi(s, d, a) == res.mld.value and in_proper_cone(s, a):
                alt = a
                break
        if alt is None:
            alt = proper_cone_minimizer(s, d, res.mld.value, box)
        if alt is not None:
            witness = alt
    mult = multiplicity(s)
    return MldReport(
        dimension=s.dimension,
        support=s.points,
        delta=d,
        log_canonical=res.mld.is_finite,
        mld=res.mld,
        witness=witness,
        witness_trace=trace(s, witness) if witness else None,
        witness_in_proper_cone=in_proper_cone(s, witness) if witness else None,
        witness_meets_strict_transform=(
            intersects_strict_transform(s, witness) if witness else None
        ),
        multiplicity=mult,
        ordinary_blowup_discrepancy=ordinary_blowup_discrepancy(s),
        smooth=mult == 1,
        certified=res.certified,
        lct=lct(s) if with_lct else None,
    )
