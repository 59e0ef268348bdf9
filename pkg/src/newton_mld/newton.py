"""Newton polyhedra of supports, answered through exact LPs.

The polyhedron conv(Supp) + positive orthant is never written down as a
list of half-spaces.  Vertex tests and membership are LP feasibility
problems; faces are only ever seen as traces of given covectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import InputError, SupportError
from .lp import EQ, Constraint, LpProblem, Status, simplex_solve

Exponent = tuple[int, ...]
Covector = tuple[int, ...]


@dataclass(frozen=True)
class SupportSet:
    """Exponent vectors of the monomials of f, sorted and deduplicated.

    The constructor checks structure only (non-empty, consistent length,
    non-negative entries, no constant term).  The coordinate-hyperplane
    normalization lives in :func:`validate_support`.
    """

    dimension: int
    points: tuple[Exponent, ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise SupportError("dimension must be positive")
        pts = []
        for m in self.points:
            m = tuple(m)
            if len(m) != self.dimension:
                raise SupportError(
                    f"exponent {m} has length {len(m)}, expected {self.dimension}"
                )
            if any(int(v) != v or v < 0 for v in m):
                raise SupportError(f"exponent {m} must have non-negative integer entries")
            pts.append(tuple(int(v) for v in m))
        if not pts:
            raise SupportError("no monomials")
        if any(not any(m) for m in pts):
            raise SupportError("unit: hypersurface misses the origin (constant term present)")
        object.__setattr__(self, "points", tuple(sorted(set(pts))))

    @classmethod
    def of(cls, points: Iterable[Sequence[int]]) -> "SupportSet":
        pts = [tuple(m) for m in points]
        if not pts:
            raise SupportError("no monomials")
        return cls(len(pts[0]), tuple(pts))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class FaceTrace:
    members: tuple[Exponent, ...]
    witness: tuple
    value: Fraction


def validate_support(points: Iterable[Sequence[int]], dimension: int) -> SupportSet:
    """Build a :class:`SupportSet` and reject supports divisible by some x_i.

    A support where every monomial has m_i >= 1 describes a hypersurface
    containing the hyperplane x_i = 0; it is refused rather than silently
    divided out.
    """
    pts = [tuple(m) for m in points]
    if not pts:
        raise SupportError("no monomials")
    s = SupportSet(dimension, tuple(pts))
    bad = [i for i in range(dimension) if all(m[i] >= 1 for m in s.points)]
    if bad:
        which = ", ".join(f"divisible by coordinate {i}" for i in bad)
        raise SupportError(
            f"{which}: X contains a coordinate hyperplane; divide it out and re-run"
        )
    return s


def _check_dim(s: SupportSet, a: Sequence) -> None:
    if len(a) != s.dimension:
        raise InputError(f"vector of length {len(a)} does not match dimension {s.dimension}")


def as_covector(a: Sequence[int], dimension: Optional[int] = None) -> Covector:
    a = tuple(a)
    if dimension is not None and len(a) != dimension:
        raise InputError(f"covector {a} does not have length {dimension}")
    if any(int(v) != v or v < 1 for v in a):
        raise InputError(f"covector {a} must have integer entries >= 1")
    return tuple(int(v) for v in a)


def pairing(a: Sequence, m: Sequence) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, m)), Fraction(0))


def supporting_value(s: SupportSet, a: Sequence) -> Fraction:
    """min over the support of (a, m); for a >= 0 this is the minimum over the polyhedron."""
    _check_dim(s, a)
    if any(v < 0 for v in a):
        raise InputError("supporting function is defined on non-negative covectors")
    return min(pairing(a, m) for m in s.points)


def trace(s: SupportSet, a: Sequence) -> FaceTrace:
    _check_dim(s, a)
    values = [pairing(a, m) for m in s.points]
    low = min(values)
    members = tuple(m for m, v in zip(s.points, values) if v == low)
    return FaceTrace(members, tuple(a), low)


def _in_hull_plus_orthant(generators: Sequence[Exponent], q: Sequence) -> bool:
    """Is q = sum lambda_j g_j + r with lambda a probability vector and r >= 0?"""
    if not generators:
        return False
    dim = len(q)
    k = len(generators)
    # variables: lambda_1..lambda_k, r_1..r_dim, all >= 0
    rows = []
    for i in range(dim):
        coeffs = [Fraction(g[i]) for g in generators] + [Fraction(int(t == i)) for t in range(dim)]
        rows.append(Constraint(tuple(coeffs), EQ, Fraction(q[i])))
    rows.append(Constraint(tuple([Fraction(1)] * k + [Fraction(0)] * dim), EQ, Fraction(1)))
    p = LpProblem((Fraction(0),) * (k + dim), tuple(rows), (Fraction(0),) * (k + dim))
    return simplex_solve(p).status is Status.OPTIMAL


@lru_cache(maxsize=4096)
def newton_vertices(s: SupportSet) -> tuple[Exponent, ...]:
    """Support points that are vertices of the Newton polyhedron."""
    return tuple(
        m for m in s.points if not _in_hull_plus_orthant([o for o in s.points if o != m], m)
    )


def polyhedron_contains(s: SupportSet, q: Sequence) -> bool:
    _check_dim(s, q)
    if any(Fraction(v) < 0 for v in q):
        return False
    return _in_hull_plus_orthant(s.points, q)


def in_proper_cone(s: SupportSet, a: Sequence[int]) -> bool:
    """True iff a strictly positive covector sits in a non-maximal cone of the dual fan.

    Maximal cones are exactly those whose trace is a single vertex.
    """
    verts = set(newton_vertices(s))
    return sum(1 for m in trace(s, a).members if m in verts) >= 2
