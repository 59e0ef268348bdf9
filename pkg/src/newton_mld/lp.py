"""Exact rational linear and integer programming.

Everything here works over :class:`fractions.Fraction`; there is no
floating point anywhere.  The simplex method is a dense two-phase tableau
with Bland's least-index rule, and integer programs are handled by a
depth-first branch-and-bound on top of it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import InputError, UnboundedRelaxation

Rational = Fraction

GE = ">="
LE = "<="
EQ = "=="
_SENSES = (GE, LE, EQ)

DEFAULT_BOX = 32
DEFAULT_BOX_GROWTH = 4
DEFAULT_NODE_LIMIT = 200_000


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    sense: str
    rhs: Fraction

    def __post_init__(self):
        if self.sense not in _SENSES:
            raise InputError(f"unknown constraint sense {self.sense!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, x)), Fraction(0))

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        v = self.lhs(x)
        if self.sense == GE:
            return v >= self.rhs
        if self.sense == LE:
            return v <= self.rhs
        return v == self.rhs


@dataclass(frozen=True)
class LpProblem:
    """Minimize ``objective . x`` subject to ``constraints``.

    ``lower_bounds[j] is None`` means x_j is free.  ``integer[j]`` marks
    integrality; :func:`simplex_solve` ignores it.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...] = ()
    lower_bounds: Optional[tuple[Optional[Fraction], ...]] = None
    integer: Optional[tuple[bool, ...]] = None

    def __post_init__(self):
        n = len(self.objective)
        object.__setattr__(self, "objective", tuple(Fraction(c) for c in self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        lbs = self.lower_bounds if self.lower_bounds is not None else (None,) * n
        object.__setattr__(
            self, "lower_bounds", tuple(None if b is None else Fraction(b) for b in lbs)
        )
        ints = self.integer if self.integer is not None else (False,) * n
        object.__setattr__(self, "integer", tuple(bool(b) for b in ints))
        if n == 0:
            raise InputError("objective has no variables")
        for k, con in enumerate(self.constraints):
            if len(con.coeffs) != n:
                raise InputError(
                    f"constraint {k} has {len(con.coeffs)} coefficients, expected {n}"
                )
        if len(self.lower_bounds) != n or len(self.integer) != n:
            raise InputError("bound/integrality vectors must match the objective length")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.num_vars:
            return False
        for v, lb in zip(x, self.lower_bounds):
            if lb is not None and v < lb:
                return False
        return all(c.satisfied_by(x) for c in self.constraints)

    def with_constraints(self, extra: Sequence[Constraint]) -> "LpProblem":
        return replace(self, constraints=self.constraints + tuple(extra))

    def relaxed(self) -> "LpProblem":
        return replace(self, integer=(False,) * self.num_vars)


@dataclass(frozen=True)
class LpCertificate:
    """Dual solution proving optimality.

    ``duals[i]`` belongs to constraint i (>= rows get duals >= 0, <= rows
    get duals <= 0), and ``reduced_costs = objective - A^T duals``.
    """

    duals: tuple[Fraction, ...]
    reduced_costs: tuple[Fraction, ...]
    basis: tuple[int, ...]


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    value: Optional[Fraction] = None
    point: Optional[tuple[Fraction, ...]] = None
    certificate: Optional[LpCertificate] = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


@dataclass(frozen=True)
class IlpOutcome:
    status: Status
    value: Optional[Fraction] = None
    point: Optional[tuple[Fraction, ...]] = None
    optimality_certified: bool = False
    lower_bound: Optional[Fraction] = None
    box: int = 0
    nodes: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def constraint(coeffs: Sequence, sense: str, rhs) -> Constraint:
    return Constraint(tuple(coeffs), sense, Fraction(rhs))


# ---------------------------------------------------------------------------
# simplex


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = T[r]
    p = row[c]
    if p != 1:
        T[r] = row = [v / p for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _iterate(T, basis, cost, ncols):
    """Run Bland's-rule simplex on ``T`` minimizing ``cost``.

    Returns ``None`` at optimality, or the entering column when unbounded.
    """
    rhs = ncols
    while True:
        cb = [cost[b] for b in basis]
        entering = None
        in_basis = set(basis)
        for j in range(ncols):
            if j in in_basis:
                continue
            d = cost[j] - sum((cb[i] * T[i][j] for i in range(len(T)) if T[i][j]), Fraction(0))
            if d < 0:
                entering = j
                break
        if entering is None:
            return None
        best = None
        for i, row in enumerate(T):
            a = row[entering]
            if a > 0:
                ratio = row[rhs] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return entering
        _pivot(T, basis, best[1], entering)


def _solve_transposed(B: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve ``B^T u = rhs`` for square nonsingular ``B`` (Gauss-Jordan)."""
    m = len(rhs)
    M = [[B[r][c] for r in range(m)] + [rhs[c]] for c in range(m)]
    for col in range(m):
        piv = next(r for r in range(col, m) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(m):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [M[r][m] for r in range(m)]


def simplex_solve(p: LpProblem) -> LpOutcome:
    """Solve the LP relaxation of ``p`` exactly.

    Variables with a lower bound are shifted to start at zero and free
    variables are split into a difference of two non-negative ones; each
    constraint gets a slack column and is sign-normalized so the right-hand
    side is non-negative.  Phase one minimizes the sum of artificials.
    """
    n = p.num_vars
    # column map: (original var, sign) for structural columns
    cols: list[tuple[int, int]] = []
    for j, lb in enumerate(p.lower_bounds):
        cols.append((j, 1))
        if lb is None:
            cols.append((j, -1))
    nstruct = len(cols)
    nslack = sum(1 for c in p.constraints if c.sense != EQ)
    nrows = len(p.constraints)
    ncols = nstruct + nslack + nrows  # + artificials

    rows: list[list[Fraction]] = []
    flips: list[int] = []
    slack_at = nstruct
    for con in p.constraints:
        row = [Fraction(0)] * (ncols + 1)
        b = con.rhs
        for k, (j, sgn) in enumerate(cols):
            row[k] = sgn * con.coeffs[j]
        for j, lb in enumerate(p.lower_bounds):
            if lb is not None:
                b -= con.coeffs[j] * lb
        if con.sense == GE:
            row[slack_at] = Fraction(-1)
            slack_at += 1
        elif con.sense == LE:
            row[slack_at] = Fraction(1)
            slack_at += 1
        flip = -1 if b < 0 else 1
        if flip < 0:
            row = [-v for v in row]
            b = -b
        row[ncols] = b
        rows.append(row)
        flips.append(flip)

    art0 = nstruct + nslack
    A_std = [row[:art0] for row in rows]
    basis = []
    for i, row in enumerate(rows):
        row[art0 + i] = Fraction(1)
        basis.append(art0 + i)

    phase1 = [Fraction(0)] * art0 + [Fraction(1)] * nrows
    _iterate(rows, basis, phase1, ncols)
    if sum((rows[i][ncols] for i, b in enumerate(basis) if b >= art0), Fraction(0)) > 0:
        return LpOutcome(Status.INFEASIBLE)

    # drive zero-level artificials out; drop rows that are redundant
    keep = list(range(nrows))
    for i in range(nrows):
        if basis[i] >= art0:
            c = next((j for j in range(art0) if rows[i][j] != 0), None)
            if c is None:
                keep.remove(i)
            else:
                _pivot(rows, basis, i, c)
    T = [rows[i][:art0] + [rows[i][ncols]] for i in keep]
    basis = [basis[i] for i in keep]

    cost = [Fraction(0)] * art0
    for k, (j, sgn) in enumerate(cols):
        cost[k] = sgn * p.objective[j]
    if _iterate(T, basis, cost, art0) is not None:
        return LpOutcome(Status.UNBOUNDED)

    y = [Fraction(0)] * art0
    for i, b in enumerate(basis):
        y[b] = T[i][art0]
    x = []
    for j, lb in enumerate(p.lower_bounds):
        x.append(Fraction(0) if lb is None else lb)
    for k, (j, sgn) in enumerate(cols):
        x[j] += sgn * y[k]
    x = tuple(x)

    # duals from the final basis of the standardized rows
    B = [[A_std[i][b] for b in basis] for i in keep]
    u = _solve_transposed(B, [cost[b] for b in basis]) if keep else []
    duals = [Fraction(0)] * nrows
    for r, i in enumerate(keep):
        duals[i] = flips[i] * u[r]
    reduced = tuple(
        p.objective[j] - sum((duals[i] * con.coeffs[j] for i, con in enumerate(p.constraints)), Fraction(0))
        for j in range(n)
    )
    cert = LpCertificate(tuple(duals), reduced, tuple(basis))
    return LpOutcome(Status.OPTIMAL, p.value_at(x), x, cert)


def check_certificate(p: LpProblem, out: LpOutcome) -> bool:
    """Verify primal feasibility, dual feasibility and strong duality exactly."""
    if not out.optimal:
        return False
    x = out.point
    if not p.is_feasible(x) or p.value_at(x) != out.value:
        return False
    cert = out.certificate
    for y, con in zip(cert.duals, p.constraints):
        if con.sense == GE and y < 0:
            return False
        if con.sense == LE and y > 0:
            return False
    for j in range(p.num_vars):
        expect = p.objective[j] - sum(
            (y * con.coeffs[j] for y, con in zip(cert.duals, p.constraints)), Fraction(0)
        )
        if expect != cert.reduced_costs[j]:
            return False
        r = cert.reduced_costs[j]
        if p.lower_bounds[j] is None and r != 0:
            return False
        if p.lower_bounds[j] is not None and r < 0:
            return False
    dual_value = sum((y * con.rhs for y, con in zip(cert.duals, p.constraints)), Fraction(0))
    dual_value += sum(
        (lb * r for lb, r in zip(p.lower_bounds, cert.reduced_costs) if lb is not None),
        Fraction(0),
    )
    return dual_value == out.value


# ---------------------------------------------------------------------------
# branch and bound


def _round_up(v: Fraction, grid: Optional[Fraction]) -> Fraction:
    if grid is None:
        return v
    return math.ceil(v / grid) * grid


def _unit(n: int, j: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(k == j)) for k in range(n))


def _box_constraints(p: LpProblem, box: Sequence[int]) -> list[Constraint]:
    out = []
    for j, is_int in enumerate(p.integer):
        if is_int:
            out.append(Constraint(_unit(p.num_vars, j), LE, Fraction(box[j])))
            if p.lower_bounds[j] is None:
                out.append(Constraint(_unit(p.num_vars, j), GE, Fraction(-box[j])))
    return out


def _outside_box(p: LpProblem, box: Sequence[int]) -> list[list[Constraint]]:
    regions = []
    for j, is_int in enumerate(p.integer):
        if is_int:
            regions.append([Constraint(_unit(p.num_vars, j), GE, Fraction(box[j] + 1))])
            if p.lower_bounds[j] is None:
                regions.append([Constraint(_unit(p.num_vars, j), LE, Fraction(-box[j] - 1))])
    return regions


def _branch_var(p: LpProblem, x: Sequence[Fraction]) -> Optional[int]:
    best, best_frac = None, Fraction(0)
    for j, is_int in enumerate(p.integer):
        if is_int:
            frac = x[j] - math.floor(x[j])
            if frac > best_frac:
                best, best_frac = j, frac
    return best


def _branch_and_bound(p, box, incumbent, grid, stop_at, node_limit):
    """Exhaustive depth-first search of ``p`` inside ``box``.

    Returns ``(incumbent, nodes, exhausted)``; incumbent is ``(value, x)``.
    """
    base = p.relaxed().with_constraints(_box_constraints(p, box))
    nodes = 0

    def bound(out):
        return _round_up(out.value, grid)

    root = simplex_solve(base)
    if root.status is Status.UNBOUNDED:
        raise UnboundedRelaxation("LP relaxation is unbounded inside the search box")
    if not root.optimal:
        return incumbent, 1, True
    stack = [((), root)]
    while stack:
        extra, out = stack.pop()
        nodes += 1
        if nodes > node_limit:
            return incumbent, nodes, False
        if incumbent is not None and bound(out) >= incumbent[0]:
            continue
        j = _branch_var(p, out.point)
        if j is None:
            incumbent = (out.value, out.point)
            if stop_at is not None and out.value <= stop_at:
                return incumbent, nodes, True
            continue
        v = out.point[j]
        children = []
        for con in (
            Constraint(_unit(p.num_vars, j), LE, Fraction(math.floor(v))),
            Constraint(_unit(p.num_vars, j), GE, Fraction(math.ceil(v))),
        ):
            sub = extra + (con,)
            child = simplex_solve(base.with_constraints(sub))
            if child.optimal:
                children.append((bound(child), sub, child))
        # best bound popped first; on ties the down-branch goes first
        children.sort(key=lambda c: c[0], reverse=True)
        for _, sub, child in children:
            stack.append((sub, child))
    return incumbent, nodes, True


def ilp_minimize(
    p: LpProblem,
    search_box: Union[None, int, Sequence[int]] = None,
    box_growth_limit: int = DEFAULT_BOX_GROWTH,
    *,
    objective_grid: Optional[Fraction] = None,
    known_lower_bound: Optional[Fraction] = None,
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> IlpOutcome:
    """Minimize ``p`` over points whose integer-flagged coordinates are integral.

    The search runs inside a coordinate box on the integer variables.  The
    result is certified optimal when its value meets the (grid-rounded) LP
    lower bound, or when every region outside the box has an LP bound no
    better than the incumbent; otherwise the box is doubled, up to
    ``box_growth_limit`` times, and the best point is returned uncertified.

    ``objective_grid`` is an optional step g such that every integer-feasible
    objective value is a multiple of g; LP bounds are rounded up to it.
    """
    n = p.num_vars
    root = simplex_solve(p.relaxed())
    if root.status is Status.INFEASIBLE:
        return IlpOutcome(Status.INFEASIBLE, optimality_certified=True)
    if root.status is Status.UNBOUNDED:
        raise UnboundedRelaxation("LP relaxation is unbounded; the objective has no minimum")
    lower = _round_up(root.value, objective_grid)
    if known_lower_bound is not None:
        lower = max(lower, known_lower_bound)

    if search_box is None:
        box = [DEFAULT_BOX] * n
    elif isinstance(search_box, int):
        box = [search_box] * n
    else:
        box = list(search_box)
        if len(box) != n:
            raise InputError("search_box must have one entry per variable")
    if any(b < 1 for b in box):
        raise InputError("search box bounds must be positive")

    incumbent = None
    total_nodes = 0
    for attempt in range(box_growth_limit + 1):
        incumbent, nodes, exhausted = _branch_and_bound(
            p, box, incumbent, objective_grid, lower, node_limit
        )
        total_nodes += nodes
        if incumbent is not None and incumbent[0] <= lower:
            return IlpOutcome(
                Status.OPTIMAL, incumbent[0], incumbent[1], True, lower, max(box), total_nodes
            )
        if exhausted:
            outside_ok = True
            for region in _outside_box(p, box):
                out = simplex_solve(p.relaxed().with_constraints(region))
                if out.optimal and (
                    incumbent is None or _round_up(out.value, objective_grid) < incumbent[0]
                ):
                    outside_ok = False
                    break
            if outside_ok:
                if incumbent is None:
                    return IlpOutcome(
                        Status.INFEASIBLE, optimality_certified=True, box=max(box), nodes=total_nodes
                    )
                return IlpOutcome(
                    Status.OPTIMAL, incumbent[0], incumbent[1], True, lower, max(box), total_nodes
                )
        if attempt < box_growth_limit:
            box = [2 * b for b in box]

    if incumbent is None:
        return IlpOutcome(Status.INFEASIBLE, optimality_certified=False, box=max(box), nodes=total_nodes)
    return IlpOutcome(
        Status.OPTIMAL, incumbent[0], incumbent[1], False, lower, max(box), total_nodes
    )
