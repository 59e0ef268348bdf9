from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from newton_mld.discrepancy import (
    MldValue,
    boundary,
    full_report,
    intersects_strict_transform,
    is_log_canonical,
    lct,
    mld_pair,
    multiplicity,
    ordinary_blowup_discrepancy,
    phi,
    proper_cone_minimizer,
)
from newton_mld.errors import InputError
from newton_mld.newton import SupportSet, in_proper_cone, pairing, polyhedron_contains, trace
from newton_mld.oracle import brute_force_min

from conftest import supports

A1 = SupportSet.of([(2, 0, 0), (0, 2, 0), (0, 0, 2)])
CUSP = SupportSet.of([(2, 0), (0, 3)])
FERMAT3 = SupportSet.of([(3, 0, 0), (0, 3, 0), (0, 0, 3)])
QUAD4 = SupportSet.of([(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2)])
S235 = SupportSet.of([(2, 0, 0), (0, 3, 0), (0, 0, 5)])


def test_phi_examples():
    assert phi(A1, None, (1, 1, 1)) == 1
    assert phi(CUSP, (1, 1), (3, 2)) == 5 - 6
    assert phi(CUSP, (1, 1), (2, 3)) == 5 - 4
    assert phi(CUSP, None, (2, 2)) == 0
    assert phi(CUSP, None, (4, 4)) == 2 * phi(CUSP, None, (2, 2))


def test_phi_dimension_mismatch():
    with pytest.raises(InputError):
        phi(CUSP, None, (1, 1, 1))
    with pytest.raises(InputError):
        phi(CUSP, (1, 1, 1), (1, 1))


def test_boundary_range():
    assert boundary(None, 3) == (1, 1, 1)
    with pytest.raises(InputError):
        boundary((1, F(3, 2)), 2)
    with pytest.raises(InputError):
        boundary((-1, 1), 2)


def test_log_canonical_examples():
    assert is_log_canonical(A1)
    assert not is_log_canonical(CUSP)
    assert is_log_canonical(SupportSet.of([(1, 0, 0), (0, 4, 7), (3, 0, 9)]))


# values below were produced by brute_force_min over the stated boxes and frozen
@pytest.mark.parametrize(
    "s, delta, box, value, witness",
    [
        (A1, None, 5, F(1), (1, 1, 1)),
        (FERMAT3, None, 5, F(0), (1, 1, 1)),
        (QUAD4, None, 5, F(2), (1, 1, 1, 1)),
        (SupportSet.of([(1, 0), (0, 1)]), (1, F(1, 2)), 4, F(1, 2), (1, 1)),
    ],
)
def test_mld_examples(s, delta, box, value, witness):
    oracle = brute_force_min(s, delta, box)
    assert oracle.min_value == value
    res = mld_pair(s, delta)
    assert res.mld == MldValue.finite(value)
    assert res.witness == witness
    assert res.certified


def test_mld_not_log_canonical():
    oracle = brute_force_min(CUSP, None, 3)
    assert (oracle.min_value, oracle.minimizers) == (-1, ((3, 2),))
    res = mld_pair(CUSP)
    assert not res.mld.is_finite and res.witness is None
    assert str(res.mld) == "-inf"


def test_mld_value_rejects_negative():
    with pytest.raises(ValueError):
        MldValue.finite(-1)


def test_intersects_strict_transform_examples():
    assert not intersects_strict_transform(S235, (1, 1, 1))
    assert intersects_strict_transform(S235, (15, 10, 6))
    # a non-vertex support point counts
    assert intersects_strict_transform(SupportSet.of([(2, 0), (1, 1), (0, 2)]), (1, 1))


def test_multiplicity_examples():
    assert (multiplicity(A1), ordinary_blowup_discrepancy(A1)) == (2, 1)
    smooth = SupportSet.of([(1, 0)])
    assert (multiplicity(smooth), ordinary_blowup_discrepancy(smooth)) == (1, 1)
    assert (multiplicity(CUSP), ordinary_blowup_discrepancy(CUSP)) == (2, 0)


def test_lct_examples():
    assert lct(CUSP) == (F(5, 6), F(5, 6))
    assert lct(SupportSet.of([(1, 0)])) == (1, 1)
    assert lct(A1) == (F(3, 2), 1)


def test_lct_matches_log_canonicity_of_scaled_boundary():
    # (C^2, c X) is lc iff (1/c) 1 lies in the polyhedron
    raw = lct(CUSP).raw
    assert polyhedron_contains(CUSP, (1 / raw, 1 / raw))
    assert not polyhedron_contains(CUSP, (1 / raw - F(1, 10**6),) * 2)


def test_full_report_examples():
    r = full_report(A1)
    assert r.log_canonical and r.mld.value == 1 and r.witness == (1, 1, 1)
    assert r.witness_in_proper_cone and r.witness_meets_strict_transform
    assert r.multiplicity == 2 and not r.smooth

    r = full_report(SupportSet.of([(1, 0, 0)]))
    assert r.log_canonical and r.mld.value == 2 and r.smooth

    r = full_report(CUSP)
    assert not r.log_canonical and not r.mld.is_finite and r.witness is None


def test_full_report_prefers_proper_cone_witness():
    s = SupportSet.of([(0, 1, 0), (5, 5, 3), (6, 0, 4)])
    r = full_report(s)
    assert r.mld.value == phi(s, None, r.witness)
    assert r.witness_in_proper_cone
    oracle = brute_force_min(s, None, 12)
    assert oracle.interior and oracle.min_value == r.mld.value


def test_proper_cone_minimizer_absent_for_single_vertex():
    assert proper_cone_minimizer(SupportSet.of([(1, 0, 0)]), None, 2) is None


# --- function laws ------------------------------------------------------------

pos = st.lists(st.integers(1, 12), min_size=4, max_size=4)
deltas = st.lists(st.fractions(0, 1, max_denominator=6), min_size=4, max_size=4)


@settings(max_examples=200, deadline=None)
@given(supports(), deltas, pos, st.integers(1, 7))
def test_homogeneity(s, d, a, c):
    d, a = d[: s.dimension], a[: s.dimension]
    assert phi(s, d, [c * v for v in a]) == c * phi(s, d, a)


@settings(max_examples=200, deadline=None)
@given(supports(), deltas, pos, pos)
def test_subadditivity(s, d, a, b):
    d, a, b = d[: s.dimension], a[: s.dimension], b[: s.dimension]
    total = phi(s, d, [x + y for x, y in zip(a, b)])
    split = phi(s, d, a) + phi(s, d, b)
    meet = set(trace(s, a).members) & set(trace(s, b).members)
    assert total <= split
    assert (total == split) == bool(meet)


@settings(max_examples=200, deadline=None)
@given(supports(), deltas, pos, st.integers(0, 3))
def test_step_identity(s, d, a, j):
    d, a = d[: s.dimension], a[: s.dimension]
    j = j % s.dimension
    b = list(a)
    b[j] += 1
    diff = phi(s, d, b) - phi(s, d, a)
    ta, tb = trace(s, a).members, trace(s, b).members
    for m in ta:
        for m2 in tb:
            assert diff == -pairing(a, [x - y for x, y in zip(m2, m)]) + F(d[j]) - m2[j]
    if not set(ta) & set(tb):
        assert diff <= -1 + F(d[j]) - min(m2[j] for m2 in tb) <= 0


@settings(max_examples=200, deadline=None)
@given(supports(), deltas, pos, st.integers(0, 3))
def test_step_never_increases_away_from_the_face(s, d, a, j):
    # the trace of a misses {m_j = 0}: adding e_j cannot raise phi
    d, a = d[: s.dimension], a[: s.dimension]
    j = j % s.dimension
    assume(all(m[j] >= 1 for m in trace(s, a).members))
    b = list(a)
    b[j] += 1
    assert phi(s, d, b) <= phi(s, d, a)


@settings(max_examples=200, deadline=None)
@given(supports(), pos)
def test_unique_argmin_means_maximal_cone(s, a):
    a = a[: s.dimension]
    if not intersects_strict_transform(s, a):
        assert not in_proper_cone(s, a)


@settings(max_examples=40, deadline=None)
@given(supports(max_dim=3, validated=True))
def test_mld_bound_and_smoothness(s):
    res = mld_pair(s)
    if res.mld.is_finite:
        n = s.dimension - 1
        assert res.mld.value <= n
        assert (res.mld.value == n) == any(sum(m) == 1 for m in s.points)
        assert (multiplicity(s) == 1) == (res.mld.value == n)


@settings(max_examples=40, deadline=None)
@given(supports(max_dim=3, max_exp=4, validated=True))
def test_mld_agrees_with_oracle(s):
    res = mld_pair(s)
    oracle = brute_force_min(s, None, 8)
    if not res.mld.is_finite:
        return
    assert oracle.min_value >= res.mld.value
    if res.certified and oracle.interior:
        assert oracle.min_value == res.mld.value
