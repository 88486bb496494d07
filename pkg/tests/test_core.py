from __future__ import annotations

from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import spaces

from ghmetrics.core import (Correspondence, InvalidCorrespondence, MissingRoot, RootedSpace, UnknownPoint,
                            ValidationError, as_rational, check_space, closed_ball, diagonal_correspondence,
                            distortion, glue, restrict_space, space_from_edges, validate_space)


def test_as_rational_is_exact_for_decimal_text():
    assert as_rational("0.1") == Fraction(1, 10)
    assert as_rational(0.1) == Fraction(1, 10)
    assert as_rational(Decimal("2.5")) == Fraction(5, 2)
    assert as_rational("3/7") == Fraction(3, 7)
    with pytest.raises(ValidationError):
        as_rational(True)
    with pytest.raises(ValidationError):
        as_rational("abc")
    with pytest.raises(ValidationError):
        as_rational(float("nan"))


@pytest.mark.parametrize("matrix,code", [
    ([[0, 1], [2, 0]], "AsymmetricEntry"),
    ([[1, 1], [1, 0]], "NonZeroDiagonal"),
    ([[0, -1], [-1, 0]], "NegativeEntry"),
    ([[0, 0], [0, 0]], "ZeroOffDiagonal"),
    ([[0, 1, 5], [1, 0, 1], [5, 1, 0]], "TriangleViolation"),
    ([[0, 1], [1]], "NonSquare"),
    ([], "EmptySpace"),
])
def test_check_space_reports_each_violation(matrix, code):
    assert code in {d.code for d in check_space(matrix)}


def test_validate_space_raises_with_diagnostics():
    with pytest.raises(ValidationError) as exc:
        validate_space([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert exc.value.diagnostics[0].indices == (0, 1, 2)


def test_duplicate_labels_rejected():
    assert check_space([[0, 1], [1, 0]], ["a", "a"])[0].code == "DuplicateLabel"


def test_edges_are_completed_by_shortest_paths():
    sp = space_from_edges("abc", [("a", "b", "1/2"), ("b", "c", "0.25"), ("a", "c", 5)])
    assert sp.d("a", "c") == Fraction(3, 4)
    with pytest.raises(ValidationError):
        space_from_edges("abc", [("a", "b", 1)])


def test_balls_and_truncation():
    sp = validate_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert closed_ball(sp, 0, 1) == {0, 1}
    assert closed_ball(sp, 0, Fraction(1, 2)) == {0}
    assert restrict_space(RootedSpace(sp, 0), 1).space.labels == (0, 1)
    with pytest.raises(MissingRoot):
        RootedSpace(sp, 9)
    with pytest.raises(UnknownPoint):
        sp.d(0, 7)


def test_distortion_and_correspondence_validation():
    x = validate_space([[0, 1], [1, 0]], "ab")
    y = validate_space([[0, 3], [3, 0]], "ab")
    assert distortion(Correspondence([("a", "a"), ("b", "b")]), x, y) == 2
    assert distortion(Correspondence([("a", "a"), ("b", "a"), ("b", "b")]), x, y) == 3
    with pytest.raises(InvalidCorrespondence):
        distortion(Correspondence([("a", "a")]), x, y)
    with pytest.raises(InvalidCorrespondence):
        distortion(Correspondence([("a", "a"), ("b", "b"), ("z", "a")]), x, y)


@settings(max_examples=60, deadline=None)
@given(spaces(max_size=4), spaces(max_size=4), st.integers(0, 8))
def test_gluings_are_isometric_metric_spaces(x, y, k):
    corr = diagonal_correspondence(x, y)
    base = glue(x, y, "correspondence", corr=corr)
    half = distortion(corr, x, y) / 2
    for a, b in corr.pairs:
        assert base.cross(a, b) <= half
    shifted = glue(x, y, "shift", base=base, shift=Fraction(k, 4))
    ident = glue(x, y, "root_identify_shift", base=base, root_left=x.labels[0], root_right=y.labels[0])
    rsum = glue(x, y, "root_sum", root_left=x.labels[0], root_right=y.labels[0])
    for g in (base, shifted, ident, rsum):
        assert not check_space(g.space.dist)
        for a in x.labels:
            for a2 in x.labels:
                assert g.space.d(g.left[a], g.left[a2]) == x.d(a, a2)
        for b in y.labels:
            for b2 in y.labels:
                assert g.space.d(g.right[b], g.right[b2]) == y.d(b, b2)
    assert ident.left[x.labels[0]] == ident.right[y.labels[0]]
    assert rsum.cross(x.labels[0], y.labels[0]) == 0
