from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hausdorff_direct, local_hausdorff_quad
from strategies import spaces, subsets

from ghmetrics.core import RootMismatch, validate_space
from ghmetrics.rsys import check_rs_axioms
from ghmetrics.setmetrics import (eps_neighborhood, hausdorff, local_hausdorff, local_hausdorff_integral,
                                  quadratic_radius_system, restrict_subset, subset_system)

PATH3 = validate_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def test_path3_example():
    assert hausdorff(PATH3, {0}, {0, 2}) == 2
    assert eps_neighborhood(PATH3, {0}, 1) == {0, 1}


def test_empty_sets():
    assert hausdorff(PATH3, set(), set()) == 0
    assert hausdorff(PATH3, set(), {1}) == math.inf


def test_two_point_local_closed_form():
    sp = validate_space([[0, 2], [2, 0]])
    assert local_hausdorff(sp, ({0}, 0), ({0, 1}, 0)) == pytest.approx(math.exp(-2), abs=1e-12)


def test_rooted_mode_needs_shared_root():
    with pytest.raises(RootMismatch):
        local_hausdorff(PATH3, ({0}, 0), ({0}, 1))
    assert local_hausdorff(PATH3, ({0}, 0), ({0}, 1), mode="product") == 1


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_hausdorff_matches_direct_formula(data):
    sp = data.draw(spaces())
    a, b = data.draw(subsets(sp, True)), data.draw(subsets(sp, True))
    assert hausdorff(sp, a, b) == hausdorff_direct(sp, a, b)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_local_integral_matches_quadrature(data):
    sp = data.draw(spaces(max_size=5))
    a, b = data.draw(subsets(sp)), data.draw(subsets(sp))
    x, y = data.draw(st.sampled_from(sp.labels)), data.draw(st.sampled_from(sp.labels))
    assert local_hausdorff_integral(sp, a, x, b, y) == pytest.approx(local_hausdorff_quad(sp, a, x, b, y),
                                                                       abs=1e-7)


def test_restriction_is_a_ball_intersection():
    assert restrict_subset(PATH3, {0, 1, 2}, 0, Fraction(3, 2)) == {0, 1}


def test_subset_system_axioms_hold():
    objs = [frozenset(), frozenset({0}), frozenset({0, 2}), frozenset({0, 1, 2})]
    rep = check_rs_axioms(subset_system(PATH3), [0, 1, 2], [Fraction(1, 2), 1, 2], objs)
    assert rep.passed(), rep.summary()


def test_quadratic_system_breaks_shifted_centers():
    sp = validate_space([[0, Fraction(1, 10)], [Fraction(1, 10), 0]])
    rep = check_rs_axioms(quadratic_radius_system(sp), [0, 1], [Fraction(1, 10), Fraction(1, 2)],
                          [frozenset({0}), frozenset({0, 1})])
    assert not rep.passed("RS4")
    assert rep.summary()["axioms"]["RS4"]["witness"]
