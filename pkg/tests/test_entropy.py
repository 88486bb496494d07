from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import covering_bruteforce
from strategies import spaces, subsets

from ghmetrics.core import FiniteMetricSpace, RootedSpace, validate_space
from ghmetrics.entropy import (EmptySet, NotConvergent, covering_number, entropy_convergence_check,
                               entropy_profile, jump_points, precompactness_diagnostic, resolution_margin)


def line(values) -> FiniteMetricSpace:
    values = list(values)
    return FiniteMetricSpace(list(range(len(values))), [[abs(a - b) for b in values] for a in values])


GRID = line(Fraction(k, 10) for k in range(11))


def test_grid_count_and_witness():
    cov = covering_number(GRID, Fraction(1, 10))
    assert cov.count == 4 and cov.exact
    assert all(any(GRID.d(c, p) <= Fraction(1, 10) for c in cov.centers) for p in GRID.labels)


def test_greedy_is_an_upper_bound():
    assert covering_number(GRID, Fraction(1, 10), mode="greedy").count >= 4


def test_bad_inputs():
    with pytest.raises(EmptySet):
        covering_number(GRID, 1, subset=set())
    with pytest.raises(ValueError):
        covering_number(GRID, 0)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_exact_matches_bruteforce(data):
    sp = data.draw(spaces(max_size=7))
    eps = Fraction(data.draw(st.integers(1, 12)), 4)
    sub = data.draw(subsets(sp, True))
    assert covering_number(sp, eps).count == covering_bruteforce(sp, eps)
    assert covering_number(sp, eps, subset=sub).count == covering_bruteforce(sp, eps, sub)


def test_profile_is_monotone():
    prof = entropy_profile(GRID, [Fraction(1, 20), Fraction(1, 10), Fraction(1, 2)])
    counts = [n for _, n, _ in prof.entries]
    assert counts == sorted(counts, reverse=True)


def test_resolution_margin():
    sp = validate_space([[0, 1], [1, 0]])
    assert jump_points(sp) == [1]
    assert resolution_margin(sp, Fraction(1, 2)) == (Fraction(1, 2), Fraction(1, 2))
    assert resolution_margin(sp, 2) == (1, None)


def test_convergent_sequence_certified():
    limit = validate_space([[0, 1], [1, 0]])
    members = [validate_space([[0, 1 + Fraction(1, n)], [1 + Fraction(1, n), 0]]) for n in range(2, 10)]
    rep = entropy_convergence_check(members, limit, [Fraction(1, 2), Fraction(2)])
    assert rep.passed and all(r["resolved"] for r in rep.rows)


def test_divergent_sequence_rejected():
    limit = validate_space([[0, 1], [1, 0]])
    members = [validate_space([[0, 3], [3, 0]])] * 3
    with pytest.raises(NotConvergent):
        entropy_convergence_check(members, limit, [Fraction(1, 2)])


def star(n: int) -> RootedSpace:
    labels = ["o"] + list(range(n))
    return RootedSpace(validate_space([[0 if a == b else (1 if "o" in (a, b) else 2) for b in labels]
                                       for a in labels], labels), "o")


def test_star_family_blows_up():
    rep = precompactness_diagnostic([star(n) for n in range(1, 7)], [1], [Fraction(1, 2)])
    assert rep.verdict == "blow-up" and rep.witnesses
    rep2 = precompactness_diagnostic([star(n) for n in range(1, 7)], [Fraction(1, 2)], [Fraction(1, 2)])
    assert rep2.verdict.startswith("bounded")
