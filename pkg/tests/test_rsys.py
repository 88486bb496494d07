from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from ghmetrics.core import validate_space
from ghmetrics.rsys import (AxiomFailure, MalformedCurve, PiecewiseConstantCurve, RestrictionSystem,
                            build_local_metric, check_rs_axioms, exp_integral)
from ghmetrics.setmetrics import quadratic_radius_system, subset_system


def test_constant_curves():
    assert exp_integral(PiecewiseConstantCurve((), (0,))) == 0
    assert exp_integral(PiecewiseConstantCurve((), (5,))) == 1
    assert exp_integral(PiecewiseConstantCurve((), (Fraction(1, 3),))) == pytest.approx(1 / 3, abs=1e-15)


def test_step_at_two():
    assert exp_integral(PiecewiseConstantCurve((2,), (0, 1))) == pytest.approx(math.exp(-2), abs=1e-15)


def test_infinite_values_clamp_to_one():
    assert exp_integral(PiecewiseConstantCurve((1,), (float("inf"), 0))) == pytest.approx(1 - math.exp(-1))


@pytest.mark.parametrize("bps,vals", [((1, 1), (0, 0, 0)), ((0,), (0, 0)), ((1,), (0,)), ((1,), (0, -1))])
def test_malformed_curves(bps, vals):
    with pytest.raises(MalformedCurve):
        PiecewiseConstantCurve(bps, vals)


curve_parts = st.lists(st.tuples(st.integers(1, 8), st.integers(0, 6)), min_size=0, max_size=6)


@settings(max_examples=60, deadline=None)
@given(curve_parts, st.integers(0, 6))
def test_integral_matches_quadrature(parts, first):
    acc, bps, vals = 0, [], [Fraction(first, 4)]
    for step, v in parts:
        acc += Fraction(step, 4)
        bps.append(acc)
        vals.append(Fraction(v, 4))
    curve = PiecewiseConstantCurve(tuple(bps), tuple(vals))
    f = lambda r: math.exp(-r) * min(1.0, float(curve(Fraction(r))))
    edges = [0.0] + [float(b) for b in bps] + [float(acc) + 40.0]
    ref = sum(integrate.quad(f, a, b)[0] for a, b in zip(edges, edges[1:]))
    assert exp_integral(curve) == pytest.approx(ref, abs=1e-9)


def test_from_samples_uses_left_endpoints():
    curve = PiecewiseConstantCurve.from_samples([1, 2], lambda r: 0 if r < 1 else (1 if r < 2 else 3))
    assert curve.breakpoints == (1, 2) and curve.values == (0, 1, 3)


def test_build_local_metric_refuses_failing_system():
    sp = validate_space([[0, Fraction(1, 10)], [Fraction(1, 10), 0]])
    samples = ([0, 1], [Fraction(1, 10), Fraction(1, 2)], [frozenset({0}), frozenset({0, 1})])
    with pytest.raises(AxiomFailure):
        build_local_metric(quadratic_radius_system(sp), root=0, check=samples)
    metric = build_local_metric(subset_system(sp), root=0, check=samples)
    assert metric(frozenset({0}), frozenset({0})) == 0
    paired = build_local_metric(subset_system(sp), policy="paired_centers")
    assert paired(frozenset({0}), 0, frozenset({0}), 1) == Fraction(1, 10)


def test_rs2_detects_non_separating_system():
    sp = validate_space([[0, 1], [1, 0]])
    # forgets everything: distinct objects look the same at every radius
    blind = RestrictionSystem("blind", sp, lambda a, x, r: frozenset(), lambda a, b: 0, lambda a, x: [])
    rep = check_rs_axioms(blind, [0], [1], [frozenset(), frozenset({0})])
    assert not rep.passed("RS2") and not rep.passed("RS3")
