from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from gen import AUX, KINDS, rand_path, rand_space, rand_value
from oracles import modulus_grid

from ghmetrics.core import ValidationError, glue, validate_space, Correspondence
from ghmetrics.structures import (Composed, Fixed, KindMismatch, Law, LZero, Measure, NotIsometric, Point,
                                  PointTuple, Product, StepCadlag, Subset, Transform, UnknownKind,
                                  VarFunction, check_isometric, compact_distance, distortion_of,
                                  er_distance, kind_descriptor, precompactness_triple, pushforward,
                                  skorohod_distance, skorohod_modulus, structure_distance)
from ghmetrics.measuremetrics import FiniteMeasure

PATH3 = validate_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def test_point_and_tuple():
    assert er_distance(PATH3, Point(0), 0, Point(2), 0) == 2
    assert er_distance(PATH3, PointTuple((0, 1)), 0, PointTuple((0, 2)), 1) == 1
    assert structure_distance(PATH3, Point(0), Point(1), mode="space_rooted", root=2) == 1


def test_fixed_ignores_the_space():
    assert er_distance(PATH3, Fixed("u", AUX), 0, Fixed("u", AUX), 0) == 0
    assert er_distance(PATH3, Fixed("u", AUX), 0, Fixed("v", AUX), 0) == AUX.d("u", "v")


def test_lzero_is_weighted_clamped_sum():
    w = [Fraction(1, 2), Fraction(1, 2)]
    assert er_distance(PATH3, LZero(w, [0, 0]), 0, LZero(w, [2, 1]), 0) == 1
    assert er_distance(PATH3, LZero(w, [0, 0]), 0, LZero(w, [0, 1]), 0) == Fraction(1, 2)


def test_law_of_points():
    a = Law([(Fraction(1, 2), Point(0)), (Fraction(1, 2), Point(2))])
    assert er_distance(PATH3, a, 0, a, 0) == 0
    assert er_distance(PATH3, a, 0, Law([(1, Point(1))]), 0) == 1


def test_kind_checks():
    with pytest.raises(KindMismatch):
        er_distance(PATH3, Point(0), 0, Subset([0]), 0)
    with pytest.raises(UnknownKind):
        er_distance(PATH3, "nope", 0, "nope", 0)
    with pytest.raises(ValidationError):
        LZero([Fraction(1, 3)], [0])
    with pytest.raises(ValidationError):
        StepCadlag([(1, Point(0))])


def test_descriptors():
    assert kind_descriptor(Point(0)) == ("point",)
    assert kind_descriptor(Product([Point(0), Subset([])]))[0] == "product"


def test_distortion_table():
    assert str(distortion_of("point")) == "eps"
    assert distortion_of("fixed", rooted=False)(5) == 0
    assert distortion_of("subset", rooted=False)(5) == 1
    assert distortion_of("subset")(5) == 5
    assert distortion_of(Product([Point(0), Measure(FiniteMeasure({}))]))(Fraction(1, 2)) == Fraction(1, 2)


def test_subset_distortion_needs_the_basepoint_term():
    """Two single points: distance 0 in one gluing and 10 in the other.

    The element-rooted subset distance moves by 10 while the slack is 10; a
    clamped distortion would bound the move by 1.
    """
    x = validate_space([[0]], ["p"])
    y = validate_space([[0]], ["q"])
    base = glue(x, y, "correspondence", corr=Correspondence([("p", "q")]))
    near = glue(x, y, "shift", base=base, shift=0)
    far = glue(x, y, "shift", base=base, shift=10)

    def dist(g):
        return er_distance(g.space, Subset([g.left["p"]]), g.left["p"], Subset([g.right["q"]]), g.right["q"])

    d1, d2 = dist(near), dist(far)
    assert d1 == 0 and d2 == 10
    assert d2 > d1 + min(1, 10)
    assert d2 <= d1 + distortion_of(Subset([]))(10)


def test_skorohod_closed_forms():
    d = lambda v, w: PATH3.d(v.point, w.point)
    left = [(Fraction(0), Point(0)), (Fraction(1), Point(2))]
    right = [(Fraction(0), Point(0)), (Fraction(9, 10), Point(2))]
    assert skorohod_distance(left, right, d, horizon=2) == pytest.approx(math.log(10 / 9), abs=1e-12)
    consts = skorohod_distance([(0, Point(0))], [(0, Point(1))], lambda v, w: Fraction(1, 3))
    assert consts == pytest.approx(1 / 3, abs=1e-9)


def test_modulus_matches_grid():
    rng = random.Random(5)
    for _ in range(40):
        sp = rand_space(rng, 3)
        path = list(rand_path(rng, sp, 3).jumps)
        h = Fraction(rng.randint(1, 9), 10)
        metric = lambda v, w: sp.d(v.point, w.point)
        assert skorohod_modulus(path, h, 2, metric) == modulus_grid(path, h, 2, metric)


def test_var_function_and_precompactness_triple():
    tr = Transform()
    f = VarFunction(tr, {(0,): Point(0), (1,): Point(1)})
    g = VarFunction(tr, {(0,): Point(0)})
    assert er_distance(PATH3, f, 0, f, 0) == 0
    assert 0 < er_distance(PATH3, f, 0, g, 0) < 1
    inner = lambda v, x, w, y: er_distance(PATH3, v, x, w, y)
    trip = precompactness_triple(PATH3, [f, g], 0, inner, 2, Fraction(1, 2))
    assert {"domain_extent", "value_spread", "modulus"} <= set(trip)
    with pytest.raises(ValidationError):
        VarFunction(tr, [((0,), Point(0)), ((0,), Point(1))])


def test_composed_uses_power_space():
    tr = Transform(2)
    a = Composed(tr, Point((0, 1)))
    b = Composed(tr, Point((0, 2)))
    assert er_distance(PATH3, a, 0, b, 0) == 1


def test_compact_distance():
    assert compact_distance(PATH3, Subset([0]), Subset([0, 2])) == 2
    assert compact_distance(PATH3, Product([Point(0), Subset([0])]), Product([Point(1), Subset([0])])) == 1


def test_pushforward_rejects_non_isometric_maps():
    small = validate_space([[0, 1], [1, 0]])
    with pytest.raises(NotIsometric):
        check_isometric({0: 0, 1: 2}, small, PATH3)
    moved = pushforward(Subset([0, 1]), {0: 0, 1: 1}, small, PATH3)
    assert moved == Subset([0, 1])


@pytest.mark.parametrize("kind", KINDS)
def test_every_kind_is_zero_on_itself(kind):
    rng = random.Random(kind)
    sp = rand_space(rng, 3)
    v = rand_value(rng, sp, kind)
    assert er_distance(sp, v, sp.labels[0], v, sp.labels[0]) == 0
