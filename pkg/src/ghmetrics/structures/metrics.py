"""Distances between structure values and their pushforwards along isometric maps."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from ..core import MissingRoot, SpaceMismatch, UnknownPoint
from ..measuremetrics import FiniteMeasure, prohorov, prohorov_atoms, vague
from ..rsys import INF, clamp_unit
from ..setmetrics import hausdorff, local_hausdorff
from .functions import graph_hausdorff, var_function_distance
from .skorohod import skorohod_distance as _skorohod
from .values import (Composed, Fixed, KindMismatch, Law, LZero, Measure, NotIsometric, Point,
                     PointTuple, Product, StepCadlag, Subset, UnknownKind, VarFunction, _same_kind,
                     check_value)


def _require(space, *points) -> None:
    for p in points:
        if p not in space:
            raise UnknownPoint(f"unknown basepoint {p!r}")


def er_distance(space, a, x, b, y):
    """Element-rooted distance between ``a`` based at ``x`` and ``b`` based at ``y``.

    Every kind carries the basepoint distance d(x, y) in a max.
    """
    _same_kind(a, b)
    _require(space, x, y)
    dxy = space.d(x, y)
    if isinstance(a, Point):
        return max(dxy, space.d(a.point, b.point))
    if isinstance(a, PointTuple):
        return max([dxy] + [space.d(p, q) for p, q in zip(a.points, b.points)])
    if isinstance(a, Fixed):
        if a.aux != b.aux:
            raise SpaceMismatch("fixed values over different auxiliary spaces")
        return max(dxy, a.aux.d(a.element, b.element))
    if isinstance(a, Subset):
        return local_hausdorff(space, (a.members, x), (b.members, y), mode="product")
    if isinstance(a, Measure):
        return vague(space, (a.measure, x), (b.measure, y), mode="product")
    if isinstance(a, StepCadlag):
        if a.horizon != b.horizon:
            raise KindMismatch("step paths over different horizons")
        value = skorohod_er(space, a, x, b, y)
        return max(dxy, value)
    if isinstance(a, VarFunction):
        if a.transform != b.transform:
            raise KindMismatch("functions over different transformed spaces")
        return var_function_distance(space, a, x, b, y, lambda v, p, w, q: er_distance(space, v, p, w, q))
    if isinstance(a, LZero):
        if a.weights != b.weights:
            raise SpaceMismatch("L0 elements over different time spaces")
        total = sum((w * clamp_unit(space.d(p, q)) for w, p, q in zip(a.weights, a.values, b.values)),
                    Fraction(0))
        return max(dxy, total)
    if isinstance(a, Law):
        return max(dxy, law_distance(space, a, x, b, y))
    if isinstance(a, Product):
        if len(a.parts) != len(b.parts):
            raise KindMismatch("products of different lengths")
        return max([dxy] + [er_distance(space, p, x, q, y) for p, q in zip(a.parts, b.parts)])
    if isinstance(a, Composed):
        if a.transform != b.transform:
            raise KindMismatch("composed values over different transformations")
        psi = a.transform.apply(space)
        inner = er_distance(psi, a.inner, a.transform.root_of(x), b.inner, b.transform.root_of(y))
        return max(dxy, inner)
    raise UnknownKind(f"not a structure value: {a!r}")


def skorohod_er(space, a: StepCadlag, x, b: StepCadlag, y) -> float:
    """Complete Skorohod distance with inner values compared element-rooted at (x, y)."""
    metric = lambda v, w: er_distance(space, v, x, w, y)
    return _skorohod(list(a.jumps), list(b.jumps), metric, horizon=a.horizon)


def law_distance(space, a: Law, x, b: Law, y):
    """Prohorov distance between the laws, atoms compared element-rooted at (x, y)."""
    left = [(v, w) for w, v in a.atoms]
    right = [(v, w) for w, v in b.atoms]
    return prohorov_atoms(left, right, lambda i, j: er_distance(space, left[i][0], x, right[j][0], y)).value


def structure_distance(space, a, b, mode: str = "element_rooted", root=None, basepoints=None):
    """Distance between structure values.

    ``element_rooted`` needs ``basepoints=(x, y)``; ``space_rooted`` needs ``root``
    and compares both values at it.
    """
    check_value(space, a)
    check_value(space, b)
    if mode == "space_rooted":
        if root is None:
            raise MissingRoot("space-rooted distance needs a root")
        return er_distance(space, a, root, b, root)
    if mode == "element_rooted":
        if basepoints is None:
            if root is None:
                raise MissingRoot("element-rooted distance needs basepoints")
            basepoints = (root, root)
        x, y = basepoints
        return er_distance(space, a, x, b, y)
    raise ValueError(f"unknown mode {mode!r}")


def compact_distance(space, a, b):
    """Compact-level comparison without truncation, used by the compact-space variants."""
    _same_kind(a, b)
    if isinstance(a, Point):
        return space.d(a.point, b.point)
    if isinstance(a, PointTuple):
        return max([Fraction(0)] + [space.d(p, q) for p, q in zip(a.points, b.points)])
    if isinstance(a, Fixed):
        return a.aux.d(a.element, b.element)
    if isinstance(a, Subset):
        return hausdorff(space, a.members, b.members)
    if isinstance(a, Measure):
        return prohorov(space, a.measure, b.measure).value
    if isinstance(a, Product):
        return max(compact_distance(space, p, q) for p, q in zip(a.parts, b.parts))
    if isinstance(a, VarFunction):
        return graph_hausdorff(space, a, b, lambda v, p, w, q: compact_distance(space, v, w))
    raise UnknownKind(f"no compact-level metric for {type(a).__name__}")


def check_isometric(mapping: Mapping, source, target) -> None:
    labels = list(source.labels)
    for p in labels:
        if p not in mapping:
            raise NotIsometric(f"map undefined at {p!r}")
        if mapping[p] not in target:
            raise NotIsometric(f"image {mapping[p]!r} outside the target")
    for i, p in enumerate(labels):
        for q in labels[i + 1:]:
            if target.d(mapping[p], mapping[q]) != source.d(p, q):
                raise NotIsometric(f"distance between {p!r} and {q!r} is not preserved")


def pushforward(value, mapping: Mapping, source=None, target=None):
    """Transport ``value`` along a distance-preserving map of the underlying space.

    When ``source`` and ``target`` are given the map is checked to be isometric.
    """
    if source is not None and target is not None:
        check_isometric(mapping, source, target)
    return _push(value, lambda p: mapping[p])


def _push(value, f: Callable):
    if isinstance(value, Point):
        return Point(f(value.point))
    if isinstance(value, PointTuple):
        return PointTuple(tuple(f(p) for p in value.points))
    if isinstance(value, Fixed):
        return value
    if isinstance(value, Subset):
        return Subset(f(p) for p in value.members)
    if isinstance(value, Measure):
        return Measure(FiniteMeasure([(f(p), m) for p, m in value.measure.weights.items()]))
    if isinstance(value, StepCadlag):
        return StepCadlag([(t, _push(v, f)) for t, v in value.jumps], value.horizon)
    if isinstance(value, VarFunction):
        tr = value.transform
        return VarFunction(tr, [(_lift(tr, f, k), _push(v, f)) for k, v in value.graph])
    if isinstance(value, LZero):
        return LZero(value.weights, [f(p) for p in value.values])
    if isinstance(value, Law):
        return Law([(w, _push(v, f)) for w, v in value.atoms])
    if isinstance(value, Product):
        return Product(_push(p, f) for p in value.parts)
    if isinstance(value, Composed):
        tr = value.transform
        return Composed(tr, _push(value.inner, lambda k: _lift(tr, f, k)))
    raise UnknownKind(f"not a structure value: {value!r}")


def _lift(transform, f: Callable, label) -> tuple:
    head = tuple(f(c) for c in label[: transform.power])
    return head + (label[-1],) if transform.aux is not None else head


__all__ = ["er_distance", "skorohod_er", "law_distance", "structure_distance", "compact_distance",
           "check_isometric", "pushforward", "INF"]
