"""Structure values: the additional objects carried by a finite metric space."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ..core import DomainError, FiniteMetricSpace, UnknownPoint, ValidationError, as_rational
from ..measuremetrics import FiniteMeasure


class KindMismatch(DomainError):
    pass


class UnknownKind(DomainError):
    pass


class NotIsometric(DomainError):
    pass


class PowerSpace:
    """X^k (times an optional auxiliary space) with the max product metric.

    Points are tuples ``(x_1, ..., x_k)`` or ``(x_1, ..., x_k, xi)``.
    """

    def __init__(self, base, power: int, aux: FiniteMetricSpace | None = None):
        self.base = base
        self.power = power
        self.aux = aux
        self._labels = None

    @property
    def labels(self) -> tuple:
        if self._labels is None:
            factors = [self.base.labels] * self.power
            if self.aux is not None:
                factors.append(self.aux.labels)
            self._labels = tuple(itertools.product(*factors))
        return self._labels

    def __contains__(self, label) -> bool:
        width = self.power + (self.aux is not None)
        if not isinstance(label, tuple) or len(label) != width:
            return False
        if any(c not in self.base for c in label[: self.power]):
            return False
        return self.aux is None or label[-1] in self.aux

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def d(self, a, b):
        if a not in self or b not in self:
            raise UnknownPoint(f"unknown point {a!r} or {b!r} of the product space")
        best = Fraction(0)
        for i in range(self.power):
            v = self.base.d(a[i], b[i])
            if v > best:
                best = v
        if self.aux is not None:
            v = self.aux.d(a[-1], b[-1])
            if v > best:
                best = v
        return best

    def __eq__(self, other) -> bool:
        return (isinstance(other, PowerSpace) and self.base == other.base
                and self.power == other.power and self.aux == other.aux)

    def __hash__(self) -> int:
        return hash((self.base, self.power, self.aux))


@dataclass(frozen=True)
class Transform:
    """Space transformation X -> X^power (x aux), rooted by x -> (x, ..., x, aux_root)."""

    power: int = 1
    aux: FiniteMetricSpace | None = None
    aux_root: object = None

    def __post_init__(self):
        if self.power < 1:
            raise ValidationError("transformation power must be at least 1")
        if self.aux is not None and self.aux_root not in self.aux:
            raise ValidationError("auxiliary root must be a point of the auxiliary space")

    def apply(self, space) -> PowerSpace:
        return PowerSpace(space, self.power, self.aux)

    def root_of(self, x) -> tuple:
        head = (x,) * self.power
        return head + (self.aux_root,) if self.aux is not None else head

    def map_label(self, mapping, label) -> tuple:
        head = tuple(mapping[c] for c in label[: self.power])
        return head + (label[-1],) if self.aux is not None else head


@dataclass(frozen=True)
class Point:
    point: object


@dataclass(frozen=True)
class PointTuple:
    points: tuple


@dataclass(frozen=True)
class Fixed:
    element: object
    aux: FiniteMetricSpace


@dataclass(frozen=True)
class Subset:
    members: frozenset

    def __init__(self, members: Iterable = ()):
        object.__setattr__(self, "members", frozenset(members))


@dataclass(frozen=True)
class Measure:
    measure: FiniteMeasure


@dataclass(frozen=True)
class StepCadlag:
    """Right-continuous step path: value ``jumps[k][1]`` on [t_k, t_{k+1}).

    ``horizon`` is a finite end time or ``None`` for the half line.
    """

    jumps: tuple
    horizon: Fraction | None = None

    def __init__(self, jumps, horizon=None):
        jumps = tuple((as_rational(t), v) for t, v in jumps)
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "horizon", None if horizon is None else as_rational(horizon))
        if not jumps or jumps[0][0] != 0:
            raise ValidationError("step path must start with a jump at time 0")
        for (t0, _), (t1, _) in zip(jumps, jumps[1:]):
            if not t1 > t0:
                raise ValidationError("jump times must be strictly increasing")
        if self.horizon is not None and jumps[-1][0] > self.horizon:
            raise ValidationError("jump after the horizon")

    def times(self) -> list:
        return [t for t, _ in self.jumps]

    def values(self) -> list:
        return [v for _, v in self.jumps]

    def at(self, time):
        current = self.jumps[0][1]
        for t, v in self.jumps:
            if t <= time:
                current = v
            else:
                break
        return current

    def truncate(self, horizon) -> "StepCadlag":
        return StepCadlag([(t, v) for t, v in self.jumps if t <= horizon], horizon)


@dataclass(frozen=True)
class VarFunction:
    """Function on a closed subset of a transformed space; ``graph`` holds (point, value)."""

    transform: Transform
    graph: tuple

    def __init__(self, transform: Transform, graph):
        items = graph.items() if isinstance(graph, dict) else graph
        pairs = {}
        for k, v in items:
            k = tuple(k)
            if k in pairs and pairs[k] != v:
                raise ValidationError(f"function takes two values at {k!r}")
            pairs[k] = v
        object.__setattr__(self, "transform", transform)
        object.__setattr__(self, "graph", tuple(sorted(pairs.items(), key=repr)))

    def domain(self) -> frozenset:
        return frozenset(k for k, _ in self.graph)

    def as_dict(self) -> dict:
        return dict(self.graph)


@dataclass(frozen=True)
class LZero:
    """Measurable map from a finite probability space of times into X."""

    weights: tuple
    values: tuple

    def __init__(self, weights, values):
        weights = tuple(as_rational(w) for w in weights)
        values = tuple(values)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "values", values)
        if len(weights) != len(values) or not weights:
            raise ValidationError("L0 element needs one value per time weight")
        if any(w < 0 for w in weights) or sum(weights) != 1:
            raise ValidationError("L0 time weights must be a probability vector")


@dataclass(frozen=True)
class Law:
    """Finitely supported probability measure on structure values."""

    atoms: tuple

    def __init__(self, atoms):
        merged: dict = {}
        for w, v in atoms:
            w = as_rational(w)
            if w < 0:
                raise ValidationError("negative atom weight")
            if w:
                merged[v] = merged.get(v, 0) + w
        if sum(merged.values()) != 1:
            raise ValidationError("law weights must sum to 1")
        object.__setattr__(self, "atoms", tuple(sorted(((w, v) for v, w in merged.items()), key=repr)))


@dataclass(frozen=True)
class Product:
    parts: tuple

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise ValidationError("product needs at least one part")
        object.__setattr__(self, "parts", parts)


@dataclass(frozen=True)
class Composed:
    transform: Transform
    inner: object


VALUE_TYPES = (Point, PointTuple, Fixed, Subset, Measure, StepCadlag, VarFunction, LZero, Law, Product, Composed)

KIND_NAMES = {
    Point: "point", PointTuple: "tuple", Fixed: "fixed", Subset: "subset", Measure: "measure",
    StepCadlag: "step_cadlag", VarFunction: "var_function", LZero: "lzero", Law: "law",
    Product: "product", Composed: "composed",
}


def kind_descriptor(value) -> tuple:
    """Nested tuple naming a value's kind and the kinds inside it."""
    name = KIND_NAMES.get(type(value))
    if name is None:
        raise UnknownKind(f"not a structure value: {value!r}")
    if isinstance(value, Product):
        return (name, tuple(kind_descriptor(p) for p in value.parts))
    if isinstance(value, Composed):
        return (name, value.transform.power, kind_descriptor(value.inner))
    if isinstance(value, PointTuple):
        return (name, len(value.points))
    if isinstance(value, StepCadlag):
        return (name, _common_inner(v for _, v in value.jumps))
    if isinstance(value, VarFunction):
        return (name, value.transform.power, _common_inner(v for _, v in value.graph))
    if isinstance(value, Law):
        return (name, _common_inner(v for _, v in value.atoms))
    return (name,)


def _common_inner(values) -> tuple | None:
    kinds = {kind_descriptor(v) for v in values}
    if len(kinds) > 1:
        raise KindMismatch(f"inner values of mixed kinds: {sorted(map(repr, kinds))}")
    return kinds.pop() if kinds else None


def _same_kind(a, b) -> None:
    ka, kb = kind_descriptor(a), kind_descriptor(b)
    if ka == kb:
        return
    # empty inner collections are compatible with anything of the same outer kind
    if ka[0] == kb[0] and (None in ka or None in kb) and len(ka) == len(kb):
        return
    raise KindMismatch(f"kind {ka!r} does not match {kb!r}")


def check_value(space, value) -> None:
    """Raise if ``value`` references points outside ``space`` or is malformed."""
    if isinstance(value, Point):
        if value.point not in space:
            raise UnknownPoint(f"unknown point {value.point!r}")
    elif isinstance(value, PointTuple):
        for p in value.points:
            if p not in space:
                raise UnknownPoint(f"unknown point {p!r}")
    elif isinstance(value, Fixed):
        if value.element not in value.aux:
            raise UnknownPoint(f"unknown auxiliary element {value.element!r}")
    elif isinstance(value, Subset):
        for p in value.members:
            if p not in space:
                raise UnknownPoint(f"unknown point {p!r}")
    elif isinstance(value, Measure):
        for p in value.measure.weights:
            if p not in space:
                raise UnknownPoint(f"unknown point {p!r}")
    elif isinstance(value, StepCadlag):
        _common_inner(v for _, v in value.jumps)
        for _, v in value.jumps:
            check_value(space, v)
    elif isinstance(value, VarFunction):
        target = value.transform.apply(space)
        _common_inner(v for _, v in value.graph)
        for k, v in value.graph:
            if k not in target:
                raise UnknownPoint(f"domain point {k!r} outside the transformed space")
            check_value(space, v)
    elif isinstance(value, LZero):
        for p in value.values:
            if p not in space:
                raise UnknownPoint(f"unknown point {p!r}")
    elif isinstance(value, Law):
        _common_inner(v for _, v in value.atoms)
        for _, v in value.atoms:
            check_value(space, v)
    elif isinstance(value, Product):
        for p in value.parts:
            check_value(space, p)
    elif isinstance(value, Composed):
        check_value(value.transform.apply(space), value.inner)
    else:
        raise UnknownKind(f"not a structure value: {value!r}")
