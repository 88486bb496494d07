"""Finite metric spaces, rooted spaces, balls, correspondences and gluings."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

Label = Hashable


class GHError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(GHError):
    """Input data violates a structural or metric requirement."""

    def __init__(self, message: str, diagnostics: Sequence["Diagnostic"] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class DomainError(GHError):
    """A computation was requested outside its domain of definition."""


class UnknownPoint(DomainError):
    pass


class InvalidCorrespondence(DomainError):
    pass


class MissingRoot(DomainError):
    pass


class SpaceMismatch(DomainError):
    pass


class RootMismatch(DomainError):
    pass


class MetricAxiomFailure(GHError):
    """Internal assertion: a constructed space is not a metric space."""


@dataclass(frozen=True)
class ToleranceConfig:
    eq_tol: float = 1e-9

    def __post_init__(self):
        if self.eq_tol < 0:
            raise ValueError("eq_tol must be nonnegative")


DEFAULT_TOLERANCE = ToleranceConfig()


def as_rational(value) -> Fraction:
    """Convert ints, Fractions, Decimals, decimal strings and floats to an exact Fraction.

    Floats go through their shortest decimal representation, so ``0.1`` becomes 1/10.
    """
    if isinstance(value, bool):
        raise ValidationError(f"boolean is not a number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValidationError(f"non-finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse number {value!r}") from exc
    raise ValidationError(f"unsupported numeric value {value!r}")


@dataclass(frozen=True)
class Diagnostic:
    code: str
    indices: tuple
    message: str


class FiniteMetricSpace:
    """Labelled points with an exact distance matrix.

    Instances are immutable. Construct through :func:`validate_space` unless the
    matrix is already known to be a metric.
    """

    __slots__ = ("labels", "dist", "_index", "_hash")

    def __init__(self, labels: Sequence[Label], dist: Sequence[Sequence]):
        self.labels = tuple(labels)
        self.dist = tuple(tuple(row) for row in dist)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._hash = None

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label) -> bool:
        try:
            return label in self._index
        except TypeError:
            return False

    def __iter__(self):
        return iter(self.labels)

    def index(self, label) -> int:
        try:
            return self._index[label]
        except (KeyError, TypeError):
            raise UnknownPoint(f"unknown point {label!r}") from None

    def d(self, a, b):
        return self.dist[self.index(a)][self.index(b)]

    def diameter(self):
        return max((v for row in self.dist for v in row), default=Fraction(0))

    def distances_from(self, center) -> tuple:
        return self.dist[self.index(center)]

    def subspace(self, members: Iterable[Label]) -> "FiniteMetricSpace":
        keep = sorted({self.index(m) for m in members})
        return FiniteMetricSpace(
            [self.labels[i] for i in keep],
            [[self.dist[i][j] for j in keep] for i in keep],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and self.dist == other.dist

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.labels, self.dist))
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(labels={list(self.labels)!r})"


def check_space(matrix: Sequence[Sequence], labels: Sequence[Label] | None = None) -> list[Diagnostic]:
    """Return every violated metric-space requirement with an index witness."""
    diags: list[Diagnostic] = []
    n = len(matrix)
    if labels is not None:
        if len(labels) != n:
            diags.append(Diagnostic("NonSquare", (len(labels), n), "label count differs from matrix size"))
            return diags
        seen = {}
        for i, lab in enumerate(labels):
            if lab in seen:
                diags.append(Diagnostic("DuplicateLabel", (seen[lab], i), f"label {lab!r} repeated"))
            seen.setdefault(lab, i)
    if n == 0:
        diags.append(Diagnostic("EmptySpace", (), "a metric space needs at least one point"))
        return diags
    for i, row in enumerate(matrix):
        if len(row) != n:
            diags.append(Diagnostic("NonSquare", (i,), f"row {i} has length {len(row)}, expected {n}"))
    if diags:
        return diags
    try:
        m = [[as_rational(v) for v in row] for row in matrix]
    except ValidationError as exc:
        return [Diagnostic("ParseError", (), str(exc))]
    for i in range(n):
        if m[i][i] != 0:
            diags.append(Diagnostic("NonZeroDiagonal", (i, i), f"d[{i}][{i}] = {m[i][i]}"))
        for j in range(n):
            if m[i][j] < 0:
                diags.append(Diagnostic("NegativeEntry", (i, j), f"d[{i}][{j}] = {m[i][j]} < 0"))
            if i < j:
                if m[i][j] != m[j][i]:
                    diags.append(Diagnostic("AsymmetricEntry", (i, j), f"{m[i][j]} != {m[j][i]}"))
                if m[i][j] == 0 or m[j][i] == 0:
                    diags.append(Diagnostic("ZeroOffDiagonal", (i, j), "distinct points at distance 0"))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if m[i][k] > m[i][j] + m[j][k]:
                    diags.append(Diagnostic(
                        "TriangleViolation", (i, j, k),
                        f"d[{i}][{k}] = {m[i][k]} > {m[i][j]} + {m[j][k]}",
                    ))
    return diags


def validate_space(matrix: Sequence[Sequence], labels: Sequence[Label] | None = None) -> FiniteMetricSpace:
    if labels is None:
        labels = list(range(len(matrix)))
    diags = check_space(matrix, labels)
    if diags:
        raise ValidationError(f"{len(diags)} metric violation(s), first: {diags[0].message}", diags)
    return FiniteMetricSpace(labels, [[as_rational(v) for v in row] for row in matrix])


def space_from_edges(labels: Sequence[Label], edges: Iterable[tuple]) -> FiniteMetricSpace:
    """Shortest-path completion of a weighted undirected graph, then validation."""
    labels = list(labels)
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    inf = None
    m = [[Fraction(0) if i == j else inf for j in range(n)] for i in range(n)]
    for a, b, w in edges:
        if a not in idx or b not in idx:
            raise ValidationError(f"edge references unknown point {a!r} or {b!r}")
        w = as_rational(w)
        i, j = idx[a], idx[b]
        if m[i][j] is None or w < m[i][j]:
            m[i][j] = m[j][i] = w
    for k in range(n):
        for i in range(n):
            if m[i][k] is None:
                continue
            for j in range(n):
                if m[k][j] is None:
                    continue
                cand = m[i][k] + m[k][j]
                if m[i][j] is None or cand < m[i][j]:
                    m[i][j] = cand
    for i in range(n):
        for j in range(n):
            if m[i][j] is None:
                raise ValidationError(
                    "edge list does not connect all points",
                    [Diagnostic("Disconnected", (i, j), f"no path between {labels[i]!r} and {labels[j]!r}")],
                )
    return validate_space(m, labels)


@dataclass(frozen=True)
class RootedSpace:
    space: FiniteMetricSpace
    root: Label

    def __post_init__(self):
        if self.root not in self.space:
            raise MissingRoot(f"root {self.root!r} is not a point of the space")


def closed_ball(space, center, r) -> frozenset:
    """Points at distance at most ``r`` from ``center``."""
    if center not in space:
        raise UnknownPoint(f"unknown point {center!r}")
    return frozenset(p for p in space.labels if space.d(center, p) <= r)


def restrict_space(rooted: RootedSpace, r) -> RootedSpace:
    if r < 0:
        raise ValueError("radius must be nonnegative")
    ball = closed_ball(rooted.space, rooted.root, r)
    return RootedSpace(rooted.space.subspace(ball), rooted.root)


@dataclass(frozen=True)
class Correspondence:
    pairs: frozenset

    def __init__(self, pairs: Iterable[tuple]):
        object.__setattr__(self, "pairs", frozenset((a, b) for a, b in pairs))

    def transpose(self) -> "Correspondence":
        return Correspondence((b, a) for a, b in self.pairs)

    def sorted_pairs(self) -> list:
        return sorted(self.pairs, key=repr)

    def __len__(self) -> int:
        return len(self.pairs)


def validate_correspondence(corr: Correspondence, left, right) -> None:
    lefts = {a for a, _ in corr.pairs}
    rights = {b for _, b in corr.pairs}
    for a in lefts:
        if a not in left:
            raise InvalidCorrespondence(f"left point {a!r} not in the left space")
    for b in rights:
        if b not in right:
            raise InvalidCorrespondence(f"right point {b!r} not in the right space")
    missing_l = [p for p in left.labels if p not in lefts]
    missing_r = [p for p in right.labels if p not in rights]
    if missing_l or missing_r:
        raise InvalidCorrespondence(
            f"uncovered points: left {missing_l!r}, right {missing_r!r}"
        )


def diagonal_correspondence(left, right) -> Correspondence:
    """Pair points by position; the shorter side's last point absorbs the rest."""
    n, m = len(left.labels), len(right.labels)
    k = max(n, m)
    return Correspondence(
        (left.labels[min(i, n - 1)], right.labels[min(i, m - 1)]) for i in range(k)
    )


def distortion(corr: Correspondence, left, right) -> Fraction:
    """Largest mismatch |d_X(x,x') - d_Y(y,y')| over all pairs of pairs."""
    validate_correspondence(corr, left, right)
    pairs = corr.sorted_pairs()
    best = Fraction(0)
    for i, (x, y) in enumerate(pairs):
        for x2, y2 in pairs[i + 1:]:
            gap = abs(left.d(x, x2) - right.d(y, y2))
            if gap > best:
                best = gap
    return best


@dataclass(frozen=True)
class Gluing:
    """A metric space containing isometric copies of two spaces."""

    space: FiniteMetricSpace
    left: Mapping
    right: Mapping
    mode: str
    root: Label | None = None
    params: dict = field(default_factory=dict)

    def cross(self, x, y):
        return self.space.d(self.left[x], self.right[y])


def _collapse(labels: list, m: list) -> tuple[FiniteMetricSpace, dict]:
    """Quotient a pseudometric by its zero-distance classes."""
    rep: dict = {}
    keep: list[int] = []
    for i in range(len(labels)):
        for k in keep:
            if m[i][k] == 0:
                rep[labels[i]] = labels[k]
                break
        else:
            keep.append(i)
            rep[labels[i]] = labels[i]
    space = FiniteMetricSpace([labels[i] for i in keep], [[m[i][j] for j in keep] for i in keep])
    return space, rep


def _disjoint_union(left, right, cross) -> tuple[list, list]:
    labels = [("L", x) for x in left.labels] + [("R", y) for y in right.labels]
    n = len(left.labels)
    m = [[None] * len(labels) for _ in labels]
    for i, x in enumerate(left.labels):
        for j, x2 in enumerate(left.labels):
            m[i][j] = left.d(x, x2)
    for i, y in enumerate(right.labels):
        for j, y2 in enumerate(right.labels):
            m[n + i][n + j] = right.d(y, y2)
    for i, x in enumerate(left.labels):
        for j, y in enumerate(right.labels):
            m[i][n + j] = m[n + j][i] = cross(x, y)
    return labels, m


def _identify(m: list, p: int, q: int) -> list:
    size = len(m)
    out = [[None] * size for _ in range(size)]
    for a in range(size):
        for b in range(size):
            out[a][b] = min(m[a][b], m[a][p] + m[q][b], m[a][q] + m[p][b])
    return out


def _finish(left, right, labels, m, mode, root_left=None, params=None) -> Gluing:
    space, rep = _collapse(labels, m)
    lmap = {x: rep[("L", x)] for x in left.labels}
    rmap = {y: rep[("R", y)] for y in right.labels}
    for src, emb in ((left, lmap), (right, rmap)):
        for a in src.labels:
            for b in src.labels:
                if space.d(emb[a], emb[b]) != src.d(a, b):
                    raise MetricAxiomFailure(f"{mode} gluing is not isometric on {a!r}, {b!r}")
    diags = check_space(space.dist, space.labels)
    if diags:
        raise MetricAxiomFailure(f"{mode} gluing violates metric axioms: {diags[0].message}")
    root = lmap[root_left] if root_left is not None else None
    return Gluing(space, lmap, rmap, mode, root, dict(params or {}))


def glue(left, right, mode: str, corr: Correspondence | None = None,
         root_left=None, root_right=None, base: Gluing | None = None,
         shift=None) -> Gluing:
    """Build a common metric space for ``left`` and ``right``.

    Modes:
      ``correspondence``: cross distance min over pairs of d(x,x') + dis/2 + d(y',y).
      ``root_sum``: cross distance d(x, root_left) + d(root_right, y); roots coincide.
      ``root_identify_shift``: cross distance of a base gluing (or the correspondence
      gluing of ``corr``) plus the base distance between the roots, then the roots are
      identified.
      ``shift``: cross distance of ``base`` plus a constant ``shift`` >= 0.
    """
    if mode == "correspondence":
        if corr is None:
            raise InvalidCorrespondence("correspondence gluing needs a correspondence")
        half = distortion(corr, left, right) / 2
        pairs = corr.sorted_pairs()

        def cross(x, y):
            return min(left.d(x, a) + half + right.d(b, y) for a, b in pairs)

        labels, m = _disjoint_union(left, right, cross)
        return _finish(left, right, labels, m, mode, params={"half_distortion": half})

    if mode in ("root_sum", "root_identify_shift"):
        if root_left is None or root_right is None:
            raise MissingRoot(f"{mode} gluing needs both roots")
        if root_left not in left or root_right not in right:
            raise MissingRoot("root not present in its space")

    if mode == "root_sum":
        def cross(x, y):
            return left.d(x, root_left) + right.d(root_right, y)

        labels, m = _disjoint_union(left, right, cross)
        return _finish(left, right, labels, m, mode, root_left)

    if mode == "root_identify_shift":
        if base is None:
            base = glue(left, right, "correspondence", corr=corr)
        delta = base.cross(root_left, root_right)

        def cross(x, y):
            return base.cross(x, y) + delta

        labels, m = _disjoint_union(left, right, cross)
        p = left.labels.index(root_left)
        q = len(left.labels) + right.labels.index(root_right)
        m = _identify(m, p, q)
        return _finish(left, right, labels, m, mode, root_left, params={"root_shift": delta})

    if mode == "shift":
        if base is None or shift is None or shift < 0:
            raise ValueError("shift gluing needs a base gluing and a nonnegative shift")

        def cross(x, y):
            return base.cross(x, y) + shift

        labels, m = _disjoint_union(left, right, cross)
        return _finish(left, right, labels, m, mode, params={"shift": shift})

    raise ValueError(f"unknown gluing mode {mode!r}")
