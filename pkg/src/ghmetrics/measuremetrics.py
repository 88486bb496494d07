"""Prohorov distance between finite measures (exact, via max-flow) and the vague metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .core import RootMismatch, UnknownPoint, ValidationError, as_rational, closed_ball
from .rsys import RestrictionSystem, exp_integral, restriction_curve


class FiniteMeasure:
    """Finitely supported nonnegative measure; zero masses are dropped."""

    __slots__ = ("weights", "_key")

    def __init__(self, weights: Mapping | Sequence = ()):
        items = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict = {}
        for label, mass in items:
            mass = as_rational(mass)
            if mass < 0:
                raise ValidationError(f"negative mass {mass} at {label!r}")
            if mass:
                acc[label] = acc.get(label, 0) + mass
        self.weights = acc
        self._key = frozenset(acc.items())

    def total(self):
        return sum(self.weights.values(), Fraction(0))

    def support(self) -> frozenset:
        return frozenset(self.weights)

    def mass(self, labels) -> Fraction:
        return sum((self.weights.get(p, 0) for p in labels), Fraction(0))

    def restrict_to(self, labels) -> "FiniteMeasure":
        return FiniteMeasure({p: m for p, m in self.weights.items() if p in labels})

    def pushforward(self, mapping) -> "FiniteMeasure":
        out: dict = {}
        for p, m in self.weights.items():
            q = mapping[p]
            out[q] = out.get(q, 0) + m
        return FiniteMeasure(out)

    def items(self) -> list:
        return sorted(self.weights.items(), key=lambda kv: repr(kv[0]))

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteMeasure) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        body = ", ".join(f"{p!r}: {m}" for p, m in self.items())
        return f"FiniteMeasure({{{body}}})"


def check_measure(space, measure: FiniteMeasure) -> None:
    for p in measure.weights:
        if p not in space:
            raise UnknownPoint(f"measure charges unknown point {p!r}")


@dataclass(frozen=True)
class ProhorovResult:
    value: object
    witness: dict = field(default_factory=dict)


def _deficit_nx(left: list, right: list, close: Callable) -> tuple:
    total = sum((m for _, m in left), Fraction(0))
    graph = nx.DiGraph()
    graph.add_node("s")
    graph.add_node("t")
    for i, (_, m) in enumerate(left):
        graph.add_edge("s", ("a", i), capacity=m)
    for j, (_, m) in enumerate(right):
        graph.add_edge(("b", j), "t", capacity=m)
    for i in range(len(left)):
        for j in range(len(right)):
            if close(i, j):
                graph.add_edge(("a", i), ("b", j))
    cut, (src_side, _) = nx.minimum_cut(graph, "s", "t")
    chosen = tuple(sorted(n[1] for n in src_side if isinstance(n, tuple) and n[0] == "a"))
    return total - cut, chosen


def _deficit(left: list, right: list, close: Callable) -> tuple:
    """max_A [left(A) - right(A^eps)] where ``close(i, j)`` says d <= eps.

    Max-flow min-cut on source -> left atoms -> right atoms -> sink; returns the
    deficit and a maximizing set of left atom indices. Masses are scaled to
    integers so the flow is exact; huge denominators fall back to networkx.
    """
    if not left:
        return Fraction(0), ()
    masses = [m for _, m in left] + [m for _, m in right]
    scale = math.lcm(*(m.denominator for m in masses))
    total = sum((m for _, m in left), Fraction(0))
    big = int(total * scale) + 1
    if big >= 2**31 - 1:
        return _deficit_nx(left, right, close)
    nl, nr = len(left), len(right)
    sink = nl + nr + 1
    cap = np.zeros((sink + 1, sink + 1), dtype=np.int32)
    for i, (_, m) in enumerate(left):
        cap[0, 1 + i] = int(m * scale)
    for j, (_, m) in enumerate(right):
        cap[1 + nl + j, sink] = int(m * scale)
    for i in range(nl):
        for j in range(nr):
            if close(i, j):
                cap[1 + i, 1 + nl + j] = big
    res = maximum_flow(csr_matrix(cap), 0, sink)
    flow = (res.flow if hasattr(res, "flow") else res.residual).toarray()
    # source side of a minimum cut: reachable in the residual graph
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for v in range(sink + 1):
            if v not in seen and cap[u, v] - flow[u, v] > 0:
                seen.add(v)
                stack.append(v)
    chosen = tuple(i for i in range(nl) if 1 + i in seen)
    return total - Fraction(int(res.flow_value), scale), chosen


def prohorov_atoms(left: list, right: list, cross: Callable) -> ProhorovResult:
    """Prohorov distance between two atomic measures.

    ``left`` and ``right`` are lists of ``(key, mass)``; ``cross(i, j)`` is the
    distance between the i-th left atom and the j-th right atom. Only these cross
    distances matter because a maximizing set can be taken inside the support.
    """
    cache: dict = {}
    dists = sorted({Fraction(0)} | {cross(i, j) for i in range(len(left)) for j in range(len(right))})
    dmat = [[cross(i, j) for j in range(len(right))] for i in range(len(left))]

    def slack(k):
        if k not in cache:
            eps = dists[k]
            f, a_set = _deficit(left, right, lambda i, j: dmat[i][j] <= eps)
            g, b_set = _deficit(right, left, lambda j, i: dmat[i][j] <= eps)
            cache[k] = (max(f, g), f, g, a_set, b_set)
        return cache[k][0]

    # slack(k) is nonincreasing, dists increasing: first k with slack <= dist
    lo, hi = 0, len(dists)
    while lo < hi:
        mid = (lo + hi) // 2
        if slack(mid) <= dists[mid]:
            hi = mid
        else:
            lo = mid + 1
    candidates = []
    if lo < len(dists):
        candidates.append((dists[lo], lo))
    if lo > 0:
        candidates.append((slack(lo - 1), lo - 1))
    value, k = min(candidates, key=lambda t: (t[0], t[1]))
    _, f, g, a_set, b_set = cache[k]
    witness = {
        "interval_start": dists[k],
        "left_deficit": f,
        "right_deficit": g,
        "binding_left_atoms": [left[i][0] for i in a_set] if f >= g else [],
        "binding_right_atoms": [right[j][0] for j in b_set] if g > f else [],
    }
    return ProhorovResult(value, witness)


def prohorov(space, mu: FiniteMeasure, nu: FiniteMeasure) -> ProhorovResult:
    """Exact Prohorov distance, masses not normalized."""
    check_measure(space, mu)
    check_measure(space, nu)
    if mu == nu:
        return ProhorovResult(Fraction(0), {"identical": True})
    left, right = mu.items(), nu.items()
    return prohorov_atoms(left, right, lambda i, j: space.d(left[i][0], right[j][0]))


def prohorov_value(space, mu, nu):
    return prohorov(space, mu, nu).value


def restrict_measure(space, mu: FiniteMeasure, center, r) -> FiniteMeasure:
    check_measure(space, mu)
    return mu.restrict_to(closed_ball(space, center, r))


def measure_system(space) -> RestrictionSystem:
    return RestrictionSystem(
        name="measure",
        space=space,
        restrict=lambda m, x, r: restrict_measure(space, m, x, r),
        compact_metric=lambda a, b: prohorov_value(space, a, b),
        breakpoints=lambda m, x: [space.d(x, p) for p in m.weights],
    )


def vague_integral(space, mu, x, nu, y) -> float:
    return exp_integral(restriction_curve(measure_system(space), mu, x, nu, y))


def vague(space, left: tuple, right: tuple, mode: str = "rooted"):
    """Vague distance between ``(mu, x)`` and ``(nu, y)``; product mode adds d(x, y)."""
    (mu, x), (nu, y) = left, right
    check_measure(space, mu)
    check_measure(space, nu)
    if x not in space or y not in space:
        raise UnknownPoint(f"unknown center {x!r} or {y!r}")
    if mode == "rooted":
        if x != y:
            raise RootMismatch("rooted vague metric needs a shared root")
        return vague_integral(space, mu, x, nu, x)
    if mode == "product":
        return max(space.d(x, y), vague_integral(space, mu, x, nu, y))
    raise ValueError(f"unknown mode {mode!r}")
