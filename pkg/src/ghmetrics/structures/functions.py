"""Functions on variable closed domains of a transformed space, compared through their graphs."""

from __future__ import annotations

from typing import Callable, Sequence

from ..core import UnknownPoint
from ..rsys import PiecewiseConstantCurve, RestrictionSystem, exp_integral
from ..setmetrics import hausdorff_between
from .values import Transform, VarFunction

# inner(v, x, w, y): distance between inner values v at basepoint x and w at basepoint y
InnerMetric = Callable


def graph_of(f: VarFunction) -> frozenset:
    """The set of (domain point, value) pairs."""
    return frozenset(f.graph)


def graph_point_distance(psi, inner: InnerMetric, x, y) -> Callable:
    """Max product metric on Ψ(X) × values, inner values compared at (x, y)."""

    def dist(p, q):
        (alpha, v), (beta, w) = p, q
        return max(psi.d(alpha, beta), inner(v, x, w, y))

    return dist


def graph_hausdorff(space, f: VarFunction, g: VarFunction, inner: InnerMetric, x=None, y=None):
    """Compact-level distance: Hausdorff distance between the two graphs."""
    psi = f.transform.apply(space)
    if x is None:
        x = y
    if y is None:
        y = x
    return hausdorff_between(graph_of(f), graph_of(g), graph_point_distance(psi, inner, x, y))


def restrict_function(space, f: VarFunction, center, r) -> VarFunction:
    """Restrict the domain of ``f`` to the closed ball of radius r around ``center`` in Ψ(X)."""
    psi = f.transform.apply(space)
    if center not in psi:
        raise UnknownPoint(f"unknown center {center!r} of the transformed space")
    return VarFunction(f.transform, [(k, v) for k, v in f.graph if psi.d(center, k) <= r])


def function_breakpoints(space, f: VarFunction, center) -> list:
    psi = f.transform.apply(space)
    return [psi.d(center, k) for k, _ in f.graph]


def function_system(space, transform: Transform, inner: InnerMetric, basepoint) -> RestrictionSystem:
    """Restriction system on Ψ(X); compact metric is graph Hausdorff with inner values at ``basepoint``."""
    return RestrictionSystem(
        name="function",
        space=transform.apply(space),
        restrict=lambda f, c, r: restrict_function(space, f, c, r),
        compact_metric=lambda f, g: graph_hausdorff(space, f, g, inner, basepoint, basepoint),
        breakpoints=lambda f, c: function_breakpoints(space, f, c),
    )


def var_function_integral(space, f: VarFunction, x, g: VarFunction, y, inner: InnerMetric) -> float:
    """∫ e^{-r} (1 ∧ graph Hausdorff of the restrictions around the rooted images of x, y) dr."""
    psi = f.transform.apply(space)
    cx, cy = f.transform.root_of(x), g.transform.root_of(y)
    dist = graph_point_distance(psi, inner, x, y)
    radii = [psi.d(cx, k) for k, _ in f.graph] + [psi.d(cy, k) for k, _ in g.graph]

    def at(r):
        a = [(k, v) for k, v in f.graph if psi.d(cx, k) <= r]
        b = [(k, v) for k, v in g.graph if psi.d(cy, k) <= r]
        return hausdorff_between(a, b, dist)

    return exp_integral(PiecewiseConstantCurve.from_samples(radii, at))


def var_function_distance(space, f: VarFunction, x, g: VarFunction, y, inner: InnerMetric):
    psi = f.transform.apply(space)
    centers = psi.d(f.transform.root_of(x), g.transform.root_of(y))
    return max(centers, var_function_integral(space, f, x, g, y, inner))


def precompactness_triple(space, family: Sequence[VarFunction], root, inner: InnerMetric,
                          radius, delta) -> dict:
    """Finite-family proxies for the three precompactness conditions.

    Within the ball of ``radius`` around the rooted image of ``root``: the largest
    domain extent, the largest value spread (inner distance to the root value
    profile) and the modulus of continuity at scale ``delta``.
    """
    extent = 0
    spread = 0
    modulus = 0
    for f in family:
        psi = f.transform.apply(space)
        center = f.transform.root_of(root)
        local = [(k, v) for k, v in f.graph if psi.d(center, k) <= radius]
        for k, v in local:
            extent = max(extent, psi.d(center, k))
        for i, (k, v) in enumerate(local):
            for k2, v2 in local[i:]:
                gap = inner(v, root, v2, root)
                spread = max(spread, gap)
                if psi.d(k, k2) <= delta:
                    modulus = max(modulus, gap)
    return {"domain_extent": extent, "value_spread": spread, "modulus": modulus,
            "radius": radius, "delta": delta}
