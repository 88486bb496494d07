"""Hausdorff distance, closed neighbourhoods and the local Hausdorff metrics."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .core import RootMismatch, SpaceMismatch, UnknownPoint, closed_ball
from .rsys import INF, RestrictionSystem, exp_integral, restriction_curve


def as_subset(space, members: Iterable) -> frozenset:
    members = frozenset(members)
    for m in members:
        if m not in space:
            raise UnknownPoint(f"unknown point {m!r}")
    return members


def eps_neighborhood(space, subset, eps) -> frozenset:
    """Closed eps-neighbourhood: points within distance eps of the subset."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    subset = as_subset(space, subset)
    if not subset:
        return frozenset()
    return frozenset(p for p in space.labels if any(space.d(p, a) <= eps for a in subset))


def hausdorff(space, left, right):
    """Exact Hausdorff distance; float('inf') when exactly one side is empty."""
    left = as_subset(space, left)
    right = as_subset(space, right)
    if not left and not right:
        return Fraction(0)
    if not left or not right:
        return INF
    return hausdorff_between(left, right, space.d)


def hausdorff_between(left, right, dist):
    """Hausdorff distance between finite sets given any pairwise distance function."""
    if not left and not right:
        return Fraction(0)
    if not left or not right:
        return INF
    best = 0
    for a in left:
        near = min(dist(a, b) for b in right)
        if near > best:
            best = near
    for b in right:
        near = min(dist(a, b) for a in left)
        if near > best:
            best = near
    return best


def restrict_subset(space, subset, center, r) -> frozenset:
    return as_subset(space, subset) & closed_ball(space, center, r)


def subset_breakpoints(space, subset, center) -> list:
    return [space.d(center, a) for a in subset]


def subset_system(space) -> RestrictionSystem:
    return RestrictionSystem(
        name="subset",
        space=space,
        restrict=lambda a, x, r: restrict_subset(space, a, x, r),
        compact_metric=lambda a, b: hausdorff(space, a, b),
        breakpoints=lambda a, x: subset_breakpoints(space, a, x),
    )


def local_hausdorff_integral(space, left, x, right, y) -> float:
    """∫ e^{-r} (1 ∧ d_H(A|_x^(r), B|_y^(r))) dr without the center term."""
    left = as_subset(space, left)
    right = as_subset(space, right)
    return exp_integral(restriction_curve(subset_system(space), left, x, right, y))


def local_hausdorff(space, left: tuple, right: tuple, mode: str = "rooted"):
    """Local Hausdorff distance between ``(A, x)`` and ``(B, y)``.

    ``rooted`` requires x == y; ``product`` adds max with d(x, y).
    """
    (a, x), (b, y) = left, right
    if x not in space or y not in space:
        raise UnknownPoint(f"unknown center {x!r} or {y!r}")
    if mode == "rooted":
        if x != y:
            raise RootMismatch("rooted local Hausdorff needs a shared root")
        return local_hausdorff_integral(space, a, x, b, x)
    if mode == "product":
        return max(space.d(x, y), local_hausdorff_integral(space, a, x, b, y))
    raise ValueError(f"unknown mode {mode!r}")


def same_space(left_space, right_space) -> None:
    if left_space != right_space:
        raise SpaceMismatch("operands live in different spaces")


def quadratic_radius_system(space) -> RestrictionSystem:
    """Truncation to the closed ball of radius r**2: a deliberately broken system.

    Composition still holds but the shifted-center identity fails for small radii.
    """
    return RestrictionSystem(
        name="quadratic",
        space=space,
        restrict=lambda a, x, r: as_subset(space, a) & closed_ball(space, x, r * r),
        compact_metric=lambda a, b: hausdorff(space, a, b),
        breakpoints=lambda a, x: [max(space.d(x, p), 1) for p in a],
    )
