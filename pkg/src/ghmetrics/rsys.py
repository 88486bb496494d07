"""Restriction systems: exact exponential integration of truncation curves,
axiom checks, and the induced local metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

from .core import DomainError


class MalformedCurve(DomainError):
    pass


class AxiomFailure(DomainError):
    pass


INF = float("inf")


def clamp_unit(value):
    """1 ∧ value, keeping Fractions exact."""
    if value == INF or value >= 1:
        return 1
    return value


@dataclass(frozen=True)
class PiecewiseConstantCurve:
    """Right-continuous step function on [0, inf).

    ``values[0]`` holds on [0, breakpoints[0]), ``values[i]`` on
    [breakpoints[i-1], breakpoints[i]) and ``values[-1]`` from the last breakpoint on.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bps, vals = tuple(self.breakpoints), tuple(self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(bps) + 1:
            raise MalformedCurve("need exactly one more value than breakpoints")
        prev = 0
        for b in bps:
            if not b > prev:
                raise MalformedCurve("breakpoints must be positive and strictly increasing")
            prev = b
        for v in vals:
            if v != v or v < 0:
                raise MalformedCurve(f"curve value {v!r} is not a nonnegative extended real")

    def __call__(self, r):
        lo, hi = 0, len(self.breakpoints)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.breakpoints[mid] <= r:
                lo = mid + 1
            else:
                hi = mid
        return self.values[lo]

    @classmethod
    def from_samples(cls, radii: Sequence, evaluate: Callable) -> "PiecewiseConstantCurve":
        """Evaluate at 0 and at each positive candidate radius (left endpoints)."""
        pts = sorted({r for r in radii if r > 0})
        vals = [evaluate(Fraction(0))] + [evaluate(r) for r in pts]
        # merge equal neighbours so the representation is canonical
        bps_out, vals_out = [], [vals[0]]
        for r, v in zip(pts, vals[1:]):
            if v != vals_out[-1]:
                bps_out.append(r)
                vals_out.append(v)
        return cls(tuple(bps_out), tuple(vals_out))


def exp_integral(curve: PiecewiseConstantCurve) -> float:
    """∫_0^∞ e^{-r} (1 ∧ curve(r)) dr evaluated piece by piece in closed form."""
    total = 0.0
    left = 0.0
    edges = [float(b) for b in curve.breakpoints]
    for i, v in enumerate(curve.values):
        c = float(clamp_unit(v))
        if i < len(edges):
            right = edges[i]
            if c:
                total += c * math.exp(-left) * -math.expm1(-(right - left))
            left = right
        elif c:
            total += c * math.exp(-left)
    return min(max(total, 0.0), 1.0)


@dataclass(frozen=True)
class RestrictionSystem:
    """A truncation family R_x^(r) together with its compact-level metric.

    ``breakpoints(obj, center)`` must list every radius at which
    ``restrict(obj, center, r)`` can change; beyond the largest one it is constant.
    """

    name: str
    space: object
    restrict: Callable
    compact_metric: Callable
    breakpoints: Callable
    equal: Callable = field(default=lambda a, b: a == b)


def restriction_curve(system: RestrictionSystem, a, x, b, y) -> PiecewiseConstantCurve:
    radii = list(system.breakpoints(a, x)) + list(system.breakpoints(b, y))
    return PiecewiseConstantCurve.from_samples(
        radii,
        lambda r: system.compact_metric(system.restrict(a, x, r), system.restrict(b, y, r)),
    )


@dataclass
class AxiomReport:
    system: str
    checked: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    scope: str = "sampled objects, centers and radii only"

    def record(self, axiom: str, ok: bool, witness=None):
        self.checked[axiom] = self.checked.get(axiom, 0) + 1
        if not ok and witness is not None:
            self.failures.setdefault(axiom, []).append(witness)

    def passed(self, axiom: str | None = None) -> bool:
        if axiom is None:
            return not self.failures
        return axiom not in self.failures

    def summary(self) -> dict:
        return {
            "system": self.system,
            "scope": self.scope,
            "axioms": {
                ax: {"checks": n, "pass": ax not in self.failures,
                     "witness": repr(self.failures[ax][0]) if ax in self.failures else None}
                for ax, n in sorted(self.checked.items())
            },
        }


def check_rs_axioms(system: RestrictionSystem, centers: Sequence, radii: Sequence,
                    objects: Sequence, max_witnesses: int = 5) -> AxiomReport:
    """Check composition, separation, stabilization, shifted-center and completeness."""
    if not centers or not radii or not objects:
        raise ValueError("samples must be non-empty")
    rep = AxiomReport(system.name)
    eq = system.equal
    space = system.space
    radii = sorted(set(radii))

    def add(axiom, ok, witness):
        if not ok and len(rep.failures.get(axiom, ())) >= max_witnesses:
            rep.checked[axiom] = rep.checked.get(axiom, 0) + 1
            return
        rep.record(axiom, ok, witness)

    for a in objects:
        for x in centers:
            # RS1
            for r in radii:
                for s in radii:
                    lhs = system.restrict(system.restrict(a, x, s), x, r)
                    rhs = system.restrict(a, x, min(r, s))
                    add("RS1", eq(lhs, rhs), (a, x, r, s))
            # RS3
            bps = list(system.breakpoints(a, x))
            big = (max(bps) if bps else 0) + 1
            add("RS3", eq(system.restrict(a, x, big), a), (a, x, big))
            # RS4
            for y in centers:
                dxy = space.d(x, y)
                for s in sorted({dxy, dxy + min(radii)}):
                    for r in radii:
                        lhs = system.restrict(system.restrict(a, x, s + r), y, r)
                        rhs = system.restrict(a, y, r)
                        add("RS4", eq(lhs, rhs), (a, x, y, s, r))
            # RS5: the sequence a|^(r_1), ..., a|^(r_k) is compatible; its last
            # member restricts back to every earlier one.
            seq = [system.restrict(a, x, r) for r in radii]
            for k, r in enumerate(radii):
                for k2 in range(k, len(radii)):
                    add("RS5-compatible", eq(system.restrict(seq[k2], x, r), seq[k]), (a, x, r, radii[k2]))
            limit = seq[-1]
            ok = all(eq(system.restrict(limit, x, r), seq[k]) for k, r in enumerate(radii))
            add("RS5", ok, (a, x))
    # RS2: equal restrictions at every radius up to stabilization imply equality
    for i, a in enumerate(objects):
        for b in objects[i + 1:]:
            for x in centers:
                bps = sorted(set(system.breakpoints(a, x)) | set(system.breakpoints(b, x)) | {Fraction(0)})
                grid = bps + [bps[-1] + 1]
                same = all(eq(system.restrict(a, x, r), system.restrict(b, x, r)) for r in grid)
                if same:
                    add("RS2", eq(a, b), (a, b, x))
                else:
                    add("RS2", True, None)
    return rep


def build_local_metric(system: RestrictionSystem, policy: str = "fixed_root", root=None,
                       check: tuple | None = None) -> Callable:
    """Return the integral metric induced by a restriction system.

    ``policy='fixed_root'`` gives a callable ``(a, b)`` with both objects truncated
    around ``root``; ``policy='paired_centers'`` gives ``(a, x, b, y)`` and adds the
    center distance. ``check=(centers, radii, objects)`` runs the axiom check first
    and refuses to build over a failing system.
    """
    if check is not None:
        report = check_rs_axioms(system, *check)
        bad = [ax for ax in ("RS1", "RS2", "RS3", "RS4") if not report.passed(ax)]
        if bad:
            raise AxiomFailure(f"{system.name} fails {bad}: {report.failures[bad[0]][0]!r}")
    if policy == "fixed_root":
        if root is None:
            raise ValueError("fixed_root policy needs a root")

        def metric(a, b):
            return exp_integral(restriction_curve(system, a, root, b, root))

        return metric
    if policy == "paired_centers":
        def metric(a, x, b, y):
            return max(system.space.d(x, y), exp_integral(restriction_curve(system, a, x, b, y)))

        return metric
    raise ValueError(f"unknown basepoint policy {policy!r}")
