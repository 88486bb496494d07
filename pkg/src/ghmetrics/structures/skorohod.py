"""Complete Skorohod J1 distance and modulus for step paths with finitely many jumps.

Time changes are searched over piecewise-linear bijections whose knots sit at the
jump times of the first path. For a fixed admissible value level ``D`` the set
of feasible knot positions is propagated interval-wise through an alignment
dynamic program; the smallest feasible log-slope bound is located by binary search
over the finite set of gap ratios it can take.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from ..core import DomainError

SLACK = 1e-12


class MalformedJumps(DomainError):
    pass


@dataclass(frozen=True)
class SkorohodResult:
    value: float
    value_term: object
    log_slope_term: float
    identity_objective: object


def _check_jumps(jumps: Sequence, horizon) -> None:
    if not jumps or jumps[0][0] != 0:
        raise MalformedJumps("a step path starts with a jump at time 0")
    for (a, _), (b, _) in zip(jumps, jumps[1:]):
        if not b > a:
            raise MalformedJumps("jump times must increase strictly")
    if jumps[-1][0] > horizon:
        raise MalformedJumps("jump beyond the horizon")


def _merge(intervals: list) -> list:
    if not intervals:
        return []
    intervals.sort()
    out = [list(intervals[0])]
    for lo, hi in intervals[1:]:
        if lo <= out[-1][1] + SLACK:
            if hi > out[-1][1]:
                out[-1][1] = hi
        else:
            out.append([lo, hi])
    return [tuple(iv) for iv in out]


def _clip(lo, hi, a, b):
    """Intersect [lo, hi] with [a, b] allowing a tiny float slack."""
    if lo > b + SLACK or hi < a - SLACK:
        return None
    lo2, hi2 = max(lo, a), min(hi, b)
    if lo2 > hi2:
        mid = (lo2 + hi2) / 2
        lo2 = hi2 = mid
    return (lo2, hi2)


def _feasible(s: list, u: list, horizon: float, allowed: list, log_bound: float) -> bool:
    m, n = len(s) - 1, len(u) - 1
    lo_slope, hi_slope = math.exp(-log_bound), math.exp(log_bound)
    upper = u[1:] + [horizon]
    if not allowed[0][0]:
        return False
    reach = [[(0.0, 0.0)]] + [[] for _ in range(n)]
    for i in range(1, m + 1):
        step = s[i] - s[i - 1]
        new = [[] for _ in range(n + 1)]
        for j in range(n + 1):
            if not allowed[i][j]:
                continue
            acc = []
            for jp in range(j, -1, -1):
                # pairs (F_{i-1}, G_k) for jp <= k < j are visited between the knots
                if jp < j and not allowed[i - 1][jp]:
                    break
                if not reach[jp]:
                    continue
                hi_bound = upper[j] if allowed[i - 1][j] or jp == j else u[j]
                for a, b in reach[jp]:
                    iv = _clip(a + lo_slope * step, b + hi_slope * step, u[j], hi_bound)
                    if iv is not None:
                        acc.append(iv)
            new[j] = _merge(acc)
        reach = new
    step = horizon - s[m]
    for j in range(n + 1):
        if not reach[j]:
            continue
        if not all(allowed[m][k] for k in range(j, n + 1)):
            continue
        for a, b in reach[j]:
            if a + lo_slope * step <= horizon + SLACK and horizon <= b + hi_slope * step + SLACK:
                return True
    return False


def _slope_candidates(s: list, u: list, horizon: float) -> list:
    """Every value the optimal log-slope bound can take.

    A tight constraint chain runs between two knots of the first path and two
    positions of the second path, so the bound is |log| of a ratio of such gaps.
    """
    import numpy as np

    fp = np.array(sorted(set(s) | {horizon}))
    gp = np.array(sorted(set(u) | {horizon}))
    fgap = (fp[None, :] - fp[:, None])[np.triu_indices(len(fp), 1)]
    ggap = (gp[None, :] - gp[:, None])[np.triu_indices(len(gp), 1)]
    logs = np.abs(np.log(ggap[:, None]) - np.log(fgap[None, :])).ravel()
    return sorted({0.0} | set(logs.tolist()))


def _min_log_slope(s, u, horizon, allowed, candidates) -> float:
    if not _feasible(s, u, horizon, allowed, candidates[-1] + 1.0):
        return math.inf
    lo, hi = 0, len(candidates) - 1
    if _feasible(s, u, horizon, allowed, candidates[hi]):
        while lo < hi:
            mid = (lo + hi) // 2
            if _feasible(s, u, horizon, allowed, candidates[mid]):
                hi = mid
            else:
                lo = mid + 1
        return candidates[lo]
    # unreachable in exact arithmetic; fall back to bisection above the last candidate
    lo_v, hi_v = candidates[-1], candidates[-1] + 1.0
    while hi_v - lo_v > 1e-13 * max(1.0, hi_v):
        mid = (lo_v + hi_v) / 2
        if _feasible(s, u, horizon, allowed, mid):
            hi_v = mid
        else:
            lo_v = mid
    return hi_v


def identity_objective(left: Sequence, right: Sequence, metric: Callable):
    """Value discrepancy of the identity time change."""
    times = sorted({t for t, _ in left} | {t for t, _ in right})
    best = 0

    def at(path, t):
        cur = path[0][1]
        for tt, v in path:
            if tt <= t:
                cur = v
        return cur

    for t in times:
        v = metric(at(left, t), at(right, t))
        if v > best:
            best = v
    return best


def skorohod_finite(left: Sequence, right: Sequence, horizon, metric: Callable) -> SkorohodResult:
    """d^{J1,T} between two step paths given as ``[(time, value), ...]`` on [0, T]."""
    horizon_q = Fraction(horizon)
    _check_jumps(left, horizon_q)
    _check_jumps(right, horizon_q)
    fv = [v for _, v in left]
    gv = [v for _, v in right]
    dist = [[metric(a, b) for b in gv] for a in fv]
    levels = sorted({x for row in dist for x in row})
    s = [float(t) for t, _ in left]
    u = [float(t) for t, _ in right]
    T = float(horizon_q)
    candidates = _slope_candidates(s, u, T)
    cache: dict = {}

    def slope(k):
        if k not in cache:
            lev = levels[k]
            allowed = [[x <= lev for x in row] for row in dist]
            cache[k] = _min_log_slope(s, u, T, allowed, candidates)
        return cache[k]

    lo, hi = 0, len(levels)
    while lo < hi:
        mid = (lo + hi) // 2
        if slope(mid) <= levels[mid]:
            hi = mid
        else:
            lo = mid + 1
    options = []
    if lo < len(levels):
        options.append((levels[lo], levels[lo], slope(lo)))
    if lo > 0 and slope(lo - 1) < math.inf:
        options.append((slope(lo - 1), levels[lo - 1], slope(lo - 1)))
    value, vterm, lterm = min(options, key=lambda o: float(o[0]))
    return SkorohodResult(float(value), vterm, lterm, identity_objective(left, right, metric))


def _truncate(path: Sequence, t) -> list:
    return [(tt, v) for tt, v in path if tt <= t]


def _gauss_legendre(fn, a: float, b: float, nodes, weights) -> float:
    half, mid = (b - a) / 2, (a + b) / 2
    return half * sum(w * fn(mid + half * x) for x, w in zip(nodes, weights))


_GL_NODES, _GL_WEIGHTS = None, None


def _gl():
    global _GL_NODES, _GL_WEIGHTS
    if _GL_NODES is None:
        import numpy as np

        x, w = np.polynomial.legendre.leggauss(8)
        _GL_NODES, _GL_WEIGHTS = [float(v) for v in x], [float(v) for v in w]
    return _GL_NODES, _GL_WEIGHTS


def _adaptive(fn, a: float, b: float, tol: float, whole: float | None = None, depth: int = 0) -> float:
    nodes, weights = _gl()
    if whole is None:
        whole = _gauss_legendre(fn, a, b, nodes, weights)
    mid = (a + b) / 2
    left = _gauss_legendre(fn, a, mid, nodes, weights)
    right = _gauss_legendre(fn, mid, b, nodes, weights)
    if abs(left + right - whole) <= tol or depth >= 14:
        return left + right
    return (_adaptive(fn, a, mid, tol / 2, left, depth + 1)
            + _adaptive(fn, mid, b, tol / 2, right, depth + 1))


def skorohod_full(left: Sequence, right: Sequence, metric: Callable, tol: float = 1e-7) -> float:
    """∫ e^{-t} (1 ∧ d^{J1,t}(F|[0,t], G|[0,t])) dt over the half line.

    Between consecutive jump times the integrand is piecewise smooth in t, so each
    piece is integrated by adaptive Gauss-Legendre; the tail is cut where e^{-t}
    drops below the tolerance.
    """
    times = sorted({float(t) for t, _ in left} | {float(t) for t, _ in right})
    fixed_pts = [Fraction(t) for t, _ in left] + [Fraction(t) for t, _ in right]
    last = max(times)
    cut = last + 30.0
    edges = times + [last + 1, last + 3, last + 7, last + 15, cut]
    edges = sorted(set(e for e in edges if e <= cut))

    def integrand(t: float) -> float:
        tq = Fraction(t)
        # the node is never a jump time, so truncation is unambiguous
        if tq in fixed_pts:
            tq += Fraction(1, 10**15)
        d = skorohod_finite(_truncate(left, tq), _truncate(right, tq), tq, metric).value
        return math.exp(-t) * min(1.0, d)

    total = 0.0
    for a, b in zip(edges, edges[1:]):
        total += _adaptive(integrand, a, b, tol / len(edges))
    return min(1.0, max(0.0, total))


def skorohod_distance(left: Sequence, right: Sequence, metric: Callable, horizon=None):
    """Finite-horizon distance when ``horizon`` is given, else the half-line integral."""
    if horizon is None:
        return skorohod_full(left, right, metric)
    return skorohod_finite(left, right, horizon, metric).value


def skorohod_modulus(path: Sequence, h, t, metric: Callable):
    """w(F, h, t): best partition of [0, t) into pieces of length >= h (last excepted)
    minimizing the largest oscillation. Exact for rational times."""
    h, t = Fraction(h), Fraction(t)
    if h <= 0 or t <= 0:
        raise ValueError("h and t must be positive")
    pts = [(Fraction(tt), v) for tt, v in path if Fraction(tt) < t]
    if not pts or pts[0][0] != 0:
        raise MalformedJumps("a step path starts with a jump at time 0")
    starts = [tt for tt, _ in pts]
    vals = [v for _, v in pts]
    m = len(vals)
    dist = [[metric(a, b) for b in vals] for a in vals]
    bounds = starts[1:] + [t]

    def feasible(level) -> bool:
        # reach_end[i]: the furthest time an interval opening in segment i may run to
        reach_end = []
        for i in range(m):
            k = i + 1
            while k < m and all(dist[p][k] <= level for p in range(i, k)):
                k += 1
            reach_end.append(starts[k] if k < m else t)
        best = [None] * m
        best[0] = Fraction(0)
        for i in range(m):
            if best[i] is None:
                continue
            if reach_end[i] == t:
                return True
            lo = best[i] + h
            if lo > reach_end[i]:
                continue
            for k in range(i + 1, m):
                if starts[k] > reach_end[i]:
                    break
                pos = max(lo, starts[k])
                if pos < bounds[k] and pos <= reach_end[i]:
                    if best[k] is None or pos < best[k]:
                        best[k] = pos
        return False

    for level in sorted({0} | {x for row in dist for x in row}):
        if feasible(level):
            return level
    raise AssertionError("the coarsest level is always feasible")
