"""Metric entropy: covering numbers, convergence certificates, precompactness diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import DomainError, RootedSpace, closed_ball
from .ghdist import EXACT_GH_LIMIT, gh_distance


class EmptySet(DomainError):
    pass


class NotConvergent(DomainError):
    pass


@dataclass(frozen=True)
class Covering:
    count: int
    centers: tuple
    exact: bool


def _members(space, subset) -> list:
    pts = list(space.labels) if subset is None else sorted(set(subset), key=repr)
    for p in pts:
        if p not in space:
            raise DomainError(f"unknown point {p!r}")
    if not pts:
        raise EmptySet("covering number of the empty set")
    return pts


def _ball_masks(space, pts: list, eps) -> list:
    masks = []
    for c in pts:
        m = 0
        for i, p in enumerate(pts):
            if space.d(c, p) <= eps:
                m |= 1 << i
        masks.append(m)
    return masks


def _greedy(masks: list, full: int) -> list:
    covered, chosen = 0, []
    while covered != full:
        k = max(range(len(masks)), key=lambda i: (bin(masks[i] & ~covered).count("1"), -i))
        chosen.append(k)
        covered |= masks[k]
    return chosen


def _exact(masks: list, full: int) -> list:
    n = len(masks)
    # dominance: drop balls contained in another ball (keep the first of equal ones)
    keep = [i for i in range(n)
            if not any(j != i and masks[i] | masks[j] == masks[j] and (masks[i] != masks[j] or j < i)
                       for j in range(n))]
    best = _greedy(masks, full)
    biggest = max(bin(masks[i]).count("1") for i in keep)
    covers = [[i for i in keep if masks[i] >> e & 1] for e in range(n)]

    def search(covered: int, chosen: list):
        nonlocal best
        left = bin(full & ~covered).count("1")
        if left == 0:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + -(-left // biggest) >= len(best):
            return
        # branch on the uncovered point with the fewest covering balls
        e = min((e for e in range(n) if not covered >> e & 1), key=lambda e: len(covers[e]))
        for i in sorted(covers[e], key=lambda i: -bin(masks[i] & ~covered).count("1")):
            chosen.append(i)
            search(covered | masks[i], chosen)
            chosen.pop()

    search(0, [])
    return best


def covering_number(space, eps, mode: str = "exact", subset=None) -> Covering:
    """Fewest closed eps-balls centered in the set that cover it."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    pts = _members(space, subset)
    masks = _ball_masks(space, pts, eps)
    full = (1 << len(pts)) - 1
    if mode == "exact":
        idx = _exact(masks, full)
    elif mode == "greedy":
        idx = _greedy(masks, full)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Covering(len(idx), tuple(pts[i] for i in sorted(idx)), mode == "exact")


@dataclass
class EntropyProfile:
    space_id: str
    entries: list = field(default_factory=list)

    def counts(self) -> dict:
        return {eps: n for eps, n, _ in self.entries}


def entropy_profile(space, eps_grid: Sequence, mode: str = "exact", subset=None,
                    space_id: str = "") -> EntropyProfile:
    prof = EntropyProfile(space_id)
    for eps in sorted(eps_grid):
        cov = covering_number(space, eps, mode, subset)
        prof.entries.append((eps, cov.count, cov.centers))
    return prof


def jump_points(space) -> list:
    """Where N(space, .) can change: the positive pairwise distances."""
    return sorted({space.d(a, b) for a in space.labels for b in space.labels if a != b})


def resolution_margin(space, eps):
    """Room around eps on which N(space, .) is constant.

    N is right-continuous with jumps only at pairwise distances, so it is constant
    on [eps - below, eps + above) where below reaches the last jump <= eps and above
    the first jump > eps. Returns (below, above).
    """
    jumps = jump_points(space)
    below = eps - max([Fraction(0)] + [j for j in jumps if j <= eps])
    above = min([j for j in jumps if j > eps], default=None)
    return below, (None if above is None else above - eps)


def _gh_value(member, limit, corr=None):
    if corr is not None:
        return gh_distance(member, limit, mode="upper", corr=corr).value
    if len(member) * len(limit) > EXACT_GH_LIMIT:
        raise DomainError("supply a correspondence for members too large for the exact GH solver")
    return gh_distance(member, limit).value


@dataclass
class ConvergenceReport:
    gh_values: list
    rows: list
    passed: bool

    def summary(self) -> dict:
        return {"gh_values": [str(g) for g in self.gh_values], "rows": self.rows, "passed": self.passed}


def entropy_convergence_check(sequence: Sequence, limit, eps_grid: Sequence, correspondences=None,
                              threshold=Fraction(1, 10)) -> ConvergenceReport:
    """Compare N(K, eps) with N(K_n, eps) along a convergent sequence.

    Each member with GH value g satisfies N(K, eps + 2g) <= N(K_n, eps); this finite
    form of the liminf inequality is checked for every member. On the tail (second
    half) the liminf proxy is the tail minimum. Equality is certified at eps where
    N(K, .) is constant on [eps - 2g, eps + 2g] for every tail member.
    """
    if not sequence:
        raise ValueError("empty sequence")
    corrs = correspondences or [None] * len(sequence)
    gh = [_gh_value(m, limit, c) for m, c in zip(sequence, corrs)]
    if gh[-1] > threshold:
        raise NotConvergent(f"last GH value {gh[-1]} exceeds the threshold {threshold}")
    tail = range(len(sequence) // 2, len(sequence))
    rows = []
    ok = True
    for eps in sorted(eps_grid):
        eps = Fraction(eps)
        n_lim = covering_number(limit, eps).count
        per_member = [covering_number(m, eps).count for m in sequence]
        finite_ok = all(covering_number(limit, eps + 2 * g).count <= n for g, n in zip(gh, per_member))
        liminf = min(per_member[k] for k in tail)
        below, above = resolution_margin(limit, eps)
        gmax = max(gh[k] for k in tail)
        resolved = 2 * gmax <= below and (above is None or 2 * gmax < above)
        row = {"eps": str(eps), "limit": n_lim, "liminf_tail": liminf, "finite_inequality": finite_ok,
               "resolved": resolved}
        if resolved:
            row["liminf_inequality"] = n_lim <= liminf
            row["equality"] = all(per_member[k] == n_lim for k in tail)
            ok &= row["liminf_inequality"] and row["equality"]
        ok &= finite_ok
        rows.append(row)
    return ConvergenceReport(gh, rows, ok)


@dataclass
class PrecompactnessReport:
    table: dict
    verdict: str
    witnesses: list

    def summary(self) -> dict:
        return {
            "verdict": self.verdict,
            "table": {f"r={r},eps={e}": v for (r, e), v in self.table.items()},
            "witnesses": self.witnesses,
        }


def precompactness_diagnostic(family: Sequence[RootedSpace], r_grid: Sequence,
                              eps_grid: Sequence) -> PrecompactnessReport:
    """sup over the family of N(ball of radius r around the root, eps) on the grids.

    The family is read as a parameterized sequence: blow-up is flagged at (r, eps)
    when the counts strictly increase over the second half of the family, so the
    supremum is attained only by the last member.
    """
    if not family:
        raise ValueError("empty family")
    table, witnesses = {}, []
    tail_start = len(family) // 2
    for r in r_grid:
        for eps in eps_grid:
            counts = [covering_number(m.space, eps, subset=closed_ball(m.space, m.root, r)).count
                      for m in family]
            top = max(counts)
            table[(r, eps)] = {"sup": top, "argmax": counts.index(top), "counts": counts}
            tail = counts[tail_start:]
            growing = len(tail) >= 2 and all(b > a for a, b in zip(tail, tail[1:]))
            if growing:
                witnesses.append({"r": str(r), "eps": str(eps), "alpha": len(family) - 1, "counts": counts})
    verdict = "blow-up" if witnesses else "bounded-entropy (precompactness-consistent)"
    return PrecompactnessReport(table, verdict, witnesses)
