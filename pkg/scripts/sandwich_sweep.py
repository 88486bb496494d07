"""Sandwich margins w - (2v + Dist(v)) over random structured pairs, per kind.

    python3 scripts/sandwich_sweep.py trials=500 compact=true
"""

from __future__ import annotations

import json
import random
import statistics
from dataclasses import asdict, dataclass

from _config import from_argv
from ghmetrics.core import space_from_edges
from ghmetrics.ghdist import Structured, random_correspondence, sandwich_check
from ghmetrics.measuremetrics import FiniteMeasure
from ghmetrics.structures import Measure, Point, Product, Subset
from fractions import Fraction


@dataclass(frozen=True)
class Config:
    trials: int = 200
    max_points: int = 4
    seed: int = 0
    compact: bool = False


def rand_space(rng, n):
    edges = [(i, j, Fraction(rng.randint(1, 12), 4)) for i in range(n) for j in range(i + 1, n)]
    return space_from_edges(range(n), edges)


def rand_value(rng, sp, kind):
    labels = list(sp.labels)
    sub = lambda: Subset(p for p in labels if rng.random() < 0.5)
    if kind == "point":
        return Point(rng.choice(labels))
    if kind == "subset":
        return sub()
    if kind == "measure":
        return Measure(FiniteMeasure({p: Fraction(rng.randint(1, 3), 2) for p in labels if rng.random() < 0.6}))
    return Product([Point(rng.choice(labels)), sub()])


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    out = {}
    for kind in ("point", "subset", "measure", "product"):
        margins, ratios = [], []
        for _ in range(cfg.trials):
            x = rand_space(rng, rng.randint(1, cfg.max_points))
            y = rand_space(rng, rng.randint(1, cfg.max_points))
            a = Structured(x, rng.choice(x.labels), rand_value(rng, x, kind))
            b = Structured(y, rng.choice(y.labels), rand_value(rng, y, kind))
            rec = sandwich_check(a, b, [random_correspondence(x, y, rng)], compact=cfg.compact).records[0]
            margins.append(rec.margin)
            if rec.v:
                ratios.append(float(rec.w) / float(rec.v))
        out[kind] = {"min_margin": min(margins), "median_margin": statistics.median(margins),
                     "max_w_over_v": max(ratios, default=None), "violations": sum(m < -1e-9 for m in margins)}
    return {"config": asdict(cfg), "per_kind": out}


if __name__ == "__main__":
    print(json.dumps(run(from_argv(Config)), indent=2, default=str))
