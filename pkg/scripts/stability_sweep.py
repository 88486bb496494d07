"""Slack needed by each structure kind when the cross distances of a gluing move by eps.

For each instance, d1 and d2 are the element-rooted distances of the pushed
values in two shifted gluings whose cross distances differ by at most eps; the
script reports the largest observed d2 - d1 next to Dist(eps).

    python3 scripts/stability_sweep.py instances=100 eps=0,1/10,1,10
"""

from __future__ import annotations

import json
import random
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from _config import from_argv
from gen import KINDS, rand_prob, rand_q, rand_space, rand_value
from ghmetrics.core import glue
from ghmetrics.ghdist import random_correspondence
from ghmetrics.structures import distortion_of, er_distance, pushforward


@dataclass(frozen=True)
class Config:
    instances: int = 100
    eps: tuple = (Fraction(0), Fraction(1, 10), Fraction(1), Fraction(10))
    seed: int = 0


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    table = {}
    for kind in KINDS:
        rows = {}
        for eps in cfg.eps:
            worst, bound = float("-inf"), None
            for _ in range(cfg.instances):
                x, y = rand_space(rng, rng.randint(1, 3)), rand_space(rng, rng.randint(1, 3))
                base = glue(x, y, "correspondence", corr=random_correspondence(x, y, rng))
                a = rand_q(rng, 0, 12)
                m1 = glue(x, y, "shift", base=base, shift=a)
                m2 = glue(x, y, "shift", base=base, shift=a + eps)
                lz = rand_prob(rng, 3)
                va, vb = rand_value(rng, x, kind, lz), rand_value(rng, y, kind, lz)
                rx, ry = rng.choice(x.labels), rng.choice(y.labels)
                d = [er_distance(g.space, pushforward(va, g.left), g.left[rx], pushforward(vb, g.right),
                                 g.right[ry]) for g in (m1, m2)]
                worst = max(worst, float(d[1]) - float(d[0]))
                bound = distortion_of(va)(eps)
            rows[str(eps)] = {"max_increase": worst, "dist": str(bound)}
        table[kind] = rows
    return {"config": asdict(cfg), "table": table}


if __name__ == "__main__":
    print(json.dumps(run(from_argv(Config)), indent=2, default=str))
