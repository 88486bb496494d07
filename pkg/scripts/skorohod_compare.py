"""Skorohod DP against the interleaving oracle and random time changes, with timings.

    python3 scripts/skorohod_compare.py cases=300 max_jumps=3
"""

from __future__ import annotations

import json
import random
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from _config import from_argv
from gen import rand_path, rand_space
from oracles import random_lambda_objective, skorohod_oracle
from ghmetrics.structures import skorohod_finite, skorohod_full


@dataclass(frozen=True)
class Config:
    cases: int = 200
    max_jumps: int = 3
    horizon: Fraction = Fraction(2)
    random_changes: int = 20
    half_line_cases: int = 10
    seed: int = 0


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    gaps, beaten, t_dp, t_oracle = [], 0, 0.0, 0.0
    for _ in range(cfg.cases):
        sp = rand_space(rng, 4)
        left = list(rand_path(rng, sp, rng.randint(0, cfg.max_jumps), cfg.horizon).jumps)
        right = list(rand_path(rng, sp, rng.randint(0, cfg.max_jumps), cfg.horizon).jumps)
        metric = lambda v, w: sp.d(v.point, w.point)
        t0 = time.perf_counter()
        dp = skorohod_finite(left, right, cfg.horizon, metric).value
        t1 = time.perf_counter()
        ref = skorohod_oracle(left, right, cfg.horizon, metric)
        t2 = time.perf_counter()
        t_dp += t1 - t0
        t_oracle += t2 - t1
        gaps.append(abs(dp - ref))
        sampled = min(random_lambda_objective(left, right, cfg.horizon, metric, rng)
                      for _ in range(cfg.random_changes))
        beaten += sampled < dp - 1e-9
    half = []
    for _ in range(cfg.half_line_cases):
        sp = rand_space(rng, 3)
        left = list(rand_path(rng, sp, rng.randint(0, 2)).jumps)
        right = list(rand_path(rng, sp, rng.randint(0, 2)).jumps)
        t0 = time.perf_counter()
        skorohod_full(left, right, lambda v, w: sp.d(v.point, w.point))
        half.append(time.perf_counter() - t0)
    return {"config": asdict(cfg), "max_gap": max(gaps), "random_beats_dp": beaten,
            "seconds_dp": t_dp, "seconds_oracle": t_oracle,
            "half_line_seconds_mean": sum(half) / max(1, len(half))}


if __name__ == "__main__":
    print(json.dumps(run(from_argv(Config)), indent=2, default=str))
