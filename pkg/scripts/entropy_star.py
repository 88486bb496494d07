"""Covering numbers of star spaces around their centre, and the precompactness verdict.

    python3 scripts/entropy_star.py max_leaves=12
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from _config import from_argv
from ghmetrics.core import RootedSpace, validate_space
from ghmetrics.entropy import precompactness_diagnostic


@dataclass(frozen=True)
class Config:
    max_leaves: int = 10
    radii: tuple = (Fraction(1, 2), Fraction(1), Fraction(2))
    eps: tuple = (Fraction(1, 2), Fraction(1))


def star(n: int) -> RootedSpace:
    labels = ["centre"] + [f"leaf{k}" for k in range(n)]
    m = [[0 if a == b else (1 if "centre" in (a, b) else 2) for b in labels] for a in labels]
    return RootedSpace(validate_space(m, labels), "centre")


def run(cfg: Config) -> dict:
    rep = precompactness_diagnostic([star(n) for n in range(1, cfg.max_leaves + 1)], cfg.radii, cfg.eps)
    return {"config": asdict(cfg), **rep.summary()}


if __name__ == "__main__":
    print(json.dumps(run(from_argv(Config)), indent=2, default=str))
