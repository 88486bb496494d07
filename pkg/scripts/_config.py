"""Tiny helper: fill a dataclass config from ``key=value`` command-line tokens."""

from __future__ import annotations

import dataclasses
import sys
from fractions import Fraction


def from_argv(cls, argv=None):
    cfg = cls()
    for token in (sys.argv[1:] if argv is None else argv):
        key, _, raw = token.partition("=")
        field = {f.name: f for f in dataclasses.fields(cls)}.get(key)
        if field is None:
            raise SystemExit(f"unknown option {key!r}; known: {[f.name for f in dataclasses.fields(cls)]}")
        current = getattr(cfg, key)
        if isinstance(current, bool):
            value = raw.lower() in ("1", "true", "yes")
        elif isinstance(current, tuple):
            value = tuple(Fraction(v) for v in raw.split(","))
        elif isinstance(current, Fraction):
            value = Fraction(raw)
        else:
            value = type(current)(raw)
        cfg = dataclasses.replace(cfg, **{key: value})
    return cfg
