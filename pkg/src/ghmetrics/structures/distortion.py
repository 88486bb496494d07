"""Symbolic distortion functions and the per-kind table."""

from __future__ import annotations

from dataclasses import dataclass

from .values import UnknownKind, kind_descriptor


@dataclass(frozen=True)
class DistortionFn:
    """ε ↦ Dist(ε) built from identity, clamp (1 ∧ ε), zero, max and composition."""

    op: str
    args: tuple = ()

    def __call__(self, eps):
        if eps < 0:
            raise ValueError("distortion is evaluated at nonnegative slack only")
        if self.op == "id":
            return eps
        if self.op == "clamp":
            return min(1, eps)
        if self.op == "zero":
            return 0
        if self.op == "max":
            return max(f(eps) for f in self.args)
        if self.op == "compose":
            outer, inner = self.args
            return outer(inner(eps))
        raise ValueError(f"unknown distortion op {self.op!r}")

    def __str__(self) -> str:
        if self.op == "id":
            return "eps"
        if self.op == "clamp":
            return "min(1, eps)"
        if self.op == "zero":
            return "0"
        if self.op == "max":
            return "max(" + ", ".join(map(str, self.args)) + ")"
        outer, inner = self.args
        return str(outer).replace("eps", f"({inner})")


IDENTITY = DistortionFn("id")
CLAMP = DistortionFn("clamp")
ZERO = DistortionFn("zero")


def dmax(*fns: DistortionFn) -> DistortionFn:
    flat: list = []
    for f in fns:
        for g in (f.args if f.op == "max" else (f,)):
            if g not in flat:
                flat.append(g)
    if len(flat) == 1:
        return flat[0]
    return DistortionFn("max", tuple(flat))


def compose(outer: DistortionFn, inner: DistortionFn) -> DistortionFn:
    if inner.op == "id":
        return outer
    if outer.op == "id":
        return inner
    return DistortionFn("compose", (outer, inner))


_PLAIN = {"point": IDENTITY, "tuple": IDENTITY, "fixed": ZERO, "subset": CLAMP,
          "measure": CLAMP, "lzero": CLAMP}


def _descriptor(kind) -> tuple:
    if isinstance(kind, tuple):
        return kind
    if isinstance(kind, str):
        return (kind,)
    return kind_descriptor(kind)


def distortion_of(kind, rooted: bool = True) -> DistortionFn:
    """Distortion of a structure kind (a value, a name or a kind descriptor).

    ``rooted=True`` gives the form that bounds the element-rooted distance, which
    always carries the basepoint distance, hence the max with ε. ``rooted=False``
    gives the declared form of the plain metrization.
    """
    desc = _descriptor(kind)
    name = desc[0]
    if name in _PLAIN:
        plain = _PLAIN[name]
    elif name == "product":
        plain = dmax(*(distortion_of(p, rooted=False) for p in desc[1]))
    elif name == "composed":
        # the X^k (x aux) transformation moves distances by at most ε
        plain = compose(distortion_of(desc[2], rooted=True), IDENTITY)
    elif name in ("law", "step_cadlag"):
        inner = desc[1] if len(desc) > 1 and desc[1] is not None else ("point",)
        plain = distortion_of(inner, rooted=True)
    elif name == "var_function":
        inner = desc[2] if len(desc) > 2 and desc[2] is not None else ("point",)
        plain = dmax(IDENTITY, distortion_of(inner, rooted=True))
    else:
        raise UnknownKind(f"no distortion registered for {name!r}")
    return dmax(IDENTITY, plain) if rooted else plain

