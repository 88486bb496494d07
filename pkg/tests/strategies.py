"""Hypothesis strategies for small rational metric spaces and objects on them."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from ghmetrics.core import space_from_edges
from ghmetrics.measuremetrics import FiniteMeasure

weights = st.integers(1, 12).map(lambda k: Fraction(k, 4))


@st.composite
def spaces(draw, min_size: int = 1, max_size: int = 6):
    n = draw(st.integers(min_size, max_size))
    labels = list(range(n))
    edges = [(i, j, draw(weights)) for i in range(n) for j in range(i + 1, n)]
    return space_from_edges(labels, edges)


def subsets(space, nonempty: bool = False):
    return st.frozensets(st.sampled_from(space.labels), min_size=1 if nonempty else 0)


def measures(space):
    mass = st.builds(Fraction, st.integers(1, 4), st.integers(1, 3))
    return st.dictionaries(st.sampled_from(space.labels), mass, max_size=len(space)).map(FiniteMeasure)
