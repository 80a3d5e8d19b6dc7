"""Hypothesis strategies shared by several test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from rainbowlab.matroids import PartitionMatroid, UniformMatroid, mask_of
from rainbowlab.polytopes import IntersectionSystem
from rainbowlab.setfunctions import PDSTuple, interior_pds


@st.composite
def matroids(draw, n, loopless=False):
    if draw(st.booleans()):
        return UniformMatroid(n, draw(st.integers(1 if loopless else 0, n)))
    labels = [draw(st.integers(0, 2)) for _ in range(n)]
    parts = [mask_of(v for v in range(n) if labels[v] == p) for p in range(3)]
    parts = [p for p in parts if p]
    lo = 1 if loopless else 0
    caps = [draw(st.integers(lo, bin(p).count("1"))) for p in parts]
    return PartitionMatroid(n, parts, caps)


@st.composite
def systems(draw, max_n=5, max_r=3, generic_b=False, loopless=False):
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(1, max_r))
    ms = [draw(matroids(n, loopless)) for _ in range(r)]
    b = None
    if generic_b or draw(st.booleans()):
        b = PDSTuple([interior_pds(n, Fraction(draw(st.integers(1, 6)), draw(st.integers(1, 3))))
                      for _ in range(r)], validate=False)
    return IntersectionSystem(ms, b)


def weights(n):
    return st.lists(st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=6), min_size=n, max_size=n)
