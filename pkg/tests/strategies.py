"""Hypothesis strategies for tree terms and pointed maps."""

from hypothesis import strategies as st

from dendroidal.forests import PointedMap


def terms(max_leaves: int = 6):
    leaf = st.just("eta") | st.just("v[]")
    return st.recursive(
        leaf,
        lambda kids: st.lists(kids, min_size=1, max_size=3).map(lambda ks: "v[" + ",".join(ks) + "]"),
        max_leaves=max_leaves,
    )


@st.composite
def pointed_maps(draw, max_size: int = 4, m=None, n=None):
    m = draw(st.integers(0, max_size)) if m is None else m
    n = draw(st.integers(0, max_size)) if n is None else n
    values = draw(st.lists(st.integers(0, n), min_size=m, max_size=m))
    return PointedMap(m, n, tuple(values))
