"""Hypothesis strategies for small graphs and their elements."""

from hypothesis import strategies as st

from grpd.graph import OMEGA, Bundle, Graph, enumerate_paths
from grpd.semigroup import ZERO, PathPair


@st.composite
def graphs(draw, max_vertices=3, max_bundles=4, mults=(1, 2, 3, OMEGA), sink_free=False):
    n = draw(st.integers(1, max_vertices))
    vs = tuple(f"v{i + 1}" for i in range(n))
    k = draw(st.integers(1 if not sink_free else n, max(max_bundles, n if sink_free else 1)))
    bundles = []
    for j in range(k):
        if sink_free and j < n:
            src = vs[j]
        else:
            src = draw(st.sampled_from(vs))
        dst = draw(st.sampled_from(vs))
        m = draw(st.sampled_from(mults))
        bundles.append(Bundle(f"b{j}", src, dst, m))
    return Graph(vs, tuple(bundles))


def pairs(g, max_len=2, cutoff=2, zero=True):
    paths = enumerate_paths(g, None, max_len, cutoff)
    elems = [PathPair(a, b, g) for a in paths for b in paths if a.end == b.end]
    if zero:
        elems.append(ZERO)
    return st.sampled_from(elems)
