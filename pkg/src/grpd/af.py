"""The filtration of the gauge-type subgroupoid G^n by elementary pieces.

For F = the first N edges of the graph, A_r is the set of length-r paths over F
(A_0 = s(F)), C_r the units starting with a path of A_r, and C_r' = C_r minus
C_{r+1} (C_n' = C_n).  Each C_r' is a disjoint union of cylinders, one per
alpha in A_r, and k_v(r) counts the alpha ending at v whose cylinder meets X.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice
from typing import Optional

from .analysis import require_no_sinks
from .graph import Graph, GraphError
from .groupoid import (CylinderSet, Finite, cylinder_empty_in_X, lasso, prepend, render_unit,
                       shift, unit_edges)

__all__ = [
    "AFDecomposition",
    "AFLevel",
    "af_decompose",
    "elementary_summary",
    "cylinder_within",
    "cylinders_disjoint",
    "check_chain",
    "check_partition",
    "sample_units",
    "brute_force_multiplicities",
]


@dataclass
class AFLevel:
    r: int
    paths: list  # A_r
    pieces: list  # CylinderSet per alpha, same order as paths
    nonempty: list  # whether each piece meets X
    witnesses: list
    k: dict  # vertex -> k_v(r)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "A": [str(p) for p in self.paths],
            "pieces": [{"cylinder": str(c), "meets_X": ne,
                        "witness": render_unit(w) if w is not None else None}
                       for c, ne, w in zip(self.pieces, self.nonempty, self.witnesses)],
            "k": dict(sorted(self.k.items())),
        }


@dataclass
class AFDecomposition:
    graph: Graph
    n: int
    N: int
    F: list
    levels: list = field(default_factory=list)
    notice: Optional[str] = None

    def level(self, r: int) -> AFLevel:
        return self.levels[r]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "F": [str(e) for e in self.F],
            "levels": [lv.to_json() for lv in self.levels],
            "summary": [[r, v, k] for r, v, k in elementary_summary(self)],
            "notice": self.notice,
        }


def first_edges(g: Graph, count: int) -> list:
    return list(islice(g.edge_enumeration(), count))


def _paths_over(g: Graph, edges: list, starts: list, length: int) -> list:
    """Paths of the given length over ``edges``, lexicographic in edge order."""
    by_source: dict = {}
    for e in sorted(edges):
        by_source.setdefault(g.source(e), []).append(e)
    layer = [g.vertex_path(v) for v in starts]
    for _ in range(length):
        layer = [g.extend(p, e) for p in layer for e in by_source.get(p.end, [])]
    return layer


def af_decompose(g: Graph, n: int, N: int) -> AFDecomposition:
    if n < 0 or N < 1:
        raise GraphError("need n >= 0 and N >= 1")
    require_no_sinks(g)
    F = first_edges(g, N)
    notice = None
    if len(F) < N:
        notice = f"graph has only {len(F)} edges; N clamped to {len(F)}"
        N = len(F)
    d = AFDecomposition(g, n, N, F, notice=notice)
    starts = [v for v in g.vertices if any(g.source(e) == v for e in F)]
    out_F: dict = {}
    for e in sorted(F):
        out_F.setdefault(g.source(e), []).append(e)
    for r in range(n + 1):
        paths = _paths_over(g, F, starts, r)
        pieces, nonempty, witnesses = [], [], []
        k = {}
        for alpha in paths:
            if r < n:
                excluded = tuple(g.extend(alpha, e) for e in out_F.get(alpha.end, []))
            else:
                excluded = ()
            c = CylinderSet(alpha, excluded)
            empty, w = cylinder_empty_in_X(g, c)
            pieces.append(c)
            nonempty.append(not empty)
            witnesses.append(w)
            if not empty:
                k[alpha.end] = k.get(alpha.end, 0) + 1
        d.levels.append(AFLevel(r, paths, pieces, nonempty, witnesses, k))
    return d


def elementary_summary(d: AFDecomposition) -> list:
    """(r, v, k_v) for every elementary piece T_k x (X^v)' with k >= 1."""
    out = []
    for lv in d.levels:
        for v in d.graph.vertices:
            if lv.k.get(v, 0) >= 1:
                out.append((lv.r, v, lv.k[v]))
    return out


# -- cylinder algebra -------------------------------------------------------------------


def cylinder_within(c: CylinderSet, d: CylinderSet) -> bool:
    """Symbolic inclusion of c in d (as sets of all units)."""
    if not d.base.is_prefix_of(c.base):
        return False
    for q in d.excluded:
        if q.is_prefix_of(c.base):
            return False
        if c.base.is_prefix_of(q) and not any(p.is_prefix_of(q) for p in c.excluded):
            return False
    return True


def cylinders_disjoint(c: CylinderSet, d: CylinderSet) -> bool:
    if c.base.is_prefix_of(d.base):
        return any(p.is_prefix_of(d.base) for p in c.excluded)
    if d.base.is_prefix_of(c.base):
        return any(p.is_prefix_of(c.base) for p in d.excluded)
    return True


def check_chain(d: AFDecomposition) -> list:
    """Failures of C_{r+1} within C_r; each D_beta must sit inside some D_alpha."""
    failures = []
    for r in range(d.n):
        uppers = [CylinderSet(a) for a in d.levels[r].paths]
        for b in d.levels[r + 1].paths:
            if not any(cylinder_within(CylinderSet(b), u) for u in uppers):
                failures.append((r + 1, b))
    return failures


def check_partition(d: AFDecomposition) -> dict:
    """Pairwise disjointness of all pieces, and coverage of C_0 by them.

    Coverage is shown structurally: every path removed from a piece at level r
    is the base of a piece at level r + 1, and level n removes nothing.
    """
    pieces = [(lv.r, c) for lv in d.levels for c in lv.pieces]
    overlaps = []
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            if not cylinders_disjoint(pieces[i][1], pieces[j][1]):
                overlaps.append((pieces[i], pieces[j]))
    gaps = []
    for lv in d.levels:
        below = set(d.levels[lv.r + 1].paths) if lv.r < d.n else set()
        for c in lv.pieces:
            for q in c.excluded:
                if q not in below:
                    gaps.append((lv.r, q))
    return {"overlaps": overlaps, "gaps": gaps}


# -- brute-force oracle -------------------------------------------------------------------


def sample_units(g: Graph, edges: list, max_prefix: int, max_cycle: int) -> list:
    """Units of X built from ``edges``: finite paths ending in V_inf and lassos."""
    units = set()
    starts = list(g.vertices)
    for length in range(max_prefix + 1):
        for p in _paths_over(g, edges, starts, length):
            if g.is_infinite_emitter(p.end):
                units.add(Finite(p))
    cycles = []
    for length in range(1, max_cycle + 1):
        cycles += [c for c in _paths_over(g, edges, starts, length) if c.start == c.end]
    for length in range(max_prefix + 1):
        for p in _paths_over(g, edges, starts, length):
            for c in cycles:
                if c.start == p.end:
                    units.add(lasso(g, p, c))
    return sorted(units, key=render_unit)


def _in_C(x, r: int, F: set, starts: set) -> bool:
    if x.start not in starts:
        return False
    head = unit_edges(x, r)
    return head is not None and all(e in F for e in head)


def brute_force_multiplicities(d: AFDecomposition, units: Optional[list] = None) -> list:
    """k_v(r) from orbits of B_r' on sampled units, one dict per level.

    For x in C_r' with x = alpha gamma, its orbit is every beta gamma with
    beta in A_r and beta gamma in C_r'.  k_v(r) is the largest orbit seen with
    s(gamma) = v.
    """
    g = d.graph
    if units is None:
        extra = first_edges(g, d.N + len(g.bundles))
        units = sample_units(g, extra, d.n + 2, 2)
    F = set(d.F)
    starts = {g.source(e) for e in F}

    def in_prime(x, r):
        if not _in_C(x, r, F, starts):
            return False
        return r == d.n or not _in_C(x, r + 1, F, starts)

    result = []
    for lv in d.levels:
        r = lv.r
        k: dict = {}
        for x in units:
            if not in_prime(x, r):
                continue
            gamma = shift(g, x, r) if r else x
            v = gamma.start
            orbit = set()
            for beta in lv.paths:
                if beta.end != v:
                    continue
                y = prepend(g, beta, gamma)
                if in_prime(y, r):
                    orbit.add(y)
            k[v] = max(k.get(v, 0), len(orbit))
        result.append({v: c for v, c in k.items() if c})
    return result
