"""Structural conditions on graphs and the simplicity verdict.

Conditions: (K) no vertex has exactly one loop, cofinality, (c) every vertex
reaches every infinite emitter, (alpha) every loop has an exit and (beta) the
hereditary saturated closure of any vertex is everything.  The verdict
``simple`` is alpha and beta; ``via_abc`` is K, cofinal and c.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph import (EdgeRef, FinitePath, Graph, GraphError, all_sink_free_graphs,
                    classify_vertex, format_graph)
from .groupoid import (CylinderSet, Lasso, Unit, cylinder_empty_in_X, element_valid, in_X,
                       lasso, prepend, render_unit, shift)

__all__ = [
    "PreconditionError",
    "LoopCount",
    "loops_based_at",
    "condition_K",
    "cofinal",
    "condition_c",
    "all_loops_have_exits",
    "hereditary_saturated_closure",
    "condition_beta",
    "decide_simplicity",
    "analyze",
    "verify_condition_equivalence",
    "EquivalenceReport",
    "minimality_witness",
    "cycle_within",
]


class PreconditionError(GraphError):
    """The graph has sinks, and the operation assumes there are none."""


def require_no_sinks(g: Graph):
    sinks = g.sinks()
    if sinks:
        raise PreconditionError(
            f"graph has sinks {sinks}; this analysis assumes a graph without sinks")


# -- loops --------------------------------------------------------------------------


@dataclass(frozen=True)
class LoopCount:
    count: int  # 0, 1, or 2 meaning "at least two"
    samples: tuple = ()

    @property
    def label(self) -> str:
        return ">=2" if self.count >= 2 else str(self.count)

    @property
    def vertex_class(self) -> str:
        return f"V{min(self.count, 2)}"


def _sub_successors(g: Graph, allowed: set):
    return {u: [b for b in g.out_bundles(u) if b.target in allowed] for u in allowed}


def cycle_within(g: Graph, allowed: Iterable) -> Optional[FinitePath]:
    """A closed path using only vertices of ``allowed``, or None."""
    allowed = set(allowed)
    avoid = set(g.vertices) - allowed
    for t in g.vertices:
        if t not in allowed:
            continue
        for b in g.out_bundles(t):
            if b.target not in allowed:
                continue
            rest = g.shortest_path(b.target, {t}, avoid)
            if rest is not None:
                return g.path((EdgeRef(b.id, 0),) + rest.edges)
    return None


def _reach_avoiding(g: Graph, starts: Iterable, avoid: str, forward: bool = True) -> set:
    pred: dict = {u: [] for u in g.vertices}
    for b in g.bundles:
        pred[b.target].append(b.source)
    seen = set()
    todo = deque(s for s in starts if s != avoid)
    seen.update(todo)
    while todo:
        u = todo.popleft()
        nxt = g.successors(u) if forward else pred[u]
        for w in nxt:
            if w != avoid and w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def loops_based_at(g: Graph, v: str, limit: int = 4) -> LoopCount:
    """Number of first-return loops at v, capped at 2, plus up to ``limit`` samples.

    Routes v -> ... -> v avoiding v in between run through the vertices that are
    reachable from v and reach v without passing v.  A cycle among those means
    infinitely many loops; otherwise routes are counted by dynamic programming.
    """
    g.check_vertex(v)
    direct = sum((b.multiplicity for b in g.out_bundles(v) if b.target == v), 0)
    exits = [b.target for b in g.out_bundles(v) if b.target != v]
    ins = [b.source for b in g.bundles if b.target == v and b.source != v]
    middle = _reach_avoiding(g, exits, v) & _reach_avoiding(g, ins, v, forward=False)
    if direct >= 2:
        count = 2
    elif cycle_within(g, middle) is not None:
        count = 2
    else:
        # paths from u to v with interior in middle; middle is acyclic
        memo: dict = {}

        def routes(u):
            if u in memo:
                return memo[u]
            total = 0
            for b in g.out_bundles(u):
                if b.target == v:
                    total += b.multiplicity
                elif b.target in middle:
                    total += b.multiplicity * routes(b.target)
                if total >= 2:
                    break
            memo[u] = min(total, 2)
            return memo[u]

        total = direct
        for b in g.out_bundles(v):
            if b.target in middle:
                total += b.multiplicity * routes(b.target)
        count = int(min(total, 2))
    return LoopCount(count, tuple(_loop_samples(g, v, middle, limit)))


def _loop_samples(g: Graph, v: str, middle: set, limit: int) -> list:
    out = []
    todo = deque([g.vertex_path(v)])
    while todo and len(out) < limit:
        p = todo.popleft()
        for e in g.edges_from(p.end, 2):
            q = g.extend(p, e)
            if q.end == v:
                out.append(q)
                if len(out) >= limit:
                    break
            elif q.end in middle and len(q) <= len(g.vertices) + 2:
                todo.append(q)
    return out


def condition_K(g: Graph):
    """(True, None) or (False, v) with v carrying exactly one loop."""
    for v in g.vertices:
        if loops_based_at(g, v, 1).count == 1:
            return False, v
    return True, None


def unique_loop_lasso(g: Graph, v: str) -> Lasso:
    lc = loops_based_at(g, v, 1)
    if lc.count != 1:
        raise GraphError(f"{v} does not carry exactly one loop")
    return lasso(g, (), lc.samples[0])


# -- cofinality and (c) ----------------------------------------------------------------


def cofinal(g: Graph):
    """(True, None) or (False, (v, lasso)) with the lasso never reaching R(v)."""
    require_no_sinks(g)
    for v in g.vertices:
        reach = g.reachable_set(v)
        rest = set(g.vertices) - reach
        cyc = cycle_within(g, rest)
        if cyc is not None:
            return False, (v, lasso(g, (), cyc))
    return True, None


def condition_c(g: Graph):
    for w in g.infinite_emitters():
        for v in g.vertices:
            if w not in g.reachable_set(v):
                return False, (v, w)
    return True, None


def all_loops_have_exits(g: Graph):
    """(True, None) or (False, cycle) for a cycle of out-degree-1 vertices."""
    single = {v for v in g.vertices if g.out_degree(v) == 1}
    cyc = cycle_within(g, single)
    if cyc is None:
        return True, None
    return False, cyc


# -- hereditary saturated sets -------------------------------------------------------


def hereditary_saturated_closure(g: Graph, seed: Iterable, saturate: bool = True) -> set:
    """Least superset of seed closed under reachability and V_f-saturation.

    Saturation adds a finite emitter when every edge it emits ends in the set;
    a sink satisfies this vacuously.  ``saturate=False`` drops that rule.
    """
    h = set()
    for v in seed:
        h |= g.reachable_set(v)
    changed = True
    while changed and saturate:
        changed = False
        for w in g.vertices:
            if w in h or g.is_infinite_emitter(w):
                continue
            if all(b.target in h for b in g.out_bundles(w)):
                h |= g.reachable_set(w)
                changed = True
    return h


def condition_beta(g: Graph, saturate: bool = True):
    everything = set(g.vertices)
    for v in g.vertices:
        if hereditary_saturated_closure(g, {v}, saturate) != everything:
            return False, v
    return True, None


# -- verdict and report ----------------------------------------------------------------


@dataclass
class Verdict:
    simple: bool
    via_abc: bool
    via_alpha_beta: bool
    flags: dict
    witnesses: dict

    def to_json(self) -> dict:
        return {"simple": self.simple, "via_abc": self.via_abc,
                "via_alpha_beta": self.via_alpha_beta, **self.flags,
                "witnesses": self.witnesses}


def _witness_json(kind: str, value) -> dict:
    if kind == "K":
        return {"kind": "vertex", "vertex": value}
    if kind == "cofinal":
        v, z = value
        return {"kind": "lasso", "vertex": v, "lasso": render_unit(z)}
    if kind == "c":
        v, w = value
        return {"kind": "unreachable", "from": v, "to": w}
    if kind == "alpha":
        return {"kind": "cycle", "cycle": [str(e) for e in value.edges]}
    if kind == "beta":
        return {"kind": "vertex", "vertex": value}
    raise ValueError(kind)


def _conditions(g: Graph, saturate: bool = True):
    checks = {
        "K": condition_K(g),
        "cofinal": cofinal(g),
        "c": condition_c(g),
        "alpha": all_loops_have_exits(g),
        "beta": condition_beta(g, saturate),
    }
    flags = {k: ok for k, (ok, _) in checks.items()}
    witnesses = {k: _witness_json(k, w) for k, (ok, w) in checks.items() if not ok}
    return flags, witnesses, checks


def decide_simplicity(g: Graph, saturate: bool = True) -> Verdict:
    require_no_sinks(g)
    flags, witnesses, _ = _conditions(g, saturate)
    ab = flags["alpha"] and flags["beta"]
    abc = flags["K"] and flags["cofinal"] and flags["c"]
    return Verdict(ab, abc, ab, flags, witnesses)


def analyze(g: Graph) -> dict:
    """Full report: vertex classes, the five flags, verdict and witnesses."""
    require_no_sinks(g)
    classes = {}
    for v in g.vertices:
        vc = classify_vertex(g, v)
        lc = loops_based_at(g, v, 2)
        classes[v] = {
            "emitter": vc.label,
            "loops": lc.label,
            "loop_class": lc.vertex_class,
            "loop_samples": [str(p) for p in lc.samples],
        }
    verdict = decide_simplicity(g)
    return {
        "vertex_classes": classes,
        "K": verdict.flags["K"],
        "cofinal": verdict.flags["cofinal"],
        "c": verdict.flags["c"],
        "alpha": verdict.flags["alpha"],
        "beta": verdict.flags["beta"],
        "simple": verdict.simple,
        "via_abc": verdict.via_abc,
        "witnesses": verdict.witnesses,
    }


# -- equivalence of the two condition sets ------------------------------------------------


@dataclass
class EquivalenceReport:
    graphs: int = 0
    discrepancies: list = field(default_factory=list)
    truncated: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def to_json(self) -> dict:
        return {"graphs": self.graphs, "discrepancies": len(self.discrepancies),
                "examples": [format_graph(g) for g in self.discrepancies[:5]],
                "truncated": self.truncated}


def verify_condition_equivalence(max_vertices: int, max_bundles: int, multiplicities,
                                 saturate: bool = True, max_graphs: Optional[int] = None,
                                 max_examples: int = 20) -> EquivalenceReport:
    """Compare K and cofinal and c against alpha and beta on every small sink-free graph."""
    report = EquivalenceReport()
    n_discrepancies = 0
    for g in all_sink_free_graphs(max_vertices, max_bundles, multiplicities):
        if max_graphs is not None and report.graphs >= max_graphs:
            report.truncated = f"stopped after {max_graphs} graphs"
            break
        report.graphs += 1
        abc = condition_K(g)[0] and cofinal(g)[0] and condition_c(g)[0]
        ab = all_loops_have_exits(g)[0] and condition_beta(g, saturate)[0]
        if abc != ab:
            n_discrepancies += 1
            if len(report.discrepancies) < max_examples:
                report.discrepancies.append(g)
    if n_discrepancies > len(report.discrepancies):
        report.truncated = (report.truncated or "") + \
            f" {n_discrepancies} discrepancies, {len(report.discrepancies)} kept"
    return report


# -- minimality ------------------------------------------------------------------------------


@dataclass(frozen=True)
class MinimalityWitness:
    bridge: FinitePath  # from r(alpha) to the vertex where z is rejoined
    n: int  # number of edges of z skipped
    unit: Unit  # alpha . bridge . (z with n edges dropped)
    k: int


def _unit_edges_upto(z: Unit, n: int):
    if isinstance(z, Lasso):
        return [z.edge(i) for i in range(n)]
    return list(z.path.edges[:n])


def minimality_witness(g: Graph, z: Unit, alpha: FinitePath) -> Optional[MinimalityWitness]:
    """A unit of D_alpha n X tail-equivalent to z, built as alpha . bridge . z_{n+1} ...

    Searches from r(alpha) for the nearest vertex r(z_n) (n = 0 meaning s(z)).
    Returns None when no such vertex is reachable, which means cofinality fails.
    """
    if not in_X(g, z):
        raise GraphError(f"{z} is not in X")
    empty, _ = cylinder_empty_in_X(g, CylinderSet(alpha))
    if empty:
        raise GraphError(f"D_{alpha} does not meet X")
    if isinstance(z, Lasso):
        horizon = len(z.prefix) + len(z.cycle)
    else:
        horizon = len(z.path)
    visited = {}
    vertex = z.start
    visited[vertex] = 0
    for i, e in enumerate(_unit_edges_upto(z, horizon), 1):
        vertex = g.target(e)
        visited.setdefault(vertex, i)
    bridge = g.shortest_path(alpha.end, set(visited))
    if bridge is None:
        return None
    n = visited[bridge.end]
    unit = prepend(g, alpha + bridge, shift(g, z, n))
    k = len(alpha) + len(bridge) - n
    assert element_valid(unit, k, z)
    return MinimalityWitness(bridge, n, unit, k)
