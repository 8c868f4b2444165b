"""The truncated Toeplitz model of a graph representation and its relations.

The basis is every finite path of length <= L over edges with index below the
cutoff.  P_v projects onto paths starting at v and S_e sends a path alpha to
e alpha when that still has length <= L.  Relations are checked with exact
integer matrices; the summation relation fails by a defect Delta_v that is
reported rather than asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .graph import FinitePath, Graph, GraphError, enumerate_paths
from .matrices import IntMatrix
from .semigroup import ZERO, enumerate_elements, multiply

__all__ = [
    "TruncatedRep",
    "build_toeplitz",
    "check_relations",
    "semigroup_to_matrices",
    "check_homomorphism",
    "RelationReport",
]


@dataclass
class TruncatedRep:
    graph: Graph
    L: int
    cutoff: int
    basis: list
    index: dict
    P: dict  # vertex -> IntMatrix
    S: dict  # EdgeRef -> IntMatrix

    @property
    def size(self) -> int:
        return len(self.basis)

    def columns_up_to(self, length: int) -> list:
        return [i for i, p in enumerate(self.basis) if len(p) <= length]

    def S_path(self, alpha: FinitePath) -> IntMatrix:
        """S_alpha = S_{e1} ... S_{ek}; P_v for a vertex."""
        if alpha.is_vertex:
            return self.P[alpha.start]
        m = self.S[alpha.edges[0]]
        for e in alpha.edges[1:]:
            m = m @ self.S[e]
        return m


def build_toeplitz(g: Graph, L: int, cutoff: int) -> TruncatedRep:
    if L < 1 or cutoff < 1:
        raise GraphError("need L >= 1 and cutoff >= 1")
    if not g.vertices:
        raise GraphError("empty basis")
    basis = enumerate_paths(g, None, L, cutoff)
    index = {p: i for i, p in enumerate(basis)}
    n = len(basis)
    P = {v: IntMatrix.diagonal(1 if p.start == v else 0 for p in basis) for v in g.vertices}
    S = {}
    for e in g.edges(cutoff):
        cols = {}
        for j, p in enumerate(basis):
            if p.start == g.target(e) and len(p) + 1 <= L:
                q = FinitePath(g.source(e), (e,) + p.edges, p.end)
                cols[j] = {index[q]: 1}
        S[e] = IntMatrix(n, n, cols)
    return TruncatedRep(g, L, cutoff, basis, index, P, S)


@dataclass
class RelationReport:
    L: int
    cutoff: int
    basis_size: int
    edges: list
    failures: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    boundary_defect: dict = field(default_factory=dict)
    defects: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def fail(self, name: str, what):
        self.failures.setdefault(name, []).append(what)

    def count(self, name: str):
        self.checks[name] = self.checks.get(name, 0) + 1
        self.failures.setdefault(name, [])

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "cutoff": self.cutoff,
            "basis_size": self.basis_size,
            "edges": [str(e) for e in self.edges],
            "checks": dict(sorted(self.checks.items())),
            "failures": {k: [str(x) for x in v] for k, v in sorted(self.failures.items())},
            "boundary_defect": dict(sorted(self.boundary_defect.items())),
            "defects": dict(sorted(self.defects.items())),
            "ok": self.ok,
        }


def _is_partial_isometry(m: IntMatrix) -> bool:
    return m @ m.T @ m == m


def check_relations(rep: TruncatedRep) -> RelationReport:
    g, L = rep.graph, rep.L
    edges = sorted(rep.S)
    report = RelationReport(L, rep.cutoff, rep.size, edges)
    P, S = rep.P, rep.S

    # projections, mutually orthogonal
    for v in g.vertices:
        report.count("projections")
        if P[v] @ P[v] != P[v] or P[v].T != P[v]:
            report.fail("projections", v)
    for v, w in combinations(g.vertices, 2):
        report.count("orthogonality_P")
        if not (P[v] @ P[w]).is_zero():
            report.fail("orthogonality_P", (v, w))
    ranges = {e: S[e] @ S[e].T for e in edges}
    for e, f in combinations(edges, 2):
        report.count("orthogonality_SS*")
        if not (ranges[e] @ ranges[f]).is_zero():
            report.fail("orthogonality_SS*", (e, f))

    interior = rep.columns_up_to(L - 1)
    for e in edges:
        report.count("partial_isometry")
        if not _is_partial_isometry(S[e]):
            report.fail("partial_isometry", e)
        # (i) S_e* S_e = P_r(e), away from the top layer
        diff = S[e].T @ S[e] - P[g.target(e)]
        report.count("i_interior")
        if not diff.restrict_columns(interior).is_zero():
            report.fail("i_interior", e)
        report.boundary_defect[str(e)] = len(diff.nonzero_columns())
        # (iii) P_s(e) S_e S_e* = S_e S_e*
        report.count("iii")
        if P[g.source(e)] @ ranges[e] != ranges[e]:
            report.fail("iii", e)

    # S_alpha versions, for every enumerated alpha with l <= L - 1
    for alpha in enumerate_paths(g, None, L - 1, rep.cutoff):
        if alpha.is_vertex:
            continue
        Sa = rep.S_path(alpha)
        report.count("S_alpha_partial_isometry")
        if not _is_partial_isometry(Sa):
            report.fail("S_alpha_partial_isometry", alpha)
        report.count("S_alpha_i_interior")
        keep = rep.columns_up_to(L - len(alpha))
        if not (Sa.T @ Sa - P[alpha.end]).restrict_columns(keep).is_zero():
            report.fail("S_alpha_i_interior", alpha)
        report.count("S_alpha_source")
        if P[alpha.start] @ Sa != Sa:
            report.fail("S_alpha_source", alpha)
        report.count("S_alpha_range")
        if P[alpha.end] @ Sa.T != Sa.T:
            report.fail("S_alpha_range", alpha)

    # (ii): quantify Delta_v = P_v - sum S_e S_e*
    for v in g.vertices:
        delta = P[v]
        out = [e for e in edges if g.source(e) == v]
        for e in out:
            delta = delta - ranges[e]
        support = [str(rep.basis[j]) for j in delta.nonzero_columns()]
        complete = not g.is_infinite_emitter(v) and len(out) == g.out_degree(v)
        report.defects[v] = {
            "rank": delta.rank(),
            "support": support,
            "is_projection": delta @ delta == delta,
            "all_edges_enumerated": complete,
            "infinite_emitter": g.is_infinite_emitter(v),
        }
        if g.is_infinite_emitter(v):
            # partial sums of range projections stay below P_v
            report.count("partial_sum_below_P")
            if delta @ delta != delta:
                report.fail("partial_sum_below_P", v)
    return report


def semigroup_to_matrices(rep: TruncatedRep, s) -> IntMatrix:
    """Pi(alpha, beta) = S_alpha S_beta*, Pi(zero) = 0."""
    if s is ZERO:
        return IntMatrix.zeros(rep.size, rep.size)
    for p in (s.alpha, s.beta):
        if len(p) > rep.L - 1:
            raise GraphError(f"{p} is longer than L - 1 = {rep.L - 1}")
    return rep.S_path(s.alpha) @ rep.S_path(s.beta).T


def check_homomorphism(rep: TruncatedRep, max_len=None, max_violations: int = 20) -> dict:
    """Pi(st) = Pi(s) Pi(t) on columns gamma with l(gamma) + l(alpha_s) + l(alpha_t) <= L.

    Pairs range over elements with components of length <= max_len (default L - 1).
    """
    if max_len is None:
        max_len = rep.L - 1
    elems = enumerate_elements(rep.graph, max_len, rep.cutoff)
    pi = {s: semigroup_to_matrices(rep, s) for s in elems}
    lengths = [len(p) for p in rep.basis]
    checked = 0
    violations = []
    for s in elems:
        for t in elems:
            st = multiply(s, t)
            if st is not ZERO and max(len(st.alpha), len(st.beta)) > rep.L - 1:
                continue
            ls = len(s.alpha) if s is not ZERO else 0
            lt = len(t.alpha) if t is not ZERO else 0
            keep = [j for j, n in enumerate(lengths) if n + ls + lt <= rep.L]
            lhs = pi[st] if st in pi else semigroup_to_matrices(rep, st)
            rhs = pi[s] @ pi[t]
            checked += 1
            if (lhs - rhs).restrict_columns(keep).is_zero():
                continue
            if len(violations) < max_violations:
                violations.append((str(s), str(t)))
    return {"pairs": checked, "violations": violations}
