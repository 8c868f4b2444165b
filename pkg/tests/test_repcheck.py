import pytest
from hypothesis import given, strategies as st

from grpd.graph import EdgeRef, GraphError
from grpd.repcheck import (TruncatedRep, build_toeplitz, check_homomorphism, check_relations,
                           semigroup_to_matrices)
from grpd.semigroup import ZERO, idempotent, pair

from strategies import graphs


def column(rep, m, p):
    """The basis paths hit by m applied to the basis vector of p."""
    j = rep.index[p]
    return {str(rep.basis[i]): v for i, v in m.data.get(j, {}).items()}


class TestModel:
    def test_basis_sizes(self, o2, o_infty, one_edge):
        assert build_toeplitz(o2, 3, 2).size == 1 + 2 + 4 + 8
        assert build_toeplitz(o_infty, 2, 3).size == 1 + 3 + 9
        assert build_toeplitz(one_edge, 2, 1).size == 3

    def test_single_edge_shift(self, one_edge):
        rep = build_toeplitz(one_edge, 2, 1)
        S = rep.S[EdgeRef("e", 0)]
        assert column(rep, S, one_edge.vertex_path("v2")) == {"e[0]": 1}
        assert column(rep, S, one_edge.vertex_path("v1")) == {}

    def test_top_layer_is_killed(self, o2):
        rep = build_toeplitz(o2, 2, 2)
        c0 = EdgeRef("c", 0)
        top = o2.path([c0, c0])
        assert column(rep, rep.S[c0], top) == {}

    def test_bad_bounds(self, o2):
        with pytest.raises(GraphError):
            build_toeplitz(o2, 0, 2)
        with pytest.raises(GraphError):
            build_toeplitz(o2, 2, 0)


class TestRelations:
    @pytest.mark.parametrize("name, L, cutoff", [("o2", 3, 2), ("o_infty", 2, 3),
                                                 ("one_edge", 2, 1), ("tail_into_loop", 3, 1),
                                                 ("o5", 2, 5)])
    def test_corpus_holds(self, corpus, name, L, cutoff):
        report = check_relations(build_toeplitz(corpus[name], L, cutoff))
        assert report.ok
        assert all(report.checks.values())

    def test_defect_is_vacuum_projection(self, o2):
        report = check_relations(build_toeplitz(o2, 3, 2))
        d = report.defects["v"]
        assert d["rank"] == 1 and d["support"] == ["v"] and d["is_projection"]
        assert d["all_edges_enumerated"]

    def test_defect_matches_direct_sum(self, o2):
        # P_v minus both range projections leaves only the empty path
        rep = build_toeplitz(o2, 3, 2)
        delta = rep.P["v"]
        for e in rep.S:
            delta = delta - rep.S[e] @ rep.S[e].T
        assert delta.nonzero_columns() == [rep.index[o2.vertex_path("v")]]

    def test_infinite_emitter_partial_sum(self, o_infty):
        report = check_relations(build_toeplitz(o_infty, 2, 3))
        d = report.defects["v"]
        assert d["infinite_emitter"] and not d["all_edges_enumerated"]
        assert report.checks["partial_sum_below_P"] == 1
        # the paths starting with c[3], c[4], ... are outside the truncation
        assert d["support"] == ["v"]

    def test_boundary_defect_sits_on_top_layer(self, o2):
        rep = build_toeplitz(o2, 3, 2)
        c0 = EdgeRef("c", 0)
        diff = rep.S[c0].T @ rep.S[c0] - rep.P["v"]
        assert all(len(rep.basis[j]) == 3 for j in diff.nonzero_columns())
        assert check_relations(rep).boundary_defect["c[0]"] == 8

    def test_mutation_overlapping_ranges(self, o2):
        rep = build_toeplitz(o2, 3, 2)
        S = dict(rep.S)
        S[EdgeRef("c", 1)] = S[EdgeRef("c", 0)]
        bad = TruncatedRep(o2, rep.L, rep.cutoff, rep.basis, rep.index, rep.P, S)
        report = check_relations(bad)
        assert not report.ok and report.failures["orthogonality_SS*"]

    def test_mutation_wrong_source(self, one_edge):
        rep = build_toeplitz(one_edge, 2, 1)
        e = EdgeRef("e", 0)
        S = dict(rep.S)
        S[e] = rep.S[e].T
        bad = TruncatedRep(one_edge, rep.L, rep.cutoff, rep.basis, rep.index, rep.P, S)
        report = check_relations(bad)
        assert report.failures["iii"] or report.failures["i_interior"]


class TestHomomorphism:
    def test_cuntz_product(self, o2):
        rep = build_toeplitz(o2, 3, 2)
        c0, c1 = o2.path([("c", 0)]), o2.path([("c", 1)])
        v = o2.vertex_path("v")
        a = semigroup_to_matrices(rep, pair(o2, c0, c1))
        b = semigroup_to_matrices(rep, pair(o2, c1, c0))
        assert a @ b == semigroup_to_matrices(rep, idempotent(o2, c0))
        assert semigroup_to_matrices(rep, idempotent(o2, v)) == rep.P["v"]

    def test_zero(self, o2):
        rep = build_toeplitz(o2, 2, 2)
        assert semigroup_to_matrices(rep, ZERO).is_zero()

    def test_length_bound(self, o2):
        rep = build_toeplitz(o2, 2, 2)
        long = o2.path([("c", 0), ("c", 0)])
        with pytest.raises(GraphError):
            semigroup_to_matrices(rep, idempotent(o2, long))

    def test_o2(self, o2):
        result = check_homomorphism(build_toeplitz(o2, 3, 2))
        assert result["violations"] == [] and result["pairs"] > 1000

    def test_tail_into_loop(self, tail_loop):
        result = check_homomorphism(build_toeplitz(tail_loop, 3, 1))
        assert result["violations"] == []

    def test_full_columns_fail_at_the_boundary(self, o2):
        # without restricting columns the truncation shows up as a violation
        rep = build_toeplitz(o2, 2, 2)
        c0 = o2.path([("c", 0)])
        v = o2.vertex_path("v")
        s, t = pair(o2, v, c0), pair(o2, c0, v)
        lhs = semigroup_to_matrices(rep, idempotent(o2, v))
        assert lhs != semigroup_to_matrices(rep, s) @ semigroup_to_matrices(rep, t)

    def test_mutation_collapsed_edges(self, o2):
        rep = build_toeplitz(o2, 3, 2)
        S = dict(rep.S)
        S[EdgeRef("c", 1)] = S[EdgeRef("c", 0)]
        bad = TruncatedRep(o2, rep.L, rep.cutoff, rep.basis, rep.index, rep.P, S)
        assert check_homomorphism(bad)["violations"]


@given(graphs(max_vertices=3, max_bundles=3), st.integers(1, 3), st.integers(1, 2))
def test_defect_is_always_the_vertex(g, L, cutoff):
    report = check_relations(build_toeplitz(g, L, cutoff))
    assert report.ok
    for v, d in report.defects.items():
        assert d["support"] == [v] and d["rank"] == 1
