import random

import pytest
from hypothesis import given, settings, strategies as st

from lkk.bowen_franks import GradingError, relation_matrix
from lkk.covering import (
    acyclic_k0,
    colimit_bf_oracle,
    covering_graph,
    sink_list,
    slice_sinks_match,
    transition_matrix,
    truncation_tower,
    unit_class,
)
from lkk.graph import WeightedGraph, disjoint_union
from lkk.laurent import LaurentMatrix, ONE, SIGMA

from zoo import C2, R1, R2, SINK, TWO_SINKS, V_TO_W, V_TO_W_DOUBLE, Z2_LOOP, adjacency_graph


def edge_set(g):
    return sorted((e.src, e.dst) for e in g.edges)


def test_covering_examples():
    c = covering_graph(R1, 1)
    assert c.vertices == ("v@-1", "v@0", "v@1")
    assert edge_set(c) == [("v@-1", "v@0"), ("v@0", "v@1")]
    c = covering_graph(Z2_LOOP)
    assert edge_set(c) == [("v@0", "v@1"), ("v@1", "v@0")]
    c = covering_graph(SINK, 1)
    assert len(c.vertices) == 3 and not c.edges
    with pytest.raises(ValueError):
        covering_graph(R1)


def test_tower_examples():
    slices, trans = truncation_tower(R2, 2)
    for n, s in enumerate(slices):
        assert s.sink_list == (("v", n),)
    assert [t.matrix.to_rows() for t in trans] == [[[2]], [[2]]]
    slices, trans = truncation_tower(V_TO_W, 1)
    assert slices[0].sink_list == (("w", 0), ("v", 0))
    assert slices[1].sink_list == (("w", -1), ("w", 0), ("w", 1), ("v", 1))
    assert trans[0].matrix.to_rows() == [[0, 0], [1, 0], [0, 1], [0, 0]]
    slices, trans = truncation_tower(TWO_SINKS, 1)
    assert len(slices[1].sink_list) == 6
    assert trans[0].matrix.to_rows() == [[0, 0], [1, 0], [0, 0], [0, 0], [0, 1], [0, 0]]
    with pytest.raises(GradingError):
        truncation_tower(Z2_LOOP, 1)
    with pytest.raises(ValueError):
        truncation_tower(R1, -1)


@settings(max_examples=30)
@given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=3, max_size=3))
def test_tower_invariants(a):
    g = adjacency_graph(a)
    slices, trans = truncation_tower(g, 2)
    for s in slices:
        assert slice_sinks_match(s)
    nsinks = len(g.sinks())
    for t in trans:
        m = t.matrix
        assert all(x >= 0 for row in m.to_rows() for x in row)
        assert all(any(m.to_rows()[i][j] for i in range(m.rows)) for j in range(m.cols))
        persistent = nsinks * (2 * t.from_radius + 1)
        src = sink_list(g, t.from_radius)
        dst = sink_list(g, t.to_radius)
        for j in range(persistent):
            i = dst.index(src[j])
            assert m.to_rows()[i][j] == 1 and sum(r[j] for r in m.to_rows()) == 1


@settings(max_examples=20)
@given(st.lists(st.lists(st.integers(0, 1), min_size=2, max_size=2), min_size=2, max_size=2),
       st.lists(st.lists(st.integers(0, 1), min_size=2, max_size=2), min_size=2, max_size=2))
def test_covering_of_union_is_union_of_coverings(a, b):
    g, h = adjacency_graph(a), adjacency_graph(b)
    lhs = covering_graph(disjoint_union(g, h), 1)
    rhs = disjoint_union(covering_graph(g, 1), covering_graph(h, 1))
    assert sorted(lhs.vertices) == sorted(rhs.vertices)
    assert edge_set(lhs) == edge_set(rhs)


def test_acyclic_k0_examples():
    sinks, counts = acyclic_k0(covering_graph(V_TO_W, 0))
    assert sinks == ["v@0", "w@0"] or sinks == ["w@0", "v@0"]
    sinks, counts = acyclic_k0(V_TO_W)
    assert sinks == ["w"] and counts == {"v": [1], "w": [1]}
    assert unit_class(counts) == [2]
    sinks, counts = acyclic_k0(SINK)
    assert counts == {"v": [1]}
    sinks, counts = acyclic_k0(V_TO_W_DOUBLE)
    assert counts == {"v": [2], "w": [1]}
    with pytest.raises(ValueError):
        acyclic_k0(R1)


def test_acyclic_k0_recursion_on_slices():
    for g in (R2, C2, adjacency_graph([[1, 1, 0], [0, 0, 2], [1, 0, 0]])):
        sl = covering_graph(g, 2)
        sinks, counts = acyclic_k0(sl)
        for v, vec in counts.items():
            out = [e.dst for e in sl.edges if e.src == v]
            if out:
                assert vec == [sum(col) for col in zip(*(counts[w] for w in out))]
            else:
                assert vec == [int(s == v) for s in sinks]


def test_oracle_examples():
    for g in (R2, SINK, R1, C2, V_TO_W):
        v = colimit_bf_oracle(g, 4)
        assert v.consistent, v.mismatches
        assert v.to_json()["verdict"] == "consistent up to radius 4"
    with pytest.raises(GradingError):
        colimit_bf_oracle(Z2_LOOP)


def test_oracle_flags_wrong_presentations():
    bad = colimit_bf_oracle(R2, 3, relations=LaurentMatrix.from_rows([[ONE - SIGMA * 3]]))
    assert not bad.consistent and bad.to_json()["verdict"] == "mismatch"
    bad = colimit_bf_oracle(C2, 3, relations=LaurentMatrix.from_rows([[ONE, -SIGMA], [-SIGMA ** 2, ONE]]))
    assert not bad.consistent
    with pytest.raises(ValueError):
        colimit_bf_oracle(C2, 3, relations=LaurentMatrix.from_rows([[ONE]]))


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_oracle_flags_random_entry_mutations(seed):
    rng = random.Random(seed)
    g = adjacency_graph([[rng.randint(0, 2) for _ in range(2)] for _ in range(2)])
    X = relation_matrix(g)
    if not X.cols:
        return
    data = [row[:] for row in X.data]
    i, j = rng.randrange(X.rows), rng.randrange(X.cols)
    data[i][j] = data[i][j] + SIGMA ** rng.randint(-1, 2) * rng.choice([1, -1, 2])
    assert not colimit_bf_oracle(g, 3, relations=LaurentMatrix.from_rows(data, cols=X.cols)).consistent
