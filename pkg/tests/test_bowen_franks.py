import pytest

from lkk.bowen_franks import (
    GradingError,
    bf_dual,
    bf_graded,
    bf_ungraded,
    class_map_kernel_check,
    forget_grading_check,
    nonvanishing_check,
    point_evaluations,
    positive_cone_membership,
    purity_and_injectivity_check,
    relation_matrix,
    sequence_terms,
    vdb_check,
)
from lkk.corpus import CorpusSpec, generate_corpus
from lkk.intmat import AbelianGroup
from lkk.laurent import LaurentMatrix, ONE, SIGMA, ZERO
from lkk.modules import first_battery_mismatch, invariant_battery

from zoo import C2, R1, R2, SINK, TWO_SINKS, V_TO_W, Z2_LOOP


def test_bf_graded_examples():
    bf = bf_graded(R1)
    assert bf.module.relations.data == [[ONE - SIGMA]]
    assert bf.pointed.point == (ONE,)
    bf = bf_graded(SINK)
    assert bf.module.ngens == 1 and bf.module.nrels == 0
    assert bf.pointed.point == (ONE,)
    assert bf_graded(R2).module.relations.data == [[ONE - SIGMA * 2]]


def test_relation_columns_follow_edges():
    X = relation_matrix(V_TO_W)
    assert (X.rows, X.cols) == (2, 1)
    assert X.column(0) == [ONE, -SIGMA]


def test_bf_dual_examples():
    assert bf_dual(R1).module.relations.data == [[ONE - SIGMA]]
    d = bf_dual(SINK).module
    assert d.ngens == 0
    assert bf_dual(C2).module.relations == LaurentMatrix.from_rows([[ONE, -SIGMA], [-SIGMA, ONE]])
    d = bf_dual(V_TO_W).module
    assert (d.ngens, d.nrels) == (1, 2)


def test_bf_ungraded_examples():
    assert bf_ungraded(R2) == AbelianGroup()
    assert bf_ungraded(R1) == AbelianGroup((), 1)
    assert bf_ungraded(C2) == AbelianGroup((), 1)


def test_purity_examples():
    assert purity_and_injectivity_check(R2, [2, 3]).passed
    assert purity_and_injectivity_check(R1, [5]).passed
    rep = purity_and_injectivity_check(TWO_SINKS, [2])
    assert rep.passed and len(rep.lines) == 2
    with pytest.raises(ValueError):
        purity_and_injectivity_check(R1, [1])


def test_graded_checks_need_standard_grading():
    with pytest.raises(GradingError):
        purity_and_injectivity_check(Z2_LOOP)
    with pytest.raises(GradingError):
        vdb_check(Z2_LOOP)


def test_nonvanishing_examples():
    line = nonvanishing_check(R2).lines[0]
    assert line.passed and "Z/3" in line.detail
    line = nonvanishing_check(R1).lines[0]
    assert line.passed and "Z" in line.detail
    line = nonvanishing_check(SINK).lines[0]
    assert line.passed and "is 1" in line.detail


def test_class_map_examples():
    r = class_map_kernel_check(R2, 5)
    assert r["passed"] and r["search_space"] == 5
    r = class_map_kernel_check(V_TO_W, 5)
    assert r["passed"] and r["search_space"] == 35
    r = class_map_kernel_check(SINK, 3)
    assert r["passed"] and r["relation_lattice_rank"] == 0


def test_cone_membership_examples():
    r = positive_cone_membership(R1, [(1, "v", 0)])
    assert r.found and r.combination == ((1, "v", 0),)
    r = positive_cone_membership(V_TO_W, [(1, "v", 0)], degree_bound=1, coeff_bound=1)
    assert r.found
    r = positive_cone_membership(V_TO_W, [(1, "v", 0), (-1, "w", 1)], degree_bound=1, coeff_bound=1)
    assert r.found and r.combination == ()
    r = positive_cone_membership(SINK, [(-1, "v", 0)], degree_bound=2, coeff_bound=2)
    assert not r.found and r.searched > 0
    with pytest.raises(ValueError):
        positive_cone_membership(SINK, [(1, "nope", 0)])


def test_sequence_terms_examples():
    t = sequence_terms(R2, 2)
    assert t.kernel_zero
    assert t.cokernel_battery.eval_sigma_1 == AbelianGroup()
    assert all(p.is_zero() for p in t.cokernel_battery.modp_profiles)
    t = sequence_terms(R2, 3)
    assert t.kernel_zero
    prof = {p.key(): p for p in t.cokernel_battery.modp_profiles}
    assert prof[(3, -1)].free_rank == 0 and prof[(3, -1)].torsion_dim == 1
    assert prof[(3, 2)].dim == 1 and prof[(3, 1)].dim == 0
    t = sequence_terms(R2, 0)
    assert t.kernel_zero and t.kernel_detail == ()
    assert first_battery_mismatch(t.cokernel_battery, invariant_battery(bf_graded(R2).module)) is None
    with pytest.raises(ValueError):
        sequence_terms(R2, -1)


def test_vdb_examples():
    for g, group in ((R1, AbelianGroup((), 1)), (R2, AbelianGroup()), (C2, AbelianGroup((), 1))):
        r = vdb_check(g)
        assert r["passed"]
        assert r["cokernel"]["graded"] == group.to_json()
        assert r["kernel"]["graded"] == group.to_json()


def test_point_evaluations_shape():
    out = point_evaluations(R2)
    assert set(out) == {"sigma_1", "sigma_minus_1"}


def test_corpus_properties():
    for g in generate_corpus(CorpusSpec(2, 2)):
        assert purity_and_injectivity_check(g).passed
        assert nonvanishing_check(g).passed
        assert class_map_kernel_check(g, 4)["passed"]
        assert vdb_check(g)["passed"]
        assert forget_grading_check(g)
        for m in range(2, 10):
            assert sequence_terms(g, m).kernel_zero
