import random

import pytest
from hypothesis import given, settings, strategies as st

from lkk.bowen_franks import bf_graded, ungraded_relation_matrix
from lkk.corpus import CorpusSpec, generate_corpus
from lkk.intmat import AbelianGroup, IntMatrix, cokernel_abelian
from lkk.laurent import Laurent, LaurentMatrix, ONE, SIGMA, ZERO, evaluate_at_unit
from lkk.modules import (
    BASE_LAURENT,
    BASE_QLAURENT,
    BASE_Z,
    EVALM1_NAME,
    FpModule,
    PointedModule,
    UnstableTruncation,
    base_change,
    cokernel_module,
    first_battery_mismatch,
    free_module,
    invariant_battery,
    is_zero_module,
    kernel_of_one_minus_sigma,
    module_report,
    prune,
    quotient_by_one_minus_sigma,
    tensor_over_base,
)


def cyclic(x):
    return cokernel_module(LaurentMatrix.from_rows([[x]]), ["v"])


def random_entry(rng, deg=1, coeff=2):
    lo = rng.randint(-deg, deg)
    return Laurent(lo, [rng.randint(-coeff, coeff) for _ in range(rng.randint(1, 2))])


def random_presentation(rng, gens=None, rels=None):
    g = rng.randint(1, 2) if gens is None else gens
    r = rng.randint(g, g + 1) if rels is None else rels
    X = LaurentMatrix.from_rows([[random_entry(rng) for _ in range(r)] for _ in range(g)], cols=r)
    return cokernel_module(X, [f"g{i}" for i in range(g)])


def test_cokernel_module_examples():
    m = cyclic(ONE - SIGMA)
    assert m.base == BASE_LAURENT and m.ngens == 1 and m.nrels == 1
    assert free_module(["v"]).nrels == 0
    assert cokernel_module(IntMatrix.from_rows([[2]]), ["x"]).base == BASE_Z
    with pytest.raises(ValueError):
        cokernel_module(LaurentMatrix.from_rows([[ONE]]), ["a", "b"])
    with pytest.raises(ValueError):
        PointedModule(m, (ONE, ONE))


def test_base_change_examples():
    r2 = cyclic(ONE - SIGMA * 2)
    assert cokernel_abelian(base_change(r2, ("eval", 1)).relations) == AbelianGroup()
    assert cokernel_abelian(base_change(r2, ("eval", -1)).relations) == AbelianGroup((3,))
    free = free_module(["v"])
    for u in (1, -1):
        assert cokernel_abelian(base_change(free, ("eval", u)).relations) == AbelianGroup((), 1)
    assert base_change(free, ("rational",)).base == BASE_QLAURENT
    with pytest.raises(ValueError):
        base_change(r2, ("eval", 2))
    with pytest.raises(ValueError):
        base_change(r2, ("mod", 4))
    with pytest.raises(ValueError):
        base_change(r2, ("mod", 3, 3))
    with pytest.raises(ValueError):
        base_change(base_change(r2, ("eval", 1)), ("eval", 1))


def test_tensor_examples():
    q = cyclic(ONE - SIGMA)
    assert first_battery_mismatch(invariant_battery(tensor_over_base(q, q)), invariant_battery(q)) is None
    r2 = cyclic(ONE - SIGMA * 2)
    unit = free_module(["1"])
    assert first_battery_mismatch(invariant_battery(tensor_over_base(unit, r2)), invariant_battery(r2)) is None
    t = invariant_battery(tensor_over_base(r2, cyclic(ONE + SIGMA)))
    z3 = cokernel_module(LaurentMatrix.from_rows([[ONE + SIGMA, Laurent.const(3)]]), ["v"])
    assert first_battery_mismatch(t, invariant_battery(z3)) is None
    assert t.eval_sigma_minus_1 == AbelianGroup((3,)) and t.eval_sigma_1 == AbelianGroup()
    with pytest.raises(ValueError):
        tensor_over_base(r2, base_change(r2, ("eval", 1)))


def test_quotient_examples():
    assert quotient_by_one_minus_sigma(cyclic(ONE - SIGMA)) == AbelianGroup((), 1)
    assert quotient_by_one_minus_sigma(cyclic(ONE - SIGMA * 2)) == AbelianGroup()
    assert quotient_by_one_minus_sigma(cyclic(ONE - SIGMA ** 2)) == AbelianGroup((), 1)
    with pytest.raises(ValueError):
        quotient_by_one_minus_sigma(base_change(cyclic(ONE), ("eval", 1)))


def test_kernel_examples():
    assert kernel_of_one_minus_sigma(cyclic(ONE - SIGMA)).group == AbelianGroup((), 1)
    assert kernel_of_one_minus_sigma(cyclic(ONE - SIGMA * 2)).group == AbelianGroup()
    assert kernel_of_one_minus_sigma(free_module(["v"])).group == AbelianGroup()
    assert kernel_of_one_minus_sigma(cyclic(ONE - SIGMA ** 2)).group == AbelianGroup((), 1)


def test_kernel_reports_instability():
    with pytest.raises(UnstableTruncation) as info:
        kernel_of_one_minus_sigma(cyclic(ONE - SIGMA), bound=1)
    assert "unstable at bound 1" in str(info.value)


def test_is_zero_examples():
    assert is_zero_module(cyclic(ONE)).status == "yes"
    v = is_zero_module(cyclic(ONE - SIGMA * 2))
    assert v.status == "no" and v.witness == f"{EVALM1_NAME} gives Z/3"
    m = cokernel_module(LaurentMatrix.from_rows([[Laurent.const(2), SIGMA - ONE]]), ["v"])
    v = is_zero_module(m)
    assert v.status == "no" and "Z/2" in v.witness
    assert is_zero_module(free_module(["v"])).status == "no"
    both = cokernel_module(LaurentMatrix.from_rows([[ONE - SIGMA * 3, ONE - SIGMA * 2]]), ["v"])
    v = is_zero_module(both)
    assert v.status == "yes" and "Fitting ideal contains 1" in v.witness
    z3 = cokernel_module(LaurentMatrix.from_rows([[ONE + SIGMA, ONE - SIGMA * 2]]), ["v"])
    assert is_zero_module(z3).status == "no"


def test_battery_examples():
    b = invariant_battery(cyclic(ONE - SIGMA * 2))
    assert b.eval_sigma_1 == AbelianGroup()
    assert b.eval_sigma_minus_1 == AbelianGroup((3,))
    assert b.rank_over_QLaurent == 0
    assert b.fitting_gcds == (ONE - SIGMA * 2,)
    b = invariant_battery(cyclic(ONE - SIGMA))
    assert b.eval_sigma_1 == AbelianGroup((), 1)
    assert b.eval_sigma_minus_1 == AbelianGroup((2,))
    assert b.rank_over_QLaurent == 0
    b = invariant_battery(free_module(["v"]))
    assert b.eval_sigma_1 == b.eval_sigma_minus_1 == AbelianGroup((), 1)
    assert b.rank_over_QLaurent == 1
    assert b.fitting_gcds == (ZERO,)
    keys = [p.key() for p in b.modp_profiles]
    assert keys == sorted(keys)


def test_battery_primes_include_eval_torsion():
    b = invariant_battery(cyclic(ONE - SIGMA * 16), prime_bound=3)
    assert 17 in {p.p for p in b.modp_profiles}


def test_module_report_shape():
    rep = module_report(cyclic(ONE - SIGMA * 2))
    assert rep["base"] == "Z[s^±1]"
    assert rep["relations"] == [["1*s^0 + -2*s^1"]]
    assert "battery" in rep


def elementary_change(rng, m: FpModule) -> FpModule:
    X = m.relations
    g, r = X.rows, X.cols
    data = [row[:] for row in X.data]
    labels = list(m.generators)
    op = rng.randrange(5)
    if op == 0 and g > 1:
        i, k = rng.sample(range(g), 2)
        f = random_entry(rng)
        data[i] = [a + f * b for a, b in zip(data[i], data[k])]
    elif op == 1 and r > 1:
        j, k = rng.sample(range(r), 2)
        f = random_entry(rng)
        for row in data:
            row[j] = row[j] + f * row[k]
    elif op == 2 and g:
        i = rng.randrange(g)
        u = SIGMA ** rng.randint(-2, 2) * rng.choice([1, -1])
        data[i] = [u * a for a in data[i]]
    elif op == 3:
        for row in data:
            row.append(random_entry(rng))
        data.append([ZERO] * r + [SIGMA ** rng.randint(-1, 1)])
        labels.append(f"x{len(labels)}")
        r += 1
    else:
        for row in data:
            row.append(ZERO)
        r += 1
    return cokernel_module(LaurentMatrix.from_rows(data, cols=r), labels)


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_battery_invariant_under_presentation_changes(seed):
    rng = random.Random(seed)
    m = random_presentation(rng)
    n = m
    for _ in range(3):
        n = elementary_change(rng, n)
    ps = [2, 3, 5]
    assert first_battery_mismatch(invariant_battery(m, primes=ps), invariant_battery(n, primes=ps)) is None
    assert first_battery_mismatch(invariant_battery(n, primes=ps), invariant_battery(prune(n), primes=ps)) is None


@given(st.integers(0, 10 ** 6))
def test_base_change_functoriality(seed):
    rng = random.Random(seed)
    m = random_presentation(rng)
    for u in (1, -1):
        direct = cokernel_abelian(evaluate_at_unit(m.relations, u))
        assert cokernel_abelian(base_change(m, ("eval", u)).relations) == direct
    b = invariant_battery(m, primes=[3])
    assert b.eval_sigma_1 == cokernel_abelian(evaluate_at_unit(m.relations, 1))
    prof = {p.key(): p for p in b.modp_profiles}
    for u in (1, 2):
        rel = base_change(m, ("mod", 3, u)).relations
        from lkk.laurent import rank_mod_p
        assert prof[(3, u)].dim == m.ngens - rank_mod_p(rel, 3)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_tensor_unit_property(seed):
    m = random_presentation(random.Random(seed))
    unit = free_module(["1"])
    ps = [2, 3]
    assert first_battery_mismatch(invariant_battery(tensor_over_base(m, unit), primes=ps),
                                  invariant_battery(m, primes=ps)) is None


def test_quotient_matches_ungraded_over_corpus():
    for g in generate_corpus(CorpusSpec(2, 2)):
        q = quotient_by_one_minus_sigma(bf_graded(g).module)
        assert q == cokernel_abelian(ungraded_relation_matrix(g)), g.square_adjacency().to_rows()
