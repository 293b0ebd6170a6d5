import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lkk.group import Group
from lkk.intmat import IntMatrix
from lkk.laurent import (
    FieldLaurent,
    FieldLaurentMatrix,
    GroupRingElement,
    InjectiveSolver,
    Laurent,
    LaurentMatrix,
    ONE,
    SIGMA,
    ZERO,
    evaluate_at_unit,
    gcd_of_maximal_minors,
    laurent_det,
    laurent_gcd,
    parse_laurent,
    resultant,
    snf_over_pid,
    specialize_mod_p,
    to_field,
    window_matrix,
)

from snf_checks import pid_snf_problems, random_laurent_matrix

laurents = st.builds(
    lambda low, cs: Laurent(low, cs),
    st.integers(-3, 3),
    st.lists(st.integers(-4, 4), max_size=4),
)


def L(text):
    return parse_laurent(text)


def test_ring_examples():
    a = ONE - SIGMA * 2
    b = ONE + SIGMA * 2
    assert a * b == ONE - SIGMA ** 2 * 4
    assert a * ONE == a
    assert SIGMA * SIGMA ** -1 == ONE


def test_text_round_trip_and_format():
    x = Laurent.from_dict({-2: 3, 0: -1, 5: 7})
    assert x.text() == "3*s^-2 + -1*s^0 + 7*s^5"
    assert parse_laurent(x.text()) == x
    assert parse_laurent("0") == ZERO
    with pytest.raises(ValueError):
        parse_laurent("3*x^2")


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a - a == ZERO


@given(laurents)
def test_text_round_trip_property(a):
    assert parse_laurent(a.text()) == a


def test_group_ring_with_torsion():
    g = Group(0, (2,))
    t = GroupRingElement.element(g, (1,))
    assert t * t == GroupRingElement.element(g, (0,))
    with pytest.raises(ValueError):
        t + GroupRingElement.element(Group(0, (3,)), (1,))
    two = Group(1, (2,))
    x = GroupRingElement.element(two, (1, 1), 3)
    assert x.shift((1, 1)) == GroupRingElement.element(two, (2, 0), 3)


def test_evaluate_at_unit_examples():
    m = LaurentMatrix.from_rows([[ONE - SIGMA * 2]])
    assert evaluate_at_unit(m, 1) == IntMatrix.from_rows([[-1]])
    assert evaluate_at_unit(m, -1) == IntMatrix.from_rows([[3]])
    for u in (1, -1):
        assert evaluate_at_unit(LaurentMatrix.identity(3), u) == IntMatrix.identity(3)
    with pytest.raises(ValueError):
        evaluate_at_unit(m, 2)


def test_specialize_mod_p_examples():
    m = LaurentMatrix.from_rows([[ONE - SIGMA * 2]])
    assert specialize_mod_p(m, 2).data[0][0].is_unit()
    three = specialize_mod_p(m, 3).data[0][0]
    assert three == FieldLaurent(3, 0, (1, 1))
    z = specialize_mod_p(LaurentMatrix(Group(), 2, 2), 5)
    assert z.is_zero()
    with pytest.raises(ValueError):
        specialize_mod_p(m, 4)
    with pytest.raises(ValueError):
        specialize_mod_p(m, 3, 3)
    assert specialize_mod_p(m, 5, 2).data[0][0] == (1 - 4) % 5


@given(st.integers(0, 10 ** 6), st.sampled_from([1, -1, 2, 3]))
def test_specialisations_commute_with_products(seed, u):
    rng = random.Random(seed)
    a = random_laurent_matrix(rng, 2, 3)
    b = random_laurent_matrix(rng, 3, 2)
    if u in (1, -1):
        assert evaluate_at_unit(a @ b, u) == evaluate_at_unit(a, u) @ evaluate_at_unit(b, u)
    p = 5
    lhs = specialize_mod_p(a @ b, p, u)
    rhs = specialize_mod_p(a, p, u) @ specialize_mod_p(b, p, u)
    assert lhs == IntMatrix.from_rows([[x % p for x in r] for r in rhs.data], rhs.cols)
    assert specialize_mod_p(a @ b, p) == specialize_mod_p(a, p) @ specialize_mod_p(b, p)


def check_pid_snf(fm):
    assert pid_snf_problems(fm) == []
    return snf_over_pid(fm)


def test_pid_snf_examples():
    m = LaurentMatrix.from_rows([[ONE, -SIGMA], [-SIGMA, ONE]])
    res = check_pid_snf(to_field(m, 0))
    assert res.diagonal[0] == FieldLaurent.const(0, 1)
    assert res.diagonal[1] == FieldLaurent(0, 0, (Fraction(1), 0, Fraction(-1))) * FieldLaurent.const(0, -1)
    res = check_pid_snf(to_field(LaurentMatrix.identity(3), 7))
    assert res.d == FieldLaurentMatrix.identity(7, 3)
    res = check_pid_snf(to_field(LaurentMatrix.from_rows([[ONE - SIGMA * 2]]), 2))
    assert res.diagonal[0] == FieldLaurent.const(2, 1)


@given(st.integers(0, 10 ** 6), st.sampled_from([0, 2, 3, 5]))
def test_pid_snf_property(seed, modulus):
    rng = random.Random(seed)
    m = random_laurent_matrix(rng, rng.randint(0, 4), rng.randint(0, 4))
    check_pid_snf(to_field(m, modulus))


def test_gcd_of_maximal_minors_examples():
    assert gcd_of_maximal_minors(LaurentMatrix.from_rows([[ONE - SIGMA * 2]])) == ONE - SIGMA * 2
    m = LaurentMatrix.from_rows([[ONE, -SIGMA], [-SIGMA, ONE]])
    assert gcd_of_maximal_minors(m) == ONE - SIGMA ** 2
    assert gcd_of_maximal_minors(LaurentMatrix.from_rows([[ONE - SIGMA, Laurent.const(2)]])) == ONE


@given(st.integers(0, 10 ** 6))
def test_gcd_of_minors_invariant_under_unitriangular(seed):
    rng = random.Random(seed)
    m = random_laurent_matrix(rng, 2, 3)
    t = LaurentMatrix.from_rows([[SIGMA ** rng.randint(-2, 2), random_laurent_matrix(rng, 1, 1).data[0][0]],
                                 [ZERO, -ONE]])
    assert gcd_of_maximal_minors(t @ m) == gcd_of_maximal_minors(m)


def test_gcd_and_resultant():
    assert laurent_gcd(L("1*s^0 + -1*s^2"), L("1*s^0 + -1*s^1")) == ONE - SIGMA
    assert resultant(ONE - SIGMA * 2, ONE + SIGMA) == 3 or resultant(ONE - SIGMA * 2, ONE + SIGMA) == -3
    assert laurent_det(LaurentMatrix.from_rows([[ONE, -SIGMA], [-SIGMA, ONE]])) == ONE - SIGMA ** 2


def test_injective_solver():
    x = LaurentMatrix.from_rows([[ONE, -SIGMA], [-SIGMA, ONE], [ZERO, SIGMA]])
    s = InjectiveSolver(x)
    y = [SIGMA + 3, ONE - SIGMA ** 2]
    assert s.solve(x.apply(y)) == y
    assert s.solve([ONE, ZERO, ZERO]) is None
    with pytest.raises(ValueError):
        InjectiveSolver(LaurentMatrix.from_rows([[ONE, ONE], [ONE, ONE]]))


def test_window_matrix_layout():
    m = LaurentMatrix.from_rows([[ONE - SIGMA]])
    w = window_matrix(m, 0, 1, 0, 2)
    assert w.to_rows() == [[1, 0], [-1, 1], [0, -1]]
    with pytest.raises(ValueError):
        window_matrix(m, 0, 1, 0, 1)


def test_to_field_rejects_composite_modulus():
    with pytest.raises(ValueError):
        to_field(LaurentMatrix.identity(1), 4)
