import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yangcenter.classical import ClassicalAlgebra
from yangcenter.context import AlgebraContext
from yangcenter.engine import (ModuleElement, TruncationError, VacuumEngine,
                               check_classical_oracle, check_confluence,
                               check_relation_residuals, weight, word_json)

O3 = AlgebraContext(3)
SP4 = AlgebraContext(4, "sp")


@pytest.fixture(scope="module")
def eng():
    return VacuumEngine(O3, K=3, D=3)


def test_basis_word_count(eng):
    # o3 has 3 generators per mode: weights 1, 2, 3 give 3 + (6 + 3) + (10 + 9 + 3) ordered words
    assert len(eng.basis_words()) == 1 + 3 + 9 + 22


def test_normal_form_frozen(eng):
    # t21(-1) t12(-1) 1; the h^0 part is classical, the h^1 part is pinned by the
    # vanishing relation residuals below
    got = eng.nf_word(((1, 1, 0), (1, 0, 1)))
    assert got == {
        (0, ((1, 0, 1), (1, 1, 0))): Fraction(1),
        (0, ((2, 0, 0),)): Fraction(-1),
        (1, ((1, 1, 0), (2, 0, 1))): Fraction(-1),
        (1, ((1, 0, 1), (2, 1, 0))): Fraction(-1),
    }


def test_vacuum_is_annihilated(eng):
    one = eng.element(())
    for r in (1, 2, 3):
        for i in range(3):
            for j in range(3):
                assert eng.act_mode(r, i, j, one).is_zero()


def test_annihilation_leading_term(eng):
    # t21^{(1)} t12^{(-1)} 1 = -t11^{(-1)} 1 + O(h)
    y = eng.act_mode(1, 1, 0, eng.element(((1, 0, 1),)))
    assert y.h_part(0).terms == {(0, ((1, 0, 0),)): Fraction(-1)}


def test_mode_window():
    e = VacuumEngine(O3, K=2, D=2)
    with pytest.raises(TruncationError):
        e.act_mode(e.vmax + 1, 0, 0, e.element(()))
    with pytest.raises(ValueError):
        e.act_mode(0, 0, 0, e.element(()))


def test_translation(eng):
    x = eng.apply_D(eng.element(((1, 0, 1),)))
    assert x == eng.element(((2, 0, 1),))


@pytest.mark.parametrize("ctx", [O3, SP4], ids=["o3", "sp4"])
def test_classical_oracle(ctx):
    assert check_classical_oracle(ctx, max_modes=3, max_weight=3)["status"] == "pass"


@pytest.mark.parametrize("ctx", [O3, SP4], ids=["o3", "sp4"])
def test_relation_residuals_vanish(ctx):
    assert check_relation_residuals(ctx, K=2, D=3)["status"] == "pass"


def test_extended_mode_is_not_a_normal_form():
    # without the unitarity quotient the leftover equations do not reduce to zero
    assert check_relation_residuals(O3, K=2, D=3, mode="extended")["status"] == "fail"


def test_confluence():
    assert check_confluence(O3, samples=100, seed=3, K=3, D=3)["status"] == "pass"


def test_word_json():
    assert word_json(((2, 0, 1), (1, 2, 2))) == [[-2, 1, 2], [-1, 3, 3]]


# ---------------------------------------------------------------- properties

letters = st.tuples(st.integers(1, 2), st.integers(0, 2), st.integers(0, 2))


@given(st.lists(letters, min_size=2, max_size=3), st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_rewriting_order_independent(word, seed):
    e = VacuumEngine(O3, K=3, D=4)
    w = tuple(word)
    a = e.nf_word(w)
    b = {k: v for k, v in e.nf_word_random(w, random.Random(seed)).items() if v}
    assert a == b


@given(st.lists(letters, max_size=3))
@settings(max_examples=60, deadline=None)
def test_h0_part_is_classical(word):
    e = VacuumEngine(O3, K=1, D=6)
    w = tuple(word)
    got = {(m, 0): v for (hp, m), v in e.normal_form(w).terms.items()}
    assert got == ClassicalAlgebra(O3).pbw(w).terms


@given(st.lists(letters, max_size=2), st.lists(letters, max_size=2))
@settings(max_examples=40, deadline=None)
def test_product_is_associative_with_words(a, b):
    e = VacuumEngine(O3, K=2, D=4)
    x, y = e.element(tuple(a)), e.element(tuple(b))
    if weight(tuple(a) + tuple(b)) > 4:
        return
    assert e.product(x, y) == e.element(tuple(a) + tuple(b))


@pytest.mark.parametrize("ctx", [O3, SP4], ids=["o3", "sp4"])
def test_commutator_table_is_homogeneous(ctx):
    # deg h = 1 and deg t^{(-r)} = -r: every output has weight - hp = r + s, so
    # equal-weight outputs of length two carry at least one h
    e = VacuumEngine(ctx, K=4, D=6)
    gens = [g for r in (1, 2, 3) for g in e.generators(r)]
    for a in gens:
        for b in gens:
            for (hp, w), _ in e.comm(a, b).items():
                assert weight(w) - hp == a[0] + b[0]
                if len(w) == 2 and weight(w) == a[0] + b[0]:
                    assert hp >= 1


def test_trivial_relations_give_polynomial_module():
    e = VacuumEngine(O3, K=3, D=4, trivial=True)
    gens = [g for r in (1, 2) for g in e.generators(r)]
    assert all(not e.comm(a, b) for a in gens for b in gens)
    assert e.nf_word(((1, 1, 0), (1, 0, 1))) == {(0, ((1, 0, 1), (1, 1, 0))): Fraction(1)}
