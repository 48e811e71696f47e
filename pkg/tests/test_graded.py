import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import words
from fricke.charpoly import CharPolynomial
from fricke.graded import (IncompleteRelations, JetJ3, P_poly, Q_poly, _eliminate, _relation_rows, _s1,
                           _s2, basis_S, basis_T, degree2_monomials, horowitz_quadratic,
                           independence_check, jet3, pair, quadratic_of_product, reduction,
                           relations_deg2)
from fricke.numcheck import identity_check
from fricke.reduce import trace_reduce_primed

tp = lambda n, *ix: CharPolynomial.var(n, *ix, primed=True)
t = lambda n, *ix: CharPolynomial.var(n, *ix)


def test_basis_sizes():
    assert len(basis_T(3)) == 7
    assert [len(basis_S(n)) for n in (2, 3, 4)] == [6, 27, 91]
    assert (len(_s1(3)), len(_s2(3))) == (24, 3)
    assert (len(_s1(4)), len(_s2(4))) == (71, 20)
    for n in range(2, 8):
        assert len(basis_T(n)) == n + comb(n, 2) + comb(n, 3)


def test_basis_order():
    T = basis_T(4)
    assert T == sorted(T, key=lambda v: (len(v), v))
    S = basis_S(4)
    k = len(_s1(4))
    assert set(S[:k]) == set(_s1(4)) and set(S[k:]) == set(_s2(4))


def test_relation_counts():
    assert len(relations_deg2(2)) == 0
    assert [len(relations_deg2(n)) for n in (3, 4)] == [1, 14]
    assert relations_deg2(4).tags() == {"determinant": 10, "whittemore": 4}


def test_three_generator_relation_is_horowitz():
    (rel,) = relations_deg2(3)
    assert rel.tag == "determinant"
    assert rel.poly == 4 * horowitz_quadratic(3)
    s = P_poly(3, 1, 2, 3) - t(3, 1) * t(3, 2) * t(3, 3)
    assert horowitz_quadratic(3) == t(3, 1, 2, 3) ** 2 - s * t(3, 1, 2, 3) + Q_poly(3, 1, 2, 3)
    assert identity_check(horowitz_quadratic(3), 50, seed=1).ok


@pytest.mark.parametrize("n", [3, 4, 5])
def test_relations_in_j2(n):
    for r in relations_deg2(n):
        assert r.primed.graded_part(0).is_zero() and r.primed.graded_part(1).is_zero(), r.label


@pytest.mark.parametrize("n", [3, 4])
def test_relations_vanish(n):
    for r in relations_deg2(n):
        assert identity_check(r.poly, 25, seed=7).ok, r.label


@pytest.mark.parametrize("n,rank", [(2, 0), (3, 1), (4, 14), (5, 79), (6, 294)])
def test_independence(n, rank):
    info = independence_check(n)
    assert info["rank"] == info["expected"] == rank
    assert info["monomials"] - info["S"] == rank


def test_elimination_has_no_pivot_in_s():
    for n in (3, 4, 5):
        red = reduction(n)
        assert not set(red.table) & set(basis_S(n))
        assert set(red.table) | set(basis_S(n)) == set(degree2_monomials(n))


def test_incomplete_relations_are_reported():
    with pytest.raises(IncompleteRelations):
        _eliminate(4, _relation_rows(4, None)[:-1])


def test_jet_examples():
    j = jet3(tp(3, 1))
    assert j.linear == {(1,): 1} and not j.quadratic
    # t123'^2 rewritten through the quadratic relation
    s = P_poly(3, 1, 2, 3) - t(3, 1) * t(3, 2) * t(3, 3)
    other = (s * t(3, 1, 2, 3) - Q_poly(3, 1, 2, 3) - 4 * t(3, 1, 2, 3) + 4).to_primed()
    assert jet3(tp(3, 1, 2, 3) ** 2) == jet3(other)
    # quadratic image of t14' t123' in S2
    j = jet3(tp(4, 1, 4) * tp(4, 1, 2, 3))
    s2 = set(_s2(4))
    assert {k: v for k, v in j.quadratic.items() if k in s2} == {((1, 2), (1, 3, 4)): -1,
                                                               ((1, 3), (1, 2, 4)): 1}


def test_jet_json_round_trip():
    j = jet3(trace_reduce_primed(_w("x1 x2^-1 x3 x1")))
    assert JetJ3.from_json_obj(3, j.to_json_obj()) == j
    assert jet3(trace_reduce_primed(_w("x1 x2^-1", 2))).to_json_obj() == {
        "linear": {"t_1": "2", "t_12": "-1", "t_2": "2"}, "quadratic": {"t_1.t_2": "1"}}


def _w(s, n=3):
    from fricke.freegroup import parse_word
    return parse_word(s, n)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_shuffled_relations_same_jets(n):
    rng = random.Random(n)
    base, shuffled = reduction(n), reduction(n, order_seed=rng.randrange(10 ** 6))
    assert base.table == shuffled.table
    mons = degree2_monomials(n)
    for m in rng.sample(mons, min(40, len(mons))):
        p = tp(n, *m[0]) * tp(n, *m[1])
        assert jet3(p) == jet3(p, order_seed=17)


@given(words(3, max_size=6), words(3, max_size=6))
def test_jet_is_linear(u, v):
    f, g = trace_reduce_primed(u), trace_reduce_primed(v)
    assert jet3(f + g) == jet3(f) + jet3(g)
    assert jet3(3 * f) == jet3(f) + jet3(f) + jet3(f)


@given(words(3, max_size=5), words(3, max_size=5))
def test_jet_of_product(u, v):
    f, g = trace_reduce_primed(u), trace_reduce_primed(v)
    jf, jg = jet3(f), jet3(g)
    q = quadratic_of_product(3, jf.linear, jg.linear)
    assert jet3(f * g).linear == {}
    assert jet3(f * g).quadratic == {k: c for k, c in q.items() if c}
