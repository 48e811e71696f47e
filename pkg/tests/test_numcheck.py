import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import words
from fricke import numcheck as nc
from fricke.charpoly import CharPolynomial
from fricke.freegroup import RankMismatch, Word, multiply, parse_word
from fricke.graded import horowitz_quadratic, relations_deg2
from fricke.numcheck import (FAMILY_PARAMS, FAMILY_PLACEMENT, Mat2, NotSL2, Representation,
                             SingularParameter, eval_word, identity_check, lemma_matrix,
                             poly_coefficients, random_representation, rho_family, unipotent,
                             vanishing_order)
from fricke.reduce import trace_reduce

F = Fraction


def test_mat2_requires_determinant_one():
    with pytest.raises(NotSL2):
        Mat2(1, 1, 1, 1)
    m = unipotent(F(3), F(2, 5))
    assert m.a * m.d - m.b * m.c == 1


def test_family_examples():
    r = rho_family("2", 3, dict(k=2, s=F(1, 3), l=-1, t=F(2, 7), m=0, u=1), (1, 2, 3))
    k, s = 2, F(1, 3)
    assert r.images[0].entries() == (1 - k * s, k * k * s, -s, 1 + k * s)
    xy = eval_word(r, parse_word("x1 x2", 3)).trace() - 2
    assert xy == -(2 - (-1)) ** 2 * s * F(2, 7)
    s = F(3, 5)
    r = rho_family("1", 3, dict(s=s, l=1, t=2, m=3, u=4), (1, 2, 3))
    assert eval_word(r, Word.gen(3, 1)).trace() - 2 == s * s / (1 - s)


def test_family_errors():
    with pytest.raises(SingularParameter):
        rho_family("1", 3, dict(s=1, l=1, t=1, m=1, u=1), (1, 2, 3))
    with pytest.raises(ValueError):
        rho_family("2", 3, dict(k=0, s=1, l=1, t=1, m=1, u=1), (1, 1, 2))
    with pytest.raises(ValueError):
        rho_family("2", 3, dict(k=0, s=1, l=1, t=1, m=1, u=1), (1, 2, 4))
    with pytest.raises(ValueError):
        rho_family("12", 3, {}, ())


@pytest.mark.parametrize("fid", sorted(FAMILY_PARAMS))
def test_every_family_is_sl2(fid):
    rng = random.Random(fid)
    n = max(5, len(FAMILY_PLACEMENT[fid]))
    for _ in range(10):
        params = {k: nc.random_rational(rng) for k in FAMILY_PARAMS[fid]}
        place = tuple(rng.sample(range(1, n + 1), len(FAMILY_PLACEMENT[fid])))
        try:
            r = rho_family(fid, n, params, place)
        except SingularParameter:
            continue
        for m in r.images:
            assert m.a * m.d - m.b * m.c == 1


def test_eval_word_examples():
    r = random_representation(2, random.Random(0))
    assert eval_word(r, Word.identity(2)) == Mat2.identity()
    assert eval_word(r, parse_word("x1 x1^-1", 2)) == Mat2.identity()
    with pytest.raises(RankMismatch):
        eval_word(r, Word.gen(3, 1))


@given(words(3), words(3), st.integers(0, 2 ** 32))
def test_trace_is_cyclic(u, v, seed):
    r = random_representation(3, random.Random(seed))
    assert eval_word(r, multiply(u, v)).trace() == eval_word(r, multiply(v, u)).trace()


@given(words(3), st.integers(0, 2 ** 32))
def test_products_stay_in_sl2(w, seed):
    m = eval_word(random_representation(3, random.Random(seed)), w)
    assert m.a * m.d - m.b * m.c == 1


def test_identity_check_examples():
    w = parse_word("x1 x2^-1 x3 x2", 3)
    assert identity_check(trace_reduce(w) - trace_reduce(w), 20).ok
    assert identity_check(horowitz_quadratic(3), 100, seed=3).ok
    for r in list(relations_deg2(4))[:4]:
        assert identity_check(r.poly, 100, seed=5).ok
    bad = identity_check(CharPolynomial.var(3, 1) - 2, 10)
    assert not bad.ok and bad.failures[0]["trial"] == 0


def test_identity_check_is_deterministic():
    p = CharPolynomial.var(3, 1, 2) - CharPolynomial.var(3, 1)
    a = identity_check(p, 8, seed=11).to_json_obj()
    b = identity_check(p, 8, seed=11, threads=3).to_json_obj()
    assert a == b


def test_interpolation():
    assert poly_coefficients(lambda s: 3 * s ** 2 - s + 5, 3) == [5, -1, 3, 0]
    assert vanishing_order(lambda s: s ** 4 - 2 * s ** 5, 6) == 4
    assert vanishing_order(lambda s: 0 * s, 2) == 3


def test_lemma_matrix_square():
    co = poly_coefficients(lambda s: (lemma_matrix(s) ** 2).trace(), 2)
    assert co == [2, 4, 1]


def test_shrinking_finds_minimal_witness():
    # a deliberately false identity: tr(xy) = tr(x) tr(y)
    fake = lambda tr, x, y: tr(x, y) - tr(x) * tr(y)
    res = nc._identity_check("fake", 2, fake, 5, 0, 1)
    assert not res.ok
    for f in res.failures:
        assert sum(len(w.split()) for w in f["words"]) <= 2


def test_lemma_suite_small():
    rep = nc.lemma_suite(seed=2, trials=5)
    assert rep.ok, [c.name for c in rep.checks if not c.ok]
    names = rep.by_name()
    assert "primed_four_block_regrouped" in names and "commutator_table" in names


def test_table_mutation_is_caught(monkeypatch):
    table = nc._commutator_table()
    table[("b", "a", "i")] = lambda e, s, t, u: (1, -2 * e * s * t * u + e * s * s * t, -2 * e * s * t * u, 1)
    monkeypatch.setattr(nc, "_commutator_table", lambda: table)
    assert not nc._commutator_table_check(3, 0, 1).ok


def test_relations_suite():
    rep = nc.relations_suite(4, seed=1, trials=10)
    assert rep.ok
    assert rep.by_name()["relations_vanish"].trials == 140
