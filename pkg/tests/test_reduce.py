import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import units, words
from fricke import reduce as R
from fricke.charpoly import CharPolynomial
from fricke.freegroup import Word, commutator, invert, multiply, parse_word
from fricke.numcheck import char_values, eval_word, random_representation
from fricke.reduce import canonical, expand_vogt, trace_reduce, trace_reduce_primed

t = lambda n, *ix: CharPolynomial.var(n, *ix)
tp = lambda n, *ix: CharPolynomial.var(n, *ix, primed=True)


def test_small_examples():
    assert trace_reduce(Word.identity(2)) == CharPolynomial.const(2, 2)
    assert trace_reduce(parse_word("x1 x2^-1", 2)) == t(2, 1) * t(2, 2) - t(2, 1, 2)
    assert trace_reduce(parse_word("x2 x1 x3", 3)) == (
        t(3, 1) * t(3, 2, 3) + t(3, 2) * t(3, 1, 3) + t(3, 3) * t(3, 1, 2)
        - t(3, 1) * t(3, 2) * t(3, 3) - t(3, 1, 2, 3))
    assert trace_reduce(parse_word("x1^2", 2)) == t(2, 1) ** 2 - 2
    c = commutator(Word.gen(2, 1), Word.gen(2, 2))
    assert trace_reduce(c) == (t(2, 1) ** 2 + t(2, 2) ** 2 + t(2, 1, 2) ** 2
                               - t(2, 1) * t(2, 2) * t(2, 1, 2) - 2)


def test_four_letter_vogt_instance():
    n = 4
    # the instance x = x1, y = x2, z = x3, w = x4 of the four-block expansion
    tr = lambda s: trace_reduce(parse_word(s, n))
    two = (tr("x1") * tr("x2 x3 x4") + tr("x2") * tr("x3 x4 x1") + tr("x3") * tr("x4 x1 x2")
           + tr("x4") * tr("x1 x2 x3") + tr("x1 x2") * tr("x3 x4") - tr("x1 x3") * tr("x2 x4")
           + tr("x1 x4") * tr("x2 x3") - tr("x1") * tr("x2") * tr("x3 x4")
           - tr("x2") * tr("x3") * tr("x1 x4") - tr("x1") * tr("x4") * tr("x2 x3")
           - tr("x3") * tr("x4") * tr("x1 x2") + tr("x1") * tr("x2") * tr("x3") * tr("x4"))
    assert 2 * tr("x1 x2 x3 x4") == two


def test_primed_examples():
    assert trace_reduce_primed(Word.gen(2, 1)) == tp(2, 1)
    c = commutator(Word.gen(2, 1), Word.gen(2, 2))
    X, Y, XY = tp(2, 1), tp(2, 2), tp(2, 1, 2)
    assert trace_reduce_primed(c) == X ** 2 + Y ** 2 + XY ** 2 - 2 * (X * Y + X * XY + Y * XY) - X * Y * XY
    assert trace_reduce_primed(parse_word("x1 x2^-1", 2)) == X * Y + 2 * X + 2 * Y - XY


def test_canonical_is_rotation_and_inversion_invariant():
    w = (1, -2, 3, 2)
    rots = [w[r:] + w[:r] for r in range(len(w))]
    inv = tuple(-u for u in reversed(w))
    assert len({canonical(r) for r in rots} | {canonical(inv)}) == 1


def test_expand_vogt_rejects_bad_blocks():
    with pytest.raises(ValueError):
        expand_vogt(parse_word("x1 x2 x3", 3), (1, 1, 1, 0))


def test_termination_measure(monkeypatch):
    monkeypatch.setattr(R, "CHECK_MEASURE", True)
    R.clear_cache()
    try:
        rng = random.Random(4)
        for _ in range(200):
            trace_reduce(Word.from_units(4, [rng.choice((1, -1)) * rng.randint(1, 4) for _ in range(9)]))
    finally:
        R.clear_cache()


@given(words(4, max_size=8), st.integers(0, 2 ** 32))
def test_matches_matrix_trace(w, seed):
    r = random_representation(4, random.Random(seed))
    assert trace_reduce(w).evaluate(char_values(r)) == eval_word(r, w).trace()


@given(words(3, max_size=5), words(3, max_size=5))
def test_conjugation_invariance(u, w):
    assert trace_reduce(multiply(multiply(u, w), invert(u))) == trace_reduce(w)


@given(words(3, max_size=7))
def test_inversion_invariance(w):
    assert trace_reduce(invert(w)) == trace_reduce(w)


@given(units(3, 1, 7))
def test_cyclic_invariance(u):
    base = trace_reduce(Word.from_units(3, u))
    for r in range(1, len(u)):
        assert trace_reduce(Word.from_units(3, u[r:] + u[:r])) == base


@given(words(4, max_size=8))
def test_denominators_are_powers_of_two(w):
    for c in trace_reduce(w).terms.values():
        d = Fraction(c).denominator
        assert d & (d - 1) == 0


@given(words(4, max_size=8))
def test_primed_has_no_constant(w):
    assert trace_reduce_primed(w).constant_term() == 0


@given(words(3, 1, 3), words(3, 1, 3))
def test_primed_product_plus_inverse(x, y):
    p = lambda w: trace_reduce_primed(w)
    X, Y = p(x), p(y)
    assert p(multiply(x, y)) + p(multiply(x, invert(y))) - 2 * X - 2 * Y - X * Y == 0


@given(units(4, 4, 7), st.sampled_from([(2, 1, 1, 1), (1, 2, 1, 1), (1, 1, 2, 1)]))
def test_any_block_split_agrees_on_values(u, sizes):
    if sum(sizes) != len(u):
        sizes = (len(u) - 3, 1, 1, 1)
    w = Word.from_units(4, u)
    if len(w) != len(u):
        return
    r = random_representation(4, random.Random(len(u)))
    assert expand_vogt(w, sizes).evaluate(char_values(r)) == 2 * eval_word(r, w).trace()
