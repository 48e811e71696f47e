"""Random automorphisms of F_n with known filtration level.

Generating sets of A(k) are unknown for k >= 2, so every sample is built
constructively: transvections ``x_i -> x_i c`` with ``c`` a left-normed
commutator of prescribed weight, commutators of lower samples, and
conjugation by Nielsen maps (each A(k) is normal in Aut F_n).
"""
from __future__ import annotations

import random

from .freegroup import (Automorphism, Word, aut_commutator, inner, is_identity_map, left_normed,
                        nielsen, transvection)


def random_word(rng: random.Random, n: int, length: int, avoid: int | None = None) -> Word:
    """Reduced word of at most ``length`` letters, never using ``x_avoid``."""
    gens = [g for g in range(1, n + 1) if g != avoid]
    while True:
        w = Word.from_units(n, [rng.choice(gens) * rng.choice((1, -1)) for _ in range(length)])
        if not w.is_identity():
            return w


def random_commutator(rng: random.Random, n: int, weight: int, avoid: int | None = None,
                      max_len: int = 1) -> Word:
    """Nontrivial left-normed commutator of ``weight`` random words."""
    while True:
        parts = [random_word(rng, n, rng.randint(1, max_len), avoid) for _ in range(weight)]
        c = left_normed(parts)
        if not c.is_identity():
            return c


def random_nielsen(rng: random.Random, n: int) -> Automorphism:
    i, j = rng.sample(range(1, n + 1), 2)
    return nielsen(rng.choice([f"P{min(i, j)}{max(i, j)}", f"I{i}", f"M{i}{j}"]), n)


def _conjugate(rng: random.Random, a: Automorphism, depth: int) -> Automorphism:
    for _ in range(depth):
        a = a.conj(random_nielsen(rng, a.n))
    return a


def sample_inner(rng: random.Random, n: int, length: int = 4) -> Automorphism:
    return inner(random_word(rng, n, length))


def _weighted_transvection(rng: random.Random, n: int, weight: int) -> Automorphism:
    i = rng.randint(1, n)
    return transvection(n, i, random_commutator(rng, n, weight, avoid=i))


def sample_ia(rng: random.Random, n: int) -> Automorphism:
    """IA element ``x_i -> x_i [x_j, x_k]``, usually outside Inn . A(2)."""
    i, j, k = rng.sample(range(1, n + 1), 3)
    return transvection(n, i, left_normed([Word.gen(n, j), Word.gen(n, k)]))


def sample_a2(rng: random.Random, n: int) -> Automorphism:
    """Element of A(2): weight-3 transvection, possibly conjugated, or a commutator of IA maps."""
    kind = rng.randrange(3)
    if kind == 0:
        return _weighted_transvection(rng, n, 3)
    if kind == 1:
        return _conjugate(rng, _weighted_transvection(rng, n, 3), 1)
    return _nontrivial(lambda: aut_commutator(sample_ia(rng, n), sample_ia(rng, n)))


def _nontrivial(make) -> Automorphism:
    while True:
        a = make()
        if not is_identity_map(a.forward):
            return a


def sample_a4(rng: random.Random, n: int) -> Automorphism:
    """Element of A(4): weight-5 transvection or a commutator of A(2) samples."""
    if rng.randrange(2):
        return _weighted_transvection(rng, n, 5)
    return _nontrivial(lambda: aut_commutator(_weighted_transvection(rng, n, 3),
                                              _weighted_transvection(rng, n, 3)))


def sample_e1(rng: random.Random, n: int) -> Automorphism:
    """Product of an inner automorphism and an A(2) sample."""
    if rng.randrange(2):
        return sample_inner(rng, n, 3) * sample_a2(rng, n)
    return sample_a2(rng, n) * sample_inner(rng, n, 3)


def sample_non_ia(rng: random.Random, n: int) -> Automorphism:
    return random_nielsen(rng, n)
