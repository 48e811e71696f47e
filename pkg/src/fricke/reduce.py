"""Trace reduction: rewrite ``tr w`` into basic characters with <= 3 indices.

The rewriting works on cyclic words of signed unit letters (``-2`` is
``x2^-1``).  Every word is first brought to a canonical representative of
its class under rotation and inversion, which the trace does not see.  Then
exactly one rule fires:

* a negative letter ``g^-1``, rotated to the end:
  ``tr(u g^-1) = tr(u) t_g - tr(u g)``;
* a repeated generator ``x u x v`` (shortest gap first):
  ``tr(xuxv) = tr(xu) tr(xv) - tr(u v^-1)``;
* four or more distinct positive letters: the four-block Vogt expansion
  with blocks (first, second, third letter, rest);
* three distinct letters out of order:
  ``tr(ikj) = t_i t_jk + t_j t_ik + t_k t_ij - t_i t_j t_k - t_ijk``.

Each rule strictly lowers (length, negative letters, out-of-order pairs) in
the lexicographic order, which is asserted when ``CHECK_MEASURE`` is set.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Sequence

from .charpoly import (CharPolynomial, add_into, const_raw, mul_raw, scale_raw, shift_raw,
                       var_raw)
from .freegroup import Word

CHECK_MEASURE = bool(os.environ.get("FRICKE_CHECK_MEASURE"))

_MEMO: dict = {}


def clear_cache() -> None:
    _MEMO.clear()


def _free_reduce(units: Sequence[int]) -> tuple:
    out: list = []
    for u in units:
        if out and out[-1] == -u:
            out.pop()
        else:
            out.append(u)
    return tuple(out)


def _cyclic_core(units: tuple) -> tuple:
    units = _free_reduce(units)
    lo, hi = 0, len(units)
    while hi - lo >= 2 and units[lo] == -units[hi - 1]:
        lo += 1
        hi -= 1
    return units[lo:hi]


def _letter_key(u: int) -> tuple:
    return (abs(u), 0 if u > 0 else 1)


def canonical(units: Sequence[int]) -> tuple:
    """Least rotation of ``w`` or ``w^-1`` under (negatives, letter order)."""
    core = _cyclic_core(tuple(units))
    if not core:
        return ()
    inv = tuple(-u for u in reversed(core))
    neg = sum(1 for u in core if u < 0)
    # inversion swaps the counts of positive and negative letters
    cands = []
    for w in (core, inv):
        wneg = neg if w is core else len(core) - neg
        keys = [_letter_key(u) for u in w]
        best = None
        for r in range(len(w)):
            k = keys[r:] + keys[:r]
            if best is None or k < best[0]:
                best = (k, r)
        cands.append(((wneg, best[0]), w[best[1]:] + w[:best[1]]))
    return min(cands)[1]


def _measure(units: tuple) -> tuple:
    neg = sum(1 for u in units if u < 0)
    pos = [u for u in units if u > 0]
    ooo = sum(1 for a in range(len(pos)) for b in range(a + 1, len(pos)) if pos[a] > pos[b])
    return (len(units), neg, ooo)


def _tr(units: tuple, parent: tuple | None = None) -> dict:
    """Unprimed trace polynomial (raw dict) of the cyclic word ``units``."""
    c = canonical(units)
    if CHECK_MEASURE and parent is not None:
        assert _measure(c) < _measure(parent), (c, parent)
    hit = _MEMO.get(c)
    if hit is not None:
        return hit
    res = _rewrite(c)
    _MEMO[c] = res
    return res


def _rewrite(c: tuple) -> dict:
    L = len(c)
    if L == 0:
        return const_raw(2)
    if any(u < 0 for u in c):
        p = next(i for i, u in enumerate(c) if u < 0)
        g = -c[p]
        u = c[p + 1:] + c[:p]
        out = mul_raw(_tr(u, c), var_raw((g,)))
        return add_into(out, _tr(u + (g,), c), -1)
    # all positive from here on
    rep = _repeat_choice(c)
    if rep is not None:
        p, q = rep
        w = c[p:] + c[:p]
        q = (q - p) % L
        x, u, v = w[0], w[1:q], w[q + 1:]
        out = mul_raw(_tr((x,) + u, c), _tr((x,) + v, c))
        uv = u + tuple(-t for t in reversed(v))
        return add_into(out, _tr(uv, c), -1)
    if L >= 4:
        return scale_raw(vogt4(c[0:1], c[1:2], c[2:3], c[3:], parent=c), Fraction(1, 2))
    if L == 3:
        i, j, k = c
        if j < k:
            return var_raw(tuple(c))
        # canonical rotation starts at the least index, so c = (i, k, j) with j < k
        i, k, j = c
        out: dict = {}
        add_into(out, mul_raw(var_raw((i,)), var_raw((j, k))))
        add_into(out, mul_raw(var_raw((j,)), var_raw((i, k))))
        add_into(out, mul_raw(var_raw((k,)), var_raw((i, j))))
        add_into(out, mul_raw(mul_raw(var_raw((i,)), var_raw((j,))), var_raw((k,))), -1)
        add_into(out, var_raw((i, j, k)), -1)
        return out
    if L == 2:
        return var_raw(tuple(sorted(c)))
    return var_raw((c[0],))


def _repeat_choice(c: tuple):
    """Pick occurrences ``p``, ``q`` of one generator: least (gap, generator, p)."""
    L = len(c)
    best = None
    for p in range(L):
        for d in range(1, L):
            q = (p + d) % L
            if c[q] == c[p]:
                key = (d - 1, c[p], p)
                if best is None or key < best[0]:
                    best = (key, (p, q))
                break
    return None if best is None else best[1]


def vogt4(x: tuple, y: tuple, z: tuple, w: tuple, parent: tuple | None = None) -> dict:
    """``2 tr(xyzw)`` as a polynomial, each sub-trace reduced recursively."""
    def t(*blocks):
        return _tr(tuple(u for b in blocks for u in b), parent)

    out: dict = {}
    add_into(out, mul_raw(t(x), t(y, z, w)))
    add_into(out, mul_raw(t(y), t(z, w, x)))
    add_into(out, mul_raw(t(z), t(w, x, y)))
    add_into(out, mul_raw(t(w), t(x, y, z)))
    add_into(out, mul_raw(t(x, y), t(z, w)))
    add_into(out, mul_raw(t(x, z), t(y, w)), -1)
    add_into(out, mul_raw(t(x, w), t(y, z)))
    add_into(out, mul_raw(mul_raw(t(x), t(y)), t(z, w)), -1)
    add_into(out, mul_raw(mul_raw(t(y), t(z)), t(x, w)), -1)
    add_into(out, mul_raw(mul_raw(t(x), t(w)), t(y, z)), -1)
    add_into(out, mul_raw(mul_raw(t(z), t(w)), t(x, y)), -1)
    add_into(out, mul_raw(mul_raw(t(x), t(y)), mul_raw(t(z), t(w))))
    return out


def trace_raw(units: Sequence[int]) -> dict:
    return _tr(tuple(units))


def trace_reduce(w: Word) -> CharPolynomial:
    """Normal form of ``tr w`` in the unprimed basic characters."""
    return CharPolynomial.from_raw(w.n, _tr(w.units()), primed=False)


def trace_reduce_primed(w: Word) -> CharPolynomial:
    """``tr' w = tr w - 2`` in primed coordinates; its constant term is 0."""
    raw = shift_raw(_tr(w.units()), 2)
    add_into(raw, const_raw(-2))
    return CharPolynomial.from_raw(w.n, raw, primed=True)


def split_blocks(units: Sequence[int], sizes: Sequence[int]) -> tuple:
    if len(sizes) != 4 or any(s < 1 for s in sizes) or sum(sizes) != len(units):
        raise ValueError("need four nonempty blocks covering the word")
    out, pos = [], 0
    for s in sizes:
        out.append(tuple(units[pos:pos + s]))
        pos += s
    return tuple(out)


def expand_vogt(w: Word, sizes: Sequence[int]) -> CharPolynomial:
    """``2 tr w`` expanded with a forced top-level split into four blocks.

    Comparing this with ``2 * trace_reduce(w)`` (or with another split, or
    another rotation) yields an element of the relation ideal.
    """
    x, y, z, v = split_blocks(w.units(), sizes)
    return CharPolynomial.from_raw(w.n, vogt4(x, y, z, v), primed=False)
