"""Jets of ``tr' w`` modulo J^3 for long words, via 2x2 Cayley-Hamilton.

Any product of SL(2) matrices ``X_1..X_n`` is a combination of the sorted
square-free products ``X_B`` (B a subset of the generators) with coefficients
polynomial in ``t_i`` and ``t_ij``, using

    X^2 = t X - 1,      X^-1 = t - X,
    X_b X_a = -X_a X_b + t_a X_b + t_b X_a + (t_ab - t_a t_b)    (a < b).

The coefficients are kept in primed coordinates truncated at degree 2 as
dense integer arrays ``(c0, c1, c2)`` with ``c2[.., v, w]`` the (non-symmetric)
coefficient of ``v w``.  Right multiplication by a word is a linear map on
these states (a transfer), so a word costs one small contraction per
letter, and transfers of automorphism images compose factor by factor.
Traces of ``X_B`` with ``|B| >= 4`` come from the trace reducer.

This is independent of the rewriting in ``reduce``; the two agree after
``jet3`` (checked in the test suite).
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .charpoly import add_into, mono_degree, mono_from_vars, mul_raw, shift_raw, truncate_raw
from .freegroup import Word
from .graded import JetJ3, jet3_raw
from .reduce import trace_raw

_LIMIT = 1 << 31


class _Ring:
    """Index of the coefficient variables t_i', t_ij' for rank n."""

    def __init__(self, n: int):
        self.n = n
        self.vars = [(i,) for i in range(1, n + 1)] + list(combinations(range(1, n + 1), 2))
        self.index = {v: k for k, v in enumerate(self.vars)}
        self.K = 1 << n


def _subset(mask: int, n: int) -> tuple:
    return tuple(i + 1 for i in range(n) if mask >> i & 1)


def _mask(B) -> int:
    m = 0
    for i in B:
        m |= 1 << (i - 1)
    return m


def _tp(v) -> dict:
    """Unprimed variable in primed coordinates: t = t' + 2."""
    return {((v, 1),): 1, (): 2}


def _scale(p: dict, s) -> dict:
    return {m: c * s for m, c in p.items()}


@lru_cache(maxsize=None)
def _right_mult(B: tuple, g: int) -> tuple:
    """``X_B X_g`` as ``((C, raw_poly), ...)`` over sorted subsets C, exactly."""
    if not B or g > B[-1]:
        return ((B + (g,), {(): 1}),)
    prefix, last = B[:-1], B[-1]
    out: dict = {}

    def acc(C, p):
        add_into(out.setdefault(C, {}), p)

    if g == last:
        acc(B, _tp((g,)))
        acc(prefix, {(): -1})
    else:
        # X_prefix X_last X_g with g < last
        for C, p in _right_mult(prefix, g):
            for D, q in _right_mult(C, last):
                acc(D, mul_raw(p, _scale(q, -1)))
            acc(C, mul_raw(p, _tp((last,))))
        acc(B, _tp((g,)))
        c = add_into(_tp((g, last)), mul_raw(_tp((g,)), _tp((last,))), -1)
        acc(prefix, c)
    return tuple((C, p) for C, p in out.items() if p)


@lru_cache(maxsize=None)
def _tables(n: int):
    """Per-letter transfers ``(T0, T1, T2)`` of shapes (K,K), (K,K,V), (K,K,V,V).

    Row ``B`` of a transfer is the truncated state of ``X_B u``.
    """
    ring = _Ring(n)
    K, V = ring.K, len(ring.vars)
    out = {}
    for g in range(1, n + 1):
        T0 = np.zeros((K, K), dtype=np.int64)
        T1 = np.zeros((K, K, V), dtype=np.int64)
        T2 = np.zeros((K, K, V, V), dtype=np.int64)
        for bm in range(K):
            for C, p in _right_mult(_subset(bm, n), g):
                cm = _mask(C)
                for m, c in p.items():
                    if mono_degree(m) > 2:
                        continue
                    if not m:
                        T0[bm, cm] += c
                    elif len(m) == 1 and m[0][1] == 1:
                        T1[bm, cm, ring.index[m[0][0]]] += c
                    elif len(m) == 1:
                        k = ring.index[m[0][0]]
                        T2[bm, cm, k, k] += c
                    else:
                        T2[bm, cm, ring.index[m[0][0]], ring.index[m[1][0]]] += c
        out[g] = (T0, T1, T2)
        # X_g^-1 = t_g - X_g
        eye = np.eye(K, dtype=np.int64)
        S1 = -T1.copy()
        S1[:, :, ring.index[(g,)]] += eye
        out[-g] = (2 * eye - T0, S1, -T2)
    return ring, out


def _apply(state, T):
    """Right-multiply a (possibly batched) state by a transfer, mod degree 3."""
    c0, c1, c2 = state
    T0, T1, T2 = T
    if c0.dtype == object or T0.dtype == object:
        c0, c1, c2 = (a.astype(object) for a in state)
        T0, T1, T2 = (a.astype(object) for a in T)
    n0 = np.einsum("...b,bk->...k", c0, T0)
    n1 = np.einsum("...bv,bk->...kv", c1, T0) + np.einsum("...b,bkv->...kv", c0, T1)
    n2 = (np.einsum("...bvw,bk->...kvw", c2, T0) + np.einsum("...b,bkvw->...kvw", c0, T2)
          + np.einsum("...bv,bkw->...kvw", c1, T1))
    out = (n0, n1, n2)
    if n0.dtype != object and max(int(np.abs(a).max(initial=0)) for a in out) > _LIMIT:
        out = tuple(a.astype(object) for a in out)
    return out


def _identity_state(ring: _Ring, batch: bool):
    K, V = ring.K, len(ring.vars)
    if batch:
        return (np.eye(K, dtype=np.int64), np.zeros((K, K, V), dtype=np.int64),
                np.zeros((K, K, V, V), dtype=np.int64))
    c0 = np.zeros(K, dtype=np.int64)
    c0[0] = 1
    return (c0, np.zeros((K, V), dtype=np.int64), np.zeros((K, V, V), dtype=np.int64))


def _run(state, units, transfers):
    for u in units:
        state = _apply(state, transfers[u])
    return state


def module_element(w: Word, transfers: dict | None = None):
    """Truncated coefficient arrays of ``w`` in the ``X_B`` basis.

    ``transfers`` optionally replaces the letter transfers, e.g. by those
    of the generator images under an automorphism.
    """
    ring, tabs = _tables(w.n)
    return ring, _run(_identity_state(ring, False), w.units(), transfers or tabs)


def image_transfers(factors) -> dict:
    """Transfers of ``x_g^{+-1}`` under the product of ``factors`` (applied in order).

    Built from the last factor backwards, so only the short images of the
    individual factors are ever expanded.
    """
    n = factors[0].n
    ring, cur = _tables(n)
    for f in reversed(factors):
        nxt = {}
        for g in range(1, n + 1):
            img = f.forward.images[g - 1]
            nxt[g] = _run(_identity_state(ring, True), img.units(), cur)
            nxt[-g] = _run(_identity_state(ring, True), (~img).units(), cur)
        cur = nxt
    return cur


@lru_cache(maxsize=None)
def _trace_basis(n: int, mask: int) -> dict:
    B = _subset(mask, n)
    if not B:
        return {(): 2}
    if len(B) <= 3:
        return {((B, 1),): 1, (): 2}
    return truncate_raw(shift_raw(trace_raw(B), 2), 2)


def trace_jet_raw(w: Word, transfers: dict | None = None) -> dict:
    """``tr' w`` as a primed raw polynomial truncated at degree 2."""
    ring, (c0, c1, c2) = module_element(w, transfers)
    n = w.n
    out: dict = {(): -2}
    for bm in range(ring.K):
        coeff: dict = {}
        if c0[bm]:
            coeff[()] = int(c0[bm])
        for k in np.nonzero(c1[bm])[0]:
            coeff[((ring.vars[k], 1),)] = int(c1[bm, k])
        for a, b in zip(*np.nonzero(c2[bm])):
            m = mono_from_vars(ring.vars[a], ring.vars[b])
            coeff[m] = coeff.get(m, 0) + int(c2[bm, a, b])
        coeff = {m: c for m, c in coeff.items() if c}
        if coeff:
            add_into(out, mul_raw(coeff, _trace_basis(n, bm), max_degree=2))
    return {m: c for m, c in out.items() if c}


def word_jet(w: Word, transfers: dict | None = None) -> JetJ3:
    """Jet of ``tr' w``, or of ``tr' a(w)`` when given the image transfers of ``a``."""
    return jet3_raw(w.n, trace_jet_raw(w, transfers))
