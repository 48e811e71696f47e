"""The graded pieces gr^1(J), gr^2(J) and normal forms in J/J^3.

``basis_T`` lists the primed basic characters; ``basis_S`` lists the degree-2
monomials that span gr^2(J).  Every other degree-2 monomial is rewritten
into span(S) with relations that hold for all SL(2) representations:

* determinant relations, one per pair of index triples;
* four explicit four-index relations per ``i < a < b < c``;
* rotation defects: the four-block trace expansion of a five-letter word
  applied to each of its rotations, compared with the reduced normal form.

Relations are generated symbolically from the trace reducer, so nothing is
hardcoded modulo lower terms.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import comb, gcd
from typing import Mapping

from .charpoly import (CharPolynomial, as_fraction, mono_degree, var_key, var_name)
from .freegroup import Word
from .reduce import expand_vogt, trace_reduce


class NotInJ(ValueError):
    """The polynomial has a nonzero constant term."""


class IncompleteRelations(RuntimeError):
    """Some degree-2 monomial outside S could not be eliminated."""


class RankMismatch(RuntimeError):
    """The relation matrix rank differs from the expected codimension of S."""


# -- bases -------------------------------------------------------------------

def _check_rank(n: int):
    if n < 2:
        raise ValueError("rank must be at least 2")


def basis_T(n: int) -> list:
    """Primed basic characters ordered by (index-tuple length, lexicographic)."""
    _check_rank(n)
    out = []
    for length in (1, 2, 3):
        out.extend(combinations(range(1, n + 1), length))
    return out


def pair(u: tuple, v: tuple) -> tuple:
    """Degree-2 monomial ``t_u' t_v'`` as an ordered pair of variables."""
    return (u, v) if var_key(u) <= var_key(v) else (v, u)


def _s1(n: int) -> list:
    idx = range(1, n + 1)
    out = []
    out += [((i,), (j,)) for i, j in combinations_with_replacement(idx, 2)]
    out += [((i,), ab) for i in idx for ab in combinations(idx, 2)]
    out += [((i,), abc) for i in idx for abc in combinations(idx, 3)]
    out += [(ij, ab) for ij, ab in combinations_with_replacement(list(combinations(idx, 2)), 2)]
    return out


def _s2(n: int) -> list:
    idx = range(1, n + 1)
    out = []
    for a, b, c in combinations(idx, 3):
        out += [((a, b), (a, b, c)), ((a, c), (a, b, c)), ((b, c), (a, b, c))]
    for i, a, b, c in combinations(idx, 4):
        out += [((i, a), (a, b, c)), ((i, b), (a, b, c)), ((i, c), (a, b, c)),
                ((i, a), (i, b, c)), ((a, b), (i, a, c)), ((a, b), (i, b, c)),
                ((a, c), (i, b, c)), ((i, b), (i, a, c))]
    for i, j, a, b, c in combinations(idx, 5):
        out += [((j, a), (i, b, c)), ((j, b), (i, a, c)), ((j, c), (i, a, b)),
                ((a, b), (i, j, c)), ((a, c), (i, j, b)), ((b, c), (i, j, a))]
    return out


def _s_key(p: tuple) -> tuple:
    return (p[0] + p[1], len(p[0]), len(p[1]))


def basis_S(n: int) -> list:
    """S_1 then S_2, each sorted lexicographically on the concatenated indices."""
    _check_rank(n)
    s1 = sorted(_s1(n), key=_s_key)
    s2 = sorted(_s2(n), key=_s_key)
    out = s1 + s2
    assert len(set(out)) == len(out)
    return out


def degree2_monomials(n: int) -> list:
    T = basis_T(n)
    return [pair(u, v) for u, v in combinations_with_replacement(T, 2)]


def expected_rank(n: int) -> int:
    m = len(basis_T(n))
    return comb(m + 1, 2) - len(basis_S(n))


# -- relations ---------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    poly: CharPolynomial  # unprimed
    tag: str              # determinant | whittemore | rotation-defect
    label: str

    @property
    def primed(self) -> CharPolynomial:
        return self.poly.to_primed()


@dataclass(frozen=True)
class RelationSet:
    n: int
    relations: tuple

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)

    def tags(self) -> dict:
        out: dict = {}
        for r in self.relations:
            out[r.tag] = out.get(r.tag, 0) + 1
        return out


def _t(n: int, word: tuple) -> CharPolynomial:
    """Reduced trace of the positive word with the given generator indices."""
    return trace_reduce(Word.from_units(n, word))


def _pair_var(n: int, u: int, v: int) -> CharPolynomial:
    if u == v:
        t = CharPolynomial.var(n, u)
        return t * t - 2
    return CharPolynomial.var(n, *sorted((u, v)))


def P_poly(n: int, a: int, b: int, c: int) -> CharPolynomial:
    t = lambda *ix: CharPolynomial.var(n, *ix)
    return t(a, b) * t(c) + t(a, c) * t(b) + t(b, c) * t(a)


def Q_poly(n: int, a: int, b: int, c: int) -> CharPolynomial:
    t = lambda *ix: CharPolynomial.var(n, *ix)
    return (t(a) ** 2 + t(b) ** 2 + t(c) ** 2 + t(a, b) ** 2 + t(a, c) ** 2 + t(b, c) ** 2
            - t(a) * t(b) * t(a, b) - t(a) * t(c) * t(a, c) - t(b) * t(c) * t(b, c)
            + t(a, b) * t(b, c) * t(a, c) - 4)


def horowitz_quadratic(n: int = 3, a: int = 1, b: int = 2, c: int = 3) -> CharPolynomial:
    """``t_abc^2 - (P_abc - t_a t_b t_c) t_abc + Q_abc``.

    ``t_abc + t_acb = P_abc - t_a t_b t_c`` and ``t_abc t_acb = Q_abc``, so
    this is the monic quadratic satisfied by ``t_abc``.
    """
    t = lambda *ix: CharPolynomial.var(n, *ix)
    s = P_poly(n, a, b, c) - t(a) * t(b) * t(c)
    return t(a, b, c) ** 2 - s * t(a, b, c) + Q_poly(n, a, b, c)


def _det(m: list) -> CharPolynomial:
    if len(m) == 1:
        return m[0][0]
    total = None
    for j, entry in enumerate(m[0]):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = entry * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def determinant_relation(n: int, ijk: tuple, abc: tuple) -> CharPolynomial:
    t = lambda *ix: CharPolynomial.var(n, *ix)

    def factor(x, y, z):
        return 2 * t(x, y, z) - P_poly(n, x, y, z) + t(x) * t(y) * t(z)

    rows = [[t(r)] + [_pair_var(n, r, col) for col in abc] for r in ijk]
    rows.append([CharPolynomial.const(n, 2)] + [t(col) for col in abc])
    return factor(*ijk) * factor(*abc) - _det(rows)


def whittemore_relations(n: int, i: int, a: int, b: int, c: int) -> dict:
    """The four relations attached to ``i < a < b < c`` (corrected forms)."""
    name = {"i": i, "a": a, "b": b, "c": c}

    def t(s: str) -> CharPolynomial:
        return _t(n, tuple(name[ch] for ch in s))

    p2 = (t("i") * t("iabc") + t("acb") - t("abc") - t("ia") * t("ibc") + t("ib") * t("iac")
          - t("ic") * t("iab") - t("i") * t("b") * t("iac") + t("b") * t("ia") * t("ic"))
    p3 = (t("ib") * t("iabc") - t("iab") * t("ibc") - t("i") * t("iac") + t("ia") * t("ic")
          - t("a") * t("c") + 2 * t("ac") - t("b") * t("abc") + t("ab") * t("bc"))
    p4 = (t("iba") * t("iabc") - t("ia") * t("ab") * t("ibc") - t("ab") * t("abc")
          + t("i") * t("b") * t("ibc") - t("ib") * t("ibc") - t("ia") * t("iac")
          + t("a") * t("ab") * t("bc") + t("a") * t("ia") * t("ic")
          + t("a") * t("ac") - t("i") * t("ic") - t("b") * t("bc")
          - (t("a") * t("a") - 2) * t("c"))
    p3s = (t("ic") * t("iacb") - t("iac") * t("icb") - t("i") * t("iab") + t("ia") * t("ib")
           - t("a") * t("b") + 2 * t("ab") - t("c") * t("acb") + t("ac") * t("cb"))
    return {"p2": p2, "p3": p3, "p4": p4, "p3^s_bc": p3s}


def rotation_defects(n: int, letters: tuple) -> list:
    """``2 tr(rotation)`` with blocks (2, 1, 1, 1) minus twice the normal form."""
    w = Word.from_units(n, letters)
    base = 2 * trace_reduce(w)
    out = []
    for r in range(len(letters)):
        rot = Word.from_units(n, letters[r:] + letters[:r])
        d = expand_vogt(rot, (2, 1, 1, 1)) - base
        if not d.is_zero():
            out.append((r, d))
    return out


@lru_cache(maxsize=None)
def relations_deg2(n: int) -> RelationSet:
    _check_rank(n)
    rels = []
    triples = list(combinations(range(1, n + 1), 3))
    for x in range(len(triples)):
        for y in range(x, len(triples)):
            ijk, abc = triples[x], triples[y]
            rels.append(Relation(determinant_relation(n, ijk, abc), "determinant",
                                 f"det({''.join(map(str, ijk))},{''.join(map(str, abc))})"))
    for iabc in combinations(range(1, n + 1), 4):
        for name, p in whittemore_relations(n, *iabc).items():
            rels.append(Relation(p, "whittemore", f"{name}({''.join(map(str, iabc))})"))
    for five in combinations(range(1, n + 1), 5):
        for r, d in rotation_defects(n, five):
            rels.append(Relation(d, "rotation-defect", f"rot{r}({''.join(map(str, five))})"))
    return RelationSet(n, tuple(rels))


# -- elimination -------------------------------------------------------------

def _quadratic_row(p: CharPolynomial) -> dict:
    row = {}
    for m, c in p.graded_part(2).raw.items():
        vs = [v for v, e in m for _ in range(e)]
        row[pair(vs[0], vs[1])] = as_fraction(c)
    return row


def _integer_row(row: Mapping) -> dict:
    den = 1
    for c in row.values():
        den = den * c.denominator // gcd(den, c.denominator)
    out = {k: int(c * den) for k, c in row.items() if c}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for c in row.values():
        g = gcd(g, c)
    if g > 1:
        row = {k: c // g for k, c in row.items()}
    return row


def _combine(r: dict, p: dict, col) -> dict:
    """Fraction-free elimination of ``col`` from ``r`` using pivot row ``p``."""
    a, b = p[col], r[col]
    out = {k: a * c for k, c in r.items()}
    for k, c in p.items():
        v = out.get(k, 0) - b * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return _primitive(out)


@dataclass
class Reduction:
    n: int
    S: list
    table: dict            # non-S monomial -> {S monomial: Fraction}
    rank: int
    expected: int


def _eliminate(n: int, rows: list) -> Reduction:
    S = basis_S(n)
    S_set = set(S)
    nonS = [m for m in degree2_monomials(n) if m not in S_set]
    support: dict = {}
    for r in rows:
        for k in r:
            support[k] = support.get(k, 0) + 1
    order = sorted(nonS, key=lambda m: (-support.get(m, 0), _s_key(m)))
    rows = [r for r in rows if r]
    pivots: dict = {}
    for col in order:
        cands = [k for k, r in enumerate(rows) if col in r]
        if not cands:
            raise IncompleteRelations(f"no relation eliminates {_pair_name(col)} (n={n})")
        best = min(cands, key=lambda k: (len(rows[k]), k))
        prow = rows.pop(best)
        rows = [_combine(r, prow, col) if col in r else r for r in rows]
        rows = [r for r in rows if r]
        for pc in list(pivots):
            if col in pivots[pc]:
                pivots[pc] = _combine(pivots[pc], prow, col)
        pivots[col] = prow
    leftover = [r for r in rows if r]
    rank = len(pivots) + len(leftover)
    expected = len(nonS)
    if leftover:
        raise RankMismatch(f"n={n}: rank {rank} exceeds expected {expected}; "
                           f"a relation survives inside span(S)")
    table = {}
    for col, prow in pivots.items():
        lead = prow[col]
        table[col] = {k: Fraction(-c, lead) for k, c in prow.items() if k != col}
    return Reduction(n, S, table, rank, expected)


def _relation_rows(n: int, order_seed: int | None) -> list:
    rels = list(relations_deg2(n))
    if order_seed is not None:
        random.Random(order_seed).shuffle(rels)
    return [_integer_row(_quadratic_row(r.primed)) for r in rels]


@lru_cache(maxsize=None)
def _reduction_cached(n: int) -> Reduction:
    return _eliminate(n, _relation_rows(n, None))


def reduction(n: int, order_seed: int | None = None) -> Reduction:
    if order_seed is None:
        return _reduction_cached(n)
    return _eliminate(n, _relation_rows(n, order_seed))


def independence_check(n: int) -> dict:
    if not 2 <= n <= 6:
        raise ValueError("independence is machine-checked for 2 <= n <= 6")
    red = reduction(n)
    return {"n": n, "rank": red.rank, "expected": red.expected,
            "monomials": len(degree2_monomials(n)), "S": len(red.S)}


# -- jets --------------------------------------------------------------------

def _pair_name(p: tuple, style: str = "json") -> str:
    return ".".join(var_name(v, style=style) for v in p)


@dataclass(frozen=True)
class JetJ3:
    """Element of J/J^3: coordinates on T (linear) and S (quadratic)."""

    n: int
    linear: dict = field(default_factory=dict)
    quadratic: dict = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.linear and not self.quadratic

    def linear_vector(self) -> list:
        return [self.linear.get(v, Fraction(0)) for v in basis_T(self.n)]

    def quadratic_vector(self) -> list:
        return [self.quadratic.get(p, Fraction(0)) for p in basis_S(self.n)]

    def __add__(self, other: "JetJ3") -> "JetJ3":
        return JetJ3(self.n, _addd(self.linear, other.linear), _addd(self.quadratic, other.quadratic))

    def __neg__(self) -> "JetJ3":
        return JetJ3(self.n, {k: -c for k, c in self.linear.items()},
                     {k: -c for k, c in self.quadratic.items()})

    def __sub__(self, other: "JetJ3") -> "JetJ3":
        return self + (-other)

    def to_json_obj(self) -> dict:
        return {"linear": {var_name(v, style="json"): _fs(c) for v, c in sorted(self.linear.items(), key=lambda x: var_key(x[0]))},
                "quadratic": {_pair_name(p): _fs(c) for p, c in sorted(self.quadratic.items(), key=lambda x: _s_key(x[0]))}}

    @classmethod
    def from_json_obj(cls, n: int, obj: Mapping) -> "JetJ3":
        from .charpoly import parse_var_name
        lin = {parse_var_name(k): Fraction(c) for k, c in obj["linear"].items()}
        quad = {}
        for k, c in obj["quadratic"].items():
            u, v = k.split(".")
            quad[(parse_var_name(u), parse_var_name(v))] = Fraction(c)
        return cls(n, lin, quad)

    def __str__(self) -> str:
        parts = [f"{c}*{var_name(v, True)}" for v, c in sorted(self.linear.items(), key=lambda x: var_key(x[0]))]
        parts += [f"{c}*{_pair_name(p, 'plain')}" for p, c in sorted(self.quadratic.items(), key=lambda x: _s_key(x[0]))]
        return " + ".join(parts) if parts else "0"


def _fs(c: Fraction) -> str:
    c = as_fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _addd(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def jet3_raw(n: int, raw: Mapping, red: Reduction | None = None) -> JetJ3:
    """Jet of a primed raw polynomial; degrees >= 3 are dropped."""
    if raw.get((), 0):
        raise NotInJ("constant term is nonzero; the input is not in J")
    red = red or reduction(n)
    S_set = set(red.S)
    lin: dict = {}
    quad: dict = {}
    for m, c in raw.items():
        d = mono_degree(m)
        if d == 1:
            lin[m[0][0]] = lin.get(m[0][0], 0) + as_fraction(c)
        elif d == 2:
            vs = [v for v, e in m for _ in range(e)]
            p = pair(vs[0], vs[1])
            if p in S_set:
                quad[p] = quad.get(p, 0) + as_fraction(c)
            else:
                for q, cq in red.table[p].items():
                    quad[q] = quad.get(q, 0) + as_fraction(c) * cq
    return JetJ3(n, {k: v for k, v in lin.items() if v}, {k: v for k, v in quad.items() if v})


def jet3(p: CharPolynomial, order_seed: int | None = None) -> JetJ3:
    if not p.primed:
        p = p.to_primed()
    red = reduction(p.n, order_seed)
    return jet3_raw(p.n, p.raw, red)


def quadratic_of_product(n: int, f: Mapping, g: Mapping) -> dict:
    """S-coordinates of ``f * g`` for two linear forms on T."""
    raw: dict = {}
    for u, a in f.items():
        for v, b in g.items():
            p = pair(u, v)
            m = ((p[0], 2),) if p[0] == p[1] else ((p[0], 1), (p[1], 1))
            raw[m] = raw.get(m, 0) + a * b
    return jet3_raw(n, {m: c for m, c in raw.items() if c}).quadratic
