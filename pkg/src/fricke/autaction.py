"""Action of Aut F_n on the character ring, seen through J/J^3.

Conventions: automorphisms act on the right and ``a * b`` means ``a`` then
``b``.  A character ``f`` goes to ``f^a`` with ``(tr w)^a = tr(a(w))``.  On
coordinate columns this gives ``M(a * b) = M(b) @ M(a)``.

E(k) membership is decided on the generators ``t_alpha'`` of J: an
automorphism fixing every ``t_alpha'`` modulo ``J^{k+1}`` fixes all of J
modulo ``J^{k+1}`` because it acts by ring automorphisms.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .charpoly import CharPolynomial, var_name
from .freegroup import (Automorphism, RankMismatch, Word, aut_commutator, aut_depth, inner, magnus,
                        multiply)
from .graded import JetJ3, _pair_name, basis_S, basis_T, quadratic_of_product
from .jets import image_transfers, word_jet
from .reduce import trace_reduce_primed


class NotInE1(ValueError):
    """eta_1 is only defined on E(1)."""


def t_word(n: int, v: tuple) -> Word:
    """The word ``x_i x_j x_k`` whose trace is the basic character ``t_ijk``."""
    return Word.from_units(n, v)


def s_sigma(a: Automorphism, w: Word) -> CharPolynomial:
    """``tr'(a(w)) - tr'(w)`` as an exact primed polynomial."""
    if a.n != w.n:
        raise RankMismatch("automorphism and word ranks differ")
    return trace_reduce_primed(a(w)) - trace_reduce_primed(w)


def image_jet(a: Automorphism, w: Word) -> JetJ3:
    """Jet of ``tr'(a(w))``; products are evaluated factor by factor."""
    if a.n != w.n:
        raise RankMismatch("automorphism and word ranks differ")
    if len(a.factor_list()) > 1:
        return word_jet(w, image_transfers(a.factor_list()))
    return word_jet(a(w))


def s_sigma_jet(a: Automorphism, w: Word) -> JetJ3:
    """Jet of ``s_sigma(a, w)`` in J/J^3, computed without full reduction."""
    return image_jet(a, w) - word_jet(w)


# -- matrices ----------------------------------------------------------------

def _label(x) -> str:
    return var_name(x, style="json") if isinstance(x[0], int) else _pair_name(x)


@dataclass(frozen=True)
class GradedMatrix:
    """Exact matrix with rows and columns labelled by T and/or S elements."""

    rows: tuple
    cols: tuple
    entries: tuple  # tuple of row tuples of Fraction

    def __post_init__(self):
        if len(self.entries) != len(self.rows) or any(len(r) != len(self.cols) for r in self.entries):
            raise ValueError("entry shape does not match the labels")

    @classmethod
    def from_columns(cls, rows: Sequence, cols: Sequence, columns: Sequence) -> "GradedMatrix":
        ent = tuple(tuple(Fraction(columns[j][i]) for j in range(len(cols))) for i in range(len(rows)))
        return cls(tuple(rows), tuple(cols), ent)

    @classmethod
    def identity(cls, labels: Sequence) -> "GradedMatrix":
        k = len(labels)
        ent = tuple(tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k))
        return cls(tuple(labels), tuple(labels), ent)

    @property
    def shape(self) -> tuple:
        return (len(self.rows), len(self.cols))

    def __matmul__(self, o: "GradedMatrix") -> "GradedMatrix":
        if self.cols != o.rows:
            raise ValueError("inner labels differ")
        ent = tuple(tuple(sum((self.entries[i][k] * o.entries[k][j] for k in range(len(o.rows))), Fraction(0))
                          for j in range(len(o.cols))) for i in range(len(self.rows)))
        return GradedMatrix(self.rows, o.cols, ent)

    def __add__(self, o: "GradedMatrix") -> "GradedMatrix":
        if (self.rows, self.cols) != (o.rows, o.cols):
            raise ValueError("labels differ")
        ent = tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, o.entries))
        return GradedMatrix(self.rows, self.cols, ent)

    def __neg__(self) -> "GradedMatrix":
        return GradedMatrix(self.rows, self.cols, tuple(tuple(-x for x in r) for r in self.entries))

    def __sub__(self, o: "GradedMatrix") -> "GradedMatrix":
        return self + (-o)

    def block(self, rows: Sequence, cols: Sequence) -> "GradedMatrix":
        ri = [self.rows.index(r) for r in rows]
        ci = [self.cols.index(c) for c in cols]
        return GradedMatrix(tuple(rows), tuple(cols),
                            tuple(tuple(self.entries[i][j] for j in ci) for i in ri))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            x == (1 if i == j else 0) for i, r in enumerate(self.entries) for j, x in enumerate(r))

    def nonzero(self) -> list:
        return [(self.rows[i], self.cols[j], x) for i, r in enumerate(self.entries)
                for j, x in enumerate(r) if x]

    def to_json_obj(self) -> dict:
        """Sparse form: labels plus the nonzero entries as strings."""
        return {"rows": [_label(r) for r in self.rows], "cols": [_label(c) for c in self.cols],
                "entries": [[_label(r), _label(c), str(x)] for r, c, x in self.nonzero()]}

    def __str__(self) -> str:
        lines = [f"{len(self.rows)}x{len(self.cols)} matrix, {len(self.nonzero())} nonzero entries"]
        lines += [f"  [{_label(r)}, {_label(c)}] = {x}" for r, c, x in self.nonzero()]
        return "\n".join(lines)


def _jet_column(n: int, j: JetJ3) -> list:
    return j.linear_vector() + j.quadratic_vector()


def action_jet3(a: Automorphism) -> GradedMatrix:
    """Matrix of ``f -> jet3(f^a)`` on the coordinates T then S."""
    n = a.n
    T, S = basis_T(n), basis_S(n)
    images = _generator_jets(a)
    cols = [_jet_column(n, images[v]) for v in T]
    zero_lin = [Fraction(0)] * len(T)
    for u, v in S:
        q = quadratic_of_product(n, images[u].linear, images[v].linear)
        cols.append(zero_lin + [q.get(p, Fraction(0)) for p in S])
    labels = list(T) + list(S)
    return GradedMatrix.from_columns(labels, labels, cols)


def _generator_jets(a: Automorphism) -> dict:
    n = a.n
    tr = image_transfers(a.factor_list()) if len(a.factor_list()) > 1 else None
    return {v: word_jet(t_word(n, v), tr) if tr else word_jet(a(t_word(n, v))) for v in basis_T(n)}


def _generator_defects(a: Automorphism) -> dict:
    n = a.n
    return {v: j - word_jet(t_word(n, v)) for v, j in _generator_jets(a).items()}


def in_E(a: Automorphism, k: int) -> bool:
    """Whether ``a`` acts trivially on J/J^{k+1}, for k = 1 or 2."""
    if k not in (1, 2):
        raise ValueError("only E(1) and E(2) are decidable at this level")
    for d in _generator_defects(a).values():
        if d.linear or (k == 2 and d.quadratic):
            return False
    return True


def e_depth(a: Automorphism) -> int:
    """Largest k <= 2 with ``a`` in E(k)."""
    defects = _generator_defects(a).values()
    if any(d.linear for d in defects):
        return 0
    if any(d.quadratic for d in defects):
        return 1
    return 2


def eta1(a: Automorphism) -> GradedMatrix:
    """The map gr^1(J) -> gr^2(J), ``t_alpha' -> s_a(t_alpha')``; rows S, cols T."""
    n = a.n
    T, S = basis_T(n), basis_S(n)
    defects = _generator_defects(a)
    cols = []
    for v in T:
        d = defects[v]
        if d.linear:
            raise NotInE1(f"{var_name(v, True)} moves in degree 1; the automorphism is not in E(1)")
        cols.append(d.quadratic_vector())
    return GradedMatrix.from_columns(S, T, cols)


# -- Inn . A(2) decomposition -------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    exponents: tuple
    y: Word
    residual: Automorphism


def _inner_exponents(a: Automorphism):
    """Exponent vector f of an inner automorphism agreeing with ``a`` mod Gamma(3).

    For ``c_i = x_i^a x_i^-1`` of an inner automorphism by ``prod x_j^{f_j}``
    the degree-2 Magnus part is ``sum_j f_j (X_i X_j - X_j X_i)``.  Returns
    None when the degree-2 parts are not of this shape for a single f.
    """
    n = a.n
    f: dict = {}
    for i in range(1, n + 1):
        c = multiply(a(Word.gen(n, i)), Word.gen(n, i, -1))
        part = magnus(c, 2).part(2)
        for (p, q), coef in part.items():
            if i not in (p, q) or p == q or part.get((q, p), 0) != -coef:
                return None
        for j in range(1, n + 1):
            if j == i:
                continue
            x = part.get((i, j), 0)
            if f.setdefault(j, x) != x:
                return None
    return tuple(f.get(j, 0) for j in range(1, n + 1))


def decompose_inn_a2(a: Automorphism) -> Decomposition | None:
    """Write ``a = residual * inner(y)`` with ``residual`` in A(2), if possible."""
    n = a.n
    if aut_depth(a, 1) < 1:
        return None
    f = _inner_exponents(a)
    if f is None:
        return None
    y = Word.identity(n)
    for j, e in enumerate(f, 1):
        if e:
            y = multiply(y, Word.gen(n, j, e))
    residual = a * inner(y).inv()
    if aut_depth(residual, 2) < 2:
        return None
    return Decomposition(f, y, residual)


# -- sample-level filtration checks ------------------------------------------

def _e1_is_ia(a: Automorphism) -> bool:
    return not in_E(a, 1) or aut_depth(a, 1) >= 1


def _filtration_claims(n: int) -> dict:
    """Named one-sample claims; each maps an rng to (holds, witness description)."""
    from . import samples as sp

    def inner_identity(rng):
        a = sp.sample_inner(rng, n)
        return action_jet3(a).is_identity(), a

    def a2_in_e1(rng):
        a = sp.sample_a2(rng, n)
        return aut_depth(a, 2) >= 2 and in_E(a, 1), a

    def a4_in_e2(rng):
        a = sp.sample_a4(rng, n)
        return aut_depth(a, 4) >= 4 and in_E(a, 2), a

    def e1_commutator_in_e2(rng):
        a, b = sp.sample_e1(rng, n), sp.sample_e1(rng, n)
        return in_E(a, 1) and in_E(b, 1) and in_E(aut_commutator(a, b), 2), (a, b)

    def non_ia_not_in_e1(rng):
        a = sp.sample_non_ia(rng, n)
        return not in_E(a, 1), a

    def e1_inside_ia(rng):
        a = sp.sample_e1(rng, n) if rng.randrange(2) else sp.sample_ia(rng, n)
        return _e1_is_ia(a), a

    def decompose_iff_e1(rng):
        a = sp.sample_e1(rng, n) if rng.randrange(2) else sp.sample_ia(rng, n)
        d = decompose_inn_a2(a)
        ok = (d is not None) == in_E(a, 1) and (d is None or aut_depth(d.residual, 2) >= 2)
        return ok, a

    def eta1_additive(rng):
        a, b = sp.sample_e1(rng, n), sp.sample_e1(rng, n)
        return eta1(a * b) == eta1(a) + eta1(b), (a, b)

    def eta1_inner_zero(rng):
        a = sp.sample_inner(rng, n)
        return eta1(a).is_zero(), a

    def eta1_equivariant(rng):
        s = sp.random_nielsen(rng, n) * sp.random_nielsen(rng, n)
        tau = sp.sample_e1(rng, n)
        T, S = basis_T(n), basis_S(n)
        rhs = action_jet3(s).block(S, S) @ eta1(tau) @ action_jet3(s.inv()).block(T, T)
        return eta1(tau.conj(s)) == rhs, (s, tau)

    def action_composition(rng):
        a = sp.random_nielsen(rng, n) * sp.sample_ia(rng, n)
        b = sp.random_nielsen(rng, n)
        return action_jet3(a * b) == action_jet3(b) @ action_jet3(a), (a, b)

    def cocycle(rng):
        a = sp.random_nielsen(rng, n) * sp.sample_ia(rng, n)
        b = sp.random_nielsen(rng, n) * sp.sample_ia(rng, n)
        w = sp.random_word(rng, n, 4)
        lhs = s_sigma_jet(a * b, w)
        rhs = (image_jet(b, a(w)) - image_jet(b, w)) + s_sigma_jet(b, w)
        return lhs == rhs, (a, b, w)

    return {f.__name__: f for f in (inner_identity, a2_in_e1, a4_in_e2, e1_commutator_in_e2,
                                     non_ia_not_in_e1, e1_inside_ia, decompose_iff_e1,
                                     eta1_additive, eta1_inner_zero, eta1_equivariant,
                                     action_composition, cocycle)}


def _describe(x) -> object:
    if isinstance(x, tuple):
        return [_describe(y) for y in x]
    return str(x)


def filtration_check(name: str, n: int, trials: int, seed: int = 0, threads: int = 1):
    from .numcheck import CheckResult, _map, _name_seed, trial_rng
    claim = _filtration_claims(n)[name]
    base = _name_seed(seed, name)

    def one(k):
        ok, wit = claim(trial_rng(base, k))
        return None if ok else {"trial": k, "witness": _describe(wit)}

    return CheckResult(name, trials, [f for f in _map(one, range(trials), threads) if f])


def filtration_suite(n: int = 3, seed: int = 0, trials: int = 20, threads: int = 1):
    """Sample-level checks of the E and A filtrations and of eta_1."""
    from .numcheck import SuiteReport
    if n < 3:
        raise ValueError("the filtration samples need rank at least 3")
    return SuiteReport([filtration_check(name, n, trials, seed, threads)
                        for name in _filtration_claims(n)])
