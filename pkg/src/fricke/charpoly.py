"""Exact-rational polynomials in the basic character variables.

A variable is a strictly increasing tuple of 1 to 3 generator indices, so
``(1, 2)`` stands for t_12.  A monomial is a tuple of ``(var, exp)`` pairs
sorted by variable order (index-tuple length first, then lexicographic).
Coefficients are kept as ``int`` when integral and ``Fraction`` otherwise.

The module works on two levels.  The ``*_raw`` helpers operate on plain
``{monomial: coeff}`` dicts and are what the rewriting engines use in their
inner loops; :class:`CharPolynomial` wraps such a dict together with the rank
and the coordinate flag (``t`` or ``t'`` with ``t' = t - 2``).
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

CharVar = tuple  # strictly increasing tuple of generator indices, length 1..3
Monomial = tuple  # tuple of (CharVar, exponent) pairs in variable order

ONE: Monomial = ()


class CoordinateMismatch(ValueError):
    """Arithmetic between a primed and an unprimed polynomial."""


class MissingVariable(KeyError):
    """An evaluation assignment does not cover a variable of the polynomial."""


def var_key(v: CharVar) -> tuple:
    return (len(v), v)


def check_var(v: Iterable[int], n: int | None = None) -> CharVar:
    v = tuple(int(i) for i in v)
    if not 1 <= len(v) <= 3:
        raise ValueError(f"character variable needs 1 to 3 indices, got {v}")
    if any(a >= b for a, b in zip(v, v[1:])):
        raise ValueError(f"indices must be strictly increasing, got {v}")
    if v[0] < 1 or (n is not None and v[-1] > n):
        raise ValueError(f"index out of range in {v} for rank {n}")
    return v


def norm(c):
    """Return ``c`` as an int when it is integral."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


# -- monomials ---------------------------------------------------------------

def _item_key(item):
    return (len(item[0]), item[0])


@lru_cache(maxsize=1 << 20)
def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=_item_key))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_from_vars(*vs: CharVar) -> Monomial:
    m: Monomial = ()
    for v in vs:
        m = mono_mul(m, ((v, 1),))
    return m


def mono_sort_key(m: Monomial) -> tuple:
    return tuple((len(v), v, -e) for v, e in m)


# -- raw dict arithmetic -----------------------------------------------------

def add_into(acc: dict, p: Mapping, scale=1) -> dict:
    """``acc += scale * p`` in place; zero coefficients are dropped."""
    for m, c in p.items():
        c = acc.get(m, 0) + scale * c
        if c:
            acc[m] = norm(c)
        else:
            acc.pop(m, None)
    return acc


def mul_raw(p: Mapping, q: Mapping, max_degree: int | None = None) -> dict:
    out: dict = {}
    if max_degree is None:
        for m1, c1 in p.items():
            for m2, c2 in q.items():
                m = mono_mul(m1, m2)
                c = out.get(m, 0) + c1 * c2
                if c:
                    out[m] = c
                else:
                    del out[m]
    else:
        qd = [(m2, c2, mono_degree(m2)) for m2, c2 in q.items()]
        for m1, c1 in p.items():
            d1 = mono_degree(m1)
            if d1 > max_degree:
                continue
            for m2, c2, d2 in qd:
                if d1 + d2 > max_degree:
                    continue
                m = mono_mul(m1, m2)
                c = out.get(m, 0) + c1 * c2
                if c:
                    out[m] = c
                else:
                    del out[m]
    return {m: norm(c) for m, c in out.items()}


def scale_raw(p: Mapping, s) -> dict:
    if not s:
        return {}
    return {m: norm(c * s) for m, c in p.items()}


def truncate_raw(p: Mapping, max_degree: int) -> dict:
    return {m: c for m, c in p.items() if mono_degree(m) <= max_degree}


def var_raw(v: CharVar) -> dict:
    return {((v, 1),): 1}


def const_raw(c) -> dict:
    return {ONE: norm(c)} if c else {}


@lru_cache(maxsize=None)
def _shift_mono(m: Monomial, shift: int) -> tuple:
    """Expand the monomial under ``v -> v + shift`` for every variable."""
    out: dict = {ONE: 1}
    for v, e in m:
        binom = {}
        for k in range(e + 1):
            binom[((v, k),) if k else ONE] = comb(e, k) * shift ** (e - k)
        out = mul_raw(out, binom)
    return tuple(out.items())


def shift_raw(p: Mapping, shift: int) -> dict:
    out: dict = {}
    for m, c in p.items():
        for m2, c2 in _shift_mono(m, shift):
            out[m2] = out.get(m2, 0) + c * c2
    return {m: norm(c) for m, c in out.items() if c}


# -- names -------------------------------------------------------------------

def var_name(v: CharVar, primed: bool = False, style: str = "plain") -> str:
    """``t12`` (plain) or ``t_12`` (json); indices >= 10 are underscore-joined."""
    digits = "".join(map(str, v)) if max(v) < 10 else "_".join(map(str, v))
    if style == "json":
        return "t_" + digits
    return "t" + digits + ("'" if primed else "")


_JSON_VAR = re.compile(r"^t_(\d+(?:_\d+)*)$")


def parse_var_name(name: str) -> CharVar:
    m = _JSON_VAR.match(name)
    if not m:
        raise ValueError(f"bad variable name {name!r}")
    body = m.group(1)
    idx = body.split("_") if "_" in body else list(body)
    return check_var(int(i) for i in idx)


def _coeff_str(c) -> str:
    c = as_fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# -- the polynomial type -----------------------------------------------------

class CharPolynomial:
    """Immutable polynomial over Q in basic character variables of rank ``n``.

    ``primed`` selects the coordinates: ``False`` means the variables are the
    characters t themselves, ``True`` means t' = t - 2.
    """

    __slots__ = ("n", "primed", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping | None = None, primed: bool = False,
                 *, _trusted: bool = False):
        if n < 1:
            raise ValueError("rank must be positive")
        if _trusted:
            clean = dict(terms or {})
        else:
            clean = {}
            for m, c in (terms or {}).items():
                m = tuple(sorted(((check_var(v, n), int(e)) for v, e in m), key=_item_key))
                if any(e <= 0 for _, e in m) or len({v for v, _ in m}) != len(m):
                    raise ValueError(f"bad monomial {m}")
                c = norm(Fraction(c))
                if c:
                    clean[m] = norm(clean.get(m, 0) + c)
                    if not clean[m]:
                        del clean[m]
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "primed", primed)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("CharPolynomial is immutable")

    # construction helpers
    @classmethod
    def const(cls, n: int, c, primed: bool = False) -> "CharPolynomial":
        return cls(n, const_raw(c), primed, _trusted=True)

    @classmethod
    def var(cls, n: int, *indices: int, primed: bool = False) -> "CharPolynomial":
        return cls(n, var_raw(check_var(indices, n)), primed, _trusted=True)

    @classmethod
    def from_raw(cls, n: int, raw: Mapping, primed: bool = False) -> "CharPolynomial":
        return cls(n, {m: c for m, c in raw.items() if c}, primed, _trusted=True)

    # views
    @property
    def raw(self) -> dict:
        """A copy of the internal term dict (coefficients int or Fraction)."""
        return dict(self._terms)

    @property
    def terms(self) -> dict:
        return {m: as_fraction(c) for m, c in self._terms.items()}

    def coeff(self, *vs: CharVar) -> Fraction:
        return as_fraction(self._terms.get(mono_from_vars(*vs), 0))

    def constant_term(self) -> Fraction:
        return as_fraction(self._terms.get(ONE, 0))

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    # arithmetic
    def _check(self, other: "CharPolynomial"):
        if not isinstance(other, CharPolynomial):
            return NotImplemented
        if other.primed != self.primed:
            raise CoordinateMismatch("cannot combine t and t' coordinates")
        return None

    def _lift(self, other):
        if isinstance(other, (int, Fraction)):
            return CharPolynomial.const(self.n, other, self.primed)
        return other

    def __add__(self, other):
        other = self._lift(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CharPolynomial(max(self.n, other.n), add_into(dict(self._terms), other._terms),
                              self.primed, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return CharPolynomial(self.n, scale_raw(self._terms, -1), self.primed, _trusted=True)

    def __sub__(self, other):
        other = self._lift(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CharPolynomial(max(self.n, other.n), add_into(dict(self._terms), other._terms, -1),
                              self.primed, _trusted=True)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CharPolynomial(max(self.n, other.n), mul_raw(self._terms, other._terms),
                              self.primed, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CharPolynomial.const(self.n, 1, self.primed)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, s) -> "CharPolynomial":
        return CharPolynomial(self.n, scale_raw(self._terms, norm(Fraction(s))), self.primed,
                              _trusted=True)

    def truncate(self, max_degree: int) -> "CharPolynomial":
        return CharPolynomial(self.n, truncate_raw(self._terms, max_degree), self.primed,
                              _trusted=True)

    # coordinates
    def to_primed(self) -> "CharPolynomial":
        if self.primed:
            return self
        return CharPolynomial(self.n, shift_raw(self._terms, 2), True, _trusted=True)

    def to_unprimed(self) -> "CharPolynomial":
        if not self.primed:
            return self
        return CharPolynomial(self.n, shift_raw(self._terms, -2), False, _trusted=True)

    def graded_part(self, k: int) -> "CharPolynomial":
        if not self.primed:
            raise CoordinateMismatch("graded parts are defined in t' coordinates")
        return CharPolynomial(self.n, {m: c for m, c in self._terms.items() if mono_degree(m) == k},
                              True, _trusted=True)

    def evaluate(self, assignment: Mapping) -> Fraction:
        """Exact value; ``assignment`` maps variables (tuples) to rationals."""
        total = Fraction(0)
        for m, c in self._terms.items():
            term = as_fraction(c)
            for v, e in m:
                try:
                    term *= as_fraction(assignment[v]) ** e
                except KeyError:
                    raise MissingVariable(f"no value for {var_name(v)}") from None
            total += term
        return total

    # comparison
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CharPolynomial.const(self.n, other, self.primed)
        if not isinstance(other, CharPolynomial):
            return NotImplemented
        return self.primed == other.primed and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.primed, frozenset(self._terms.items()))))
        return self._hash

    # text
    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda mc: (-mono_degree(mc[0]), mono_sort_key(mc[0])))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            c = as_fraction(c)
            factors = []
            for v, e in m:
                name = var_name(v, self.primed)
                factors.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(factors)
            mag = abs(c)
            if body and mag == 1:
                text = body
            elif body:
                text = f"{_coeff_str(mag)}*{body}"
            else:
                text = _coeff_str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"CharPolynomial(n={self.n}, {'t' + chr(39) if self.primed else 't'}: {self})"

    def to_json_obj(self) -> dict:
        terms = []
        for m, c in self.sorted_terms():
            terms.append({"coeff": _coeff_str(c),
                          "mono": {var_name(v, style="json"): e for v, e in m}})
        return {"n": self.n, "coords": "t'" if self.primed else "t", "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "CharPolynomial":
        if obj.get("coords") not in ("t", "t'"):
            raise ValueError("coords must be 't' or \"t'\"")
        terms = {}
        for t in obj["terms"]:
            m = tuple((parse_var_name(k), int(e)) for k, e in t["mono"].items())
            m = tuple(sorted(m, key=_item_key))
            terms[m] = Fraction(t["coeff"])
        return cls(int(obj["n"]), terms, obj["coords"] == "t'")

    @classmethod
    def from_json(cls, text: str) -> "CharPolynomial":
        return cls.from_json_obj(json.loads(text))


def all_vars(n: int) -> list:
    """Every basic variable of rank ``n`` in variable order."""
    from itertools import combinations
    out = []
    for length in (1, 2, 3):
        out.extend(combinations(range(1, n + 1), length))
    return out
