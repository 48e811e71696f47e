"""Exact rational SL(2) representations and randomized identity testing.

A polynomial in the basic characters is checked by evaluating it at the
characters of random rational representations.  All arithmetic is exact, so
a nonzero value is a genuine witness.
"""
from __future__ import annotations

import random
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

from .charpoly import CharPolynomial
from .freegroup import RankMismatch, Word

DEFAULT_BOUND = 7


class NotSL2(ValueError):
    """Matrix with determinant different from 1."""


class SingularParameter(ValueError):
    """A family parameter hits a pole of the construction."""


@dataclass(frozen=True)
class Mat2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, Fraction(getattr(self, k)))
        if self.a * self.d - self.b * self.c != 1:
            raise NotSL2(f"determinant {self.a * self.d - self.b * self.c} != 1")

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return _mk(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                   self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inv(self) -> "Mat2":
        return _mk(self.d, -self.b, -self.c, self.a)

    def trace(self) -> Fraction:
        return self.a + self.d

    def __pow__(self, k: int) -> "Mat2":
        base = self if k >= 0 else self.inv()
        out = Mat2.identity()
        for _ in range(abs(k)):
            out = out @ base
        return out

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)


def _mk(a, b, c, d) -> Mat2:
    # products of determinant-1 matrices need no re-check
    m = object.__new__(Mat2)
    object.__setattr__(m, "a", a)
    object.__setattr__(m, "b", b)
    object.__setattr__(m, "c", c)
    object.__setattr__(m, "d", d)
    return m


@dataclass(frozen=True)
class Representation:
    n: int
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.n:
            raise ValueError(f"need {self.n} images")

    def __call__(self, w: Word) -> Mat2:
        return eval_word(self, w)


def eval_word(r: Representation, w: Word) -> Mat2:
    if r.n != w.n:
        raise RankMismatch("word and representation ranks differ")
    out = Mat2.identity()
    for g, e in w.letters:
        out = out @ (r.images[g - 1] ** e)
    return out


def char_values(r: Representation) -> dict:
    """Traces of ``x_{i1}...x_{il}`` for every increasing index tuple, l <= 3."""
    out = {}
    for length in (1, 2, 3):
        for v in combinations(range(1, r.n + 1), length):
            m = Mat2.identity()
            for i in v:
                m = m @ r.images[i - 1]
            out[v] = m.trace()
    return out


def assignment_for(p: CharPolynomial, r: Representation) -> dict:
    vals = char_values(r)
    if p.primed:
        return {v: x - 2 for v, x in vals.items()}
    return vals


# -- random sampling ---------------------------------------------------------

def random_rational(rng: random.Random, bound: int = DEFAULT_BOUND, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x or not nonzero:
            return x


def random_sl2(rng: random.Random, bound: int = DEFAULT_BOUND) -> Mat2:
    a = random_rational(rng, bound, nonzero=True)
    b = random_rational(rng, bound)
    c = random_rational(rng, bound)
    return Mat2(a, b, c, (1 + b * c) / a)


def random_representation(n: int, rng: random.Random, bound: int = DEFAULT_BOUND) -> Representation:
    return Representation(n, tuple(random_sl2(rng, bound) for _ in range(n)))


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random((seed ^ trial) & 0xFFFFFFFFFFFFFFFF)


def trial_representation(n: int, seed: int, trial: int, bound: int = DEFAULT_BOUND) -> Representation:
    """Every fourth trial draws from a structured family, the rest are generic."""
    rng = trial_rng(seed, trial)
    if trial % 4 == 3 and n >= 3:
        return _random_family_member(n, rng, bound)
    return random_representation(n, rng, bound)


def _random_family_member(n: int, rng: random.Random, bound: int) -> Representation:
    fam = rng.choice(["2", "3", "5", "6", "11"] if n >= 4 else ["2", "6", "11"])
    size = {"2": 3, "3": 4, "5": 4, "6": 3, "11": 3}[fam]
    place = tuple(sorted(rng.sample(range(1, n + 1), size)))
    names = FAMILY_PARAMS[fam]
    while True:
        params = {k: random_rational(rng, bound) for k in names}
        try:
            return rho_family(fam, n, params, place)
        except SingularParameter:
            continue


# -- explicit families -------------------------------------------------------

def unipotent(k, s) -> Mat2:
    return Mat2(1 - k * s, k * k * s, -s, 1 + k * s)


def diagonal(s) -> Mat2:
    s = Fraction(s)
    if s == 1:
        raise SingularParameter("1 - s must be invertible")
    return Mat2(1 - s, 0, 0, 1 / (1 - s))


def lemma_matrix(s) -> Mat2:
    """``A = [[s + 2, 1], [-1, 0]]``."""
    return Mat2(Fraction(s) + 2, 1, -1, 0)


FAMILY_PARAMS = {
    "1": ("s", "l", "t", "m", "u"),
    "1a": ("t",),
    "1b": ("u",),
    "2": ("k", "s", "l", "t", "m", "u"),
    "3": ("k", "s", "l", "t", "m", "u", "p", "v"),
    "4": ("k", "s", "l", "t", "m", "u", "p", "v", "q", "w"),
    "5": ("k", "s", "l", "t", "m", "u", "v"),
    "6": ("s", "l", "t", "m", "u"),
    "7": ("s", "v"),
    "8": ("s",),
    "9": ("s",),
    "10": ("s",),
    "11": ("s", "t", "u"),
}

FAMILY_PLACEMENT = {
    "1": ("i", "j", "k"), "1a": ("j",), "1b": ("k",),
    "2": ("a", "b", "c"), "3": ("i", "a", "b", "c"), "4": ("i", "j", "a", "b", "c"),
    "5": ("i", "a", "b", "c"), "6": ("a", "b", "c"), "7": ("i", "a"),
    "8": ("i",), "9": ("k",), "10": ("i", "j"), "11": ("a", "b", "i"),
}


def rho_family(fid: str, n: int, params: Mapping, placement: Sequence[int]) -> Representation:
    """Representation from one of the explicit families.

    ``placement`` lists the generator indices in the order of
    ``FAMILY_PLACEMENT[fid]``; unlisted generators go to the identity.
    """
    fid = str(fid)
    if fid not in FAMILY_PARAMS:
        raise ValueError(f"unknown family {fid!r}")
    slots = FAMILY_PLACEMENT[fid]
    placement = tuple(int(i) for i in placement)
    if len(placement) != len(slots):
        raise ValueError(f"family {fid} needs {len(slots)} placement indices")
    if len(set(placement)) != len(placement):
        raise ValueError("placement indices must be distinct")
    if any(not 1 <= i <= n for i in placement):
        raise ValueError("placement index out of range")
    missing = [k for k in FAMILY_PARAMS[fid] if k not in params]
    if missing:
        raise ValueError(f"missing parameters {missing}")
    P = {k: Fraction(params[k]) for k in FAMILY_PARAMS[fid]}
    at = dict(zip(slots, placement))
    mats: dict = {}
    if fid == "1":
        mats[at["i"]] = diagonal(P["s"])
        mats[at["j"]] = unipotent(P["l"], P["t"])
        mats[at["k"]] = unipotent(P["m"], P["u"])
    elif fid in ("1a", "1b"):
        x = P["t"] if fid == "1a" else P["u"]
        if x == 1:
            raise SingularParameter("1 - t must be invertible")
        mats[placement[0]] = Mat2(1 - x, 1, 0, 1 / (1 - x))
    elif fid in ("2", "3", "4", "5", "6"):
        mats[at["a"]] = unipotent(P.get("k", 0), P["s"])
        mats[at["b"]] = unipotent(P["l"], P["t"])
        mats[at["c"]] = unipotent(P["m"], P["u"])
        if fid == "3" or fid == "4":
            mats[at["i"]] = unipotent(P["p"], P["v"])
        if fid == "4":
            mats[at["j"]] = unipotent(P["q"], P["w"])
        if fid == "5":
            mats[at["i"]] = diagonal(P["v"])
        if fid == "6":
            mats[at["a"]] = diagonal(P["s"])
    elif fid == "7":
        mats[at["i"]] = diagonal(P["s"])
        mats[at["a"]] = diagonal(P["v"])
    elif fid in ("8", "9", "10"):
        for i in placement:
            mats[i] = lemma_matrix(P["s"])
    elif fid == "11":
        s, t, u = P["s"], P["t"], P["u"]
        mats[at["a"]] = Mat2(1, s, 0, 1)
        mats[at["b"]] = Mat2(1, 0, t, 1)
        mats[at["i"]] = Mat2(1 - u, u, -u, 1 + u)
    images = tuple(mats.get(i, Mat2.identity()) for i in range(1, n + 1))
    return Representation(n, images)


# -- identity testing --------------------------------------------------------

@dataclass
class IdentityReport:
    trials: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_obj(self) -> dict:
        return {"trials": self.trials, "ok": self.ok, "failures": self.failures}


def _rep_json(r: Representation) -> list:
    return [[str(x) for x in m.entries()] for m in r.images]


def identity_check(p: CharPolynomial, trials: int = 100, seed: int = 0,
                   threads: int = 1, bound: int = DEFAULT_BOUND) -> IdentityReport:
    """Evaluate ``p`` at ``trials`` random representations; collect witnesses."""
    def one(trial: int):
        r = trial_representation(p.n, seed, trial, bound)
        val = p.evaluate(assignment_for(p, r))
        if val:
            return {"trial": trial, "value": str(val), "representation": _rep_json(r)}
        return None

    results = _map(one, range(trials), threads)
    return IdentityReport(trials, [f for f in results if f is not None])


def _map(fn: Callable, items, threads: int) -> list:
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- polynomial interpolation ------------------------------------------------

def poly_coefficients(f: Callable, degree: int) -> list:
    """Monomial coefficients of a univariate polynomial of known degree bound.

    ``f`` is evaluated at ``1..degree+1`` and the Vandermonde system is
    solved exactly.
    """
    xs = [Fraction(k + 1) for k in range(degree + 1)]
    rows = [[x ** j for j in range(degree + 1)] + [Fraction(f(x))] for x in xs]
    m = degree + 1
    for c in range(m):
        p = next(r for r in range(c, m) if rows[r][c])
        rows[c], rows[p] = rows[p], rows[c]
        for r in range(m):
            if r != c and rows[r][c]:
                q = rows[r][c] / rows[c][c]
                rows[r] = [a - q * b for a, b in zip(rows[r], rows[c])]
    return [rows[i][m] / rows[i][i] for i in range(m)]


def vanishing_order(f: Callable, degree: int) -> int:
    """Lowest power of ``lam`` with a nonzero coefficient in ``f(lam)``; degree+1 if none."""
    co = poly_coefficients(f, degree)
    return next((k for k, c in enumerate(co) if c), degree + 1)


# -- identity suite ----------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    trials: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class SuiteReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def by_name(self) -> dict:
        return {c.name: c for c in self.checks}

    def to_json_obj(self) -> dict:
        return {"ok": self.ok,
                "checks": {c.name: {"trials": c.trials, "ok": c.ok, "failures": c.failures}
                           for c in self.checks}}


def _cat(n: int, ws) -> Word:
    return Word.from_units(n, [u for w in ws for u in w.units()])


def _matrix_trace(r: Representation):
    return lambda *ws: eval_word(r, _cat(r.n, ws)).trace()


def _reducer_trace(r: Representation):
    from .reduce import trace_reduce
    vals = char_values(r)
    return lambda *ws: trace_reduce(_cat(r.n, ws)).evaluate(vals)


def _primed(tr):
    return lambda *ws: tr(*ws) - 2


# Each identity maps a trace function and a tuple of words to lhs - rhs.

def _id_inverse(tr, x):
    return tr(~x) - tr(x)


def _id_cyclic(tr, x, y):
    return tr(x, y) - tr(y, x)


def _id_product_inverse(tr, x, y):
    return tr(x, y) + tr(x, ~y) - tr(x) * tr(y)


def _id_swap_three(tr, x, y, z):
    X, Y, Z = tr(x), tr(y), tr(z)
    return (tr(x, y, z) + tr(y, x, z)
            - (X * tr(y, z) + Y * tr(x, z) + Z * tr(x, y) - X * Y * Z))


def _id_commutator(tr, x, y):
    X, Y, XY = tr(x), tr(y), tr(x, y)
    from .freegroup import commutator
    return tr(commutator(x, y)) - (X * X + Y * Y + XY * XY - X * Y * XY - 2)


def _id_four_block(tr, x, y, z, w):
    X, Y, Z, W = tr(x), tr(y), tr(z), tr(w)
    XY, XZ, XW, YZ, YW, ZW = tr(x, y), tr(x, z), tr(x, w), tr(y, z), tr(y, w), tr(z, w)
    rhs = (X * tr(y, z, w) + Y * tr(z, w, x) + Z * tr(w, x, y) + W * tr(x, y, z)
           + XY * ZW - XZ * YW + XW * YZ
           - X * Y * ZW - Y * Z * XW - X * W * YZ - Z * W * XY + X * Y * Z * W)
    return 2 * tr(x, y, z, w) - rhs


def _idp_inverse(tr, x):
    p = _primed(tr)
    return p(~x) - p(x)


def _idp_cyclic(tr, x, y):
    p = _primed(tr)
    return p(x, y) - p(y, x)


def _idp_product_inverse(tr, x, y):
    p = _primed(tr)
    X, Y = p(x), p(y)
    return p(x, y) + p(x, ~y) - (2 * X + 2 * Y + X * Y)


def _idp_swap_three(tr, x, y, z):
    p = _primed(tr)
    X, Y, Z = p(x), p(y), p(z)
    XY, YZ, XZ = p(x, y), p(y, z), p(x, z)
    rhs = (-2 * (X + Y + Z) + 2 * (XY + YZ + XZ) + X * YZ + Y * XZ + Z * XY
           - 2 * (X * Y + Y * Z + Z * X) - X * Y * Z)
    return p(x, y, z) + p(y, x, z) - rhs


def _idp_commutator(tr, x, y):
    from .freegroup import commutator
    p = _primed(tr)
    X, Y, XY = p(x), p(y), p(x, y)
    rhs = X * X + Y * Y + XY * XY - 2 * (X * Y + X * XY + Y * XY) - X * Y * XY
    return p(commutator(x, y)) - rhs


def _four_block_parts(p, x, y, z, w):
    X, Y, Z, W = p(x), p(y), p(z), p(w)
    two = dict(XY=p(x, y), XZ=p(x, z), XW=p(x, w), YZ=p(y, z), YW=p(y, w), ZW=p(z, w))
    three = dict(XYZ=p(x, y, z), XYW=p(x, y, w), XZW=p(x, z, w), YZW=p(y, z, w))
    base = 2 * (X + Y + Z + W) - 2 * sum(two.values()) + 2 * sum(three.values())
    return X, Y, Z, W, two, three, base


def _idp_four_block(tr, x, y, z, w):
    p = _primed(tr)
    X, Y, Z, W, d, t, base = _four_block_parts(p, x, y, z, w)
    rhs = (base + 2 * (X * Y + X * W + Y * Z + Z * W + 2 * X * Z + 2 * Y * W)
           - 2 * (X * d["YZ"] + X * d["ZW"] + Y * d["XW"] + Y * d["ZW"]
                  + Z * d["XY"] + Z * d["XW"] + W * d["XY"] + W * d["YZ"])
           + X * p(y, z, w) + Y * t["XZW"] + Z * t["XYW"] + W * t["XYZ"]
           + d["XY"] * d["ZW"] - d["XZ"] * d["YW"] + d["XW"] * d["YZ"]
           - (X * Y * d["ZW"] + Y * Z * d["XW"] + X * W * d["YZ"] + Z * W * d["XY"])
           + X * Y * Z * W + 2 * (X * Y * Z + X * Y * W + X * Z * W + Y * Z * W))
    return 2 * p(x, y, z, w) - rhs


def _idp_four_block_regrouped(tr, x, y, z, w):
    """Four-block expansion regrouped into differences ``tr' beta w - tr' beta``."""
    p = _primed(tr)
    X, Y, Z, W, d, t, base = _four_block_parts(p, x, y, z, w)
    XY, XZ, XW, YZ, YW, ZW = (d[k] for k in ("XY", "XZ", "XW", "YZ", "YW", "ZW"))
    XYZ, XYW, XZW, YZW = (t[k] for k in ("XYZ", "XYW", "XZW", "YZW"))
    rhs = (base + 2 * ((X - XW) * Y + Y * (Z - ZW) + (X - XW) * Z + X * (Z - ZW))
           - X * (YZ - YZW) - (X - XW) * YZ - (Z - ZW) * XY
           - Z * (XY - XYW) + Y * (XZW - XZ) + XZ * (Y - YW)
           + X * Y * (Z - ZW) + Y * Z * (X - XW)
           + 2 * X * W + 2 * Z * W + 4 * Y * W - 2 * W * XY - 2 * W * YZ + W * XYZ
           + X * Y * Z * W - X * W * YZ - Z * W * XY
           + 2 * (X * Y * W + X * Z * W + Y * Z * W))
    return 2 * p(x, y, z, w) - rhs


def _idp_conjugated_commutator(tr, z, a, b):
    from .freegroup import commutator
    p = _primed(tr)
    Z, A, B = p(z), p(a), p(b)
    ZA, ZB, AB, ZAB = p(z, a), p(z, b), p(a, b), p(z, a, b)
    rhs = (Z + 2 * (Z + A + B) - 2 * (ZA + ZB + AB) + 2 * ZAB
           + ZA * A - ZB * B + 4 * Z * B + 2 * B * B
           - 2 * ZA * B - 2 * AB * B - 2 * ZA * AB
           + AB * ZAB + Z * B * B - ZA * AB * B)
    return p(z, commutator(a, b)) - rhs


def _idp_conjugated_commutator_differences(tr, z, a, b):
    from .freegroup import commutator
    p = _primed(tr)
    Z, A, B = p(z), p(a), p(b)
    ZA, BZA, BZ, BA = p(z, a), p(b, z, a), p(b, z), p(b, a)
    rhs = (Z - 2 * (ZA - Z) + 2 * (BZA - BZ) - 2 * (BA - B)
           + (BZA - BZ) * B + (BA - B) * BZA - 2 * (ZA - Z) * B
           - 2 * (BA - B) * B - 2 * (ZA - Z) * B - 2 * (BA - B) * ZA
           - (ZA - Z) * B * B - (BA - B) * B * ZA + 2 * A + ZA * A)
    return p(z, commutator(a, b)) - rhs


TRACE_IDENTITIES = {
    "inverse": (1, _id_inverse),
    "cyclic": (2, _id_cyclic),
    "product_plus_inverse": (2, _id_product_inverse),
    "swap_three": (3, _id_swap_three),
    "commutator": (2, _id_commutator),
    "four_block": (4, _id_four_block),
    "primed_inverse": (1, _idp_inverse),
    "primed_cyclic": (2, _idp_cyclic),
    "primed_product_plus_inverse": (2, _idp_product_inverse),
    "primed_swap_three": (3, _idp_swap_three),
    "primed_commutator": (2, _idp_commutator),
    "primed_four_block": (4, _idp_four_block),
    "primed_four_block_regrouped": (4, _idp_four_block_regrouped),
    "conjugated_commutator": (3, _idp_conjugated_commutator),
    "conjugated_commutator_differences": (3, _idp_conjugated_commutator_differences),
}

SUITE_RANK = 3
MAX_LETTERS = 3


def _random_word(rng: random.Random, n: int, max_len: int = MAX_LETTERS) -> Word:
    return Word.from_units(n, [rng.choice((1, -1)) * rng.randint(1, n)
                               for _ in range(rng.randint(1, max_len))])


def _shrink(words: list, fails: Callable) -> list:
    """Greedily delete letters while the failure persists."""
    words = list(words)
    changed = True
    while changed:
        changed = False
        for i, w in enumerate(words):
            u = w.units()
            for k in range(len(u)):
                cand = words[:i] + [Word.from_units(w.n, u[:k] + u[k + 1:])] + words[i + 1:]
                if fails(cand):
                    words, changed = cand, True
                    break
            if changed:
                break
    return words


def _name_seed(seed: int, name: str) -> int:
    return seed ^ zlib.crc32(name.encode())


def _run_check(name: str, trials: int, seed: int, threads: int, one: Callable) -> CheckResult:
    base = _name_seed(seed, name)
    results = _map(lambda k: one(trial_rng(base, k), k), range(trials), threads)
    return CheckResult(name, trials, [f for f in results if f is not None])


def _identity_check(name: str, arity: int, fn: Callable, trials: int, seed: int,
                    threads: int, n: int = SUITE_RANK) -> CheckResult:
    def one(rng, k):
        ws = [_random_word(rng, n) for _ in range(arity)]
        r = random_representation(n, rng)
        for mode, make in (("matrix", _matrix_trace), ("reducer", _reducer_trace)):
            tr = make(r)
            val = fn(tr, *ws)
            if val:
                small = _shrink(ws, lambda c: fn(tr, *c) != 0)
                return {"trial": k, "mode": mode, "value": str(val),
                        "words": [str(w) for w in small], "representation": _rep_json(r)}
        return None
    return _run_check(name, trials, seed, threads, one)


# -- jet-level filtration statements ----------------------------------------

def _jet(w: Word):
    from .jets import word_jet
    return word_jet(w)


def _left_normed(rng: random.Random, n: int, k: int) -> Word:
    from .freegroup import left_normed
    return left_normed([_random_word(rng, n, 2) for _ in range(k)])


def _jet_claims(kind: str, rng: random.Random, n: int):
    """Returns (words, jet, required vanishing degree) for one random instance."""
    from .freegroup import commutator, left_normed
    if kind == "commutator_shift_mod_J2":
        z, a, b = (_random_word(rng, n) for _ in range(3))
        j = (_jet(_cat(n, [z, commutator(a, b)])) - _jet(z)
             - _jet(_cat(n, [z, a, b])) + _jet(_cat(n, [z, b, a])))
        return [z, a, b], j, 1
    if kind == "weight3_shift_mod_J2":
        z, a, b, c = (_random_word(rng, n) for _ in range(4))
        e = rng.choice((1, -1))
        c3 = left_normed([a, b, c]) ** e
        return [z, a, b, c], _jet(_cat(n, [z, c3])) - _jet(z), 1
    inverse = kind.endswith("_inverse")
    k = rng.randint(3, 6)
    ak = _left_normed(rng, n, k)
    if inverse:
        ak = ~ak
    if kind.startswith("lcs_trace"):
        return [ak], _jet(ak), (1 if k == 3 else 2)
    b = _random_word(rng, n)
    return [b, ak], _jet(_cat(n, [b, ak])) - _jet(b), (1 if k < 5 else 2)


JET_CLAIMS = ("commutator_shift_mod_J2", "weight3_shift_mod_J2",
              "lcs_trace", "lcs_shift", "lcs_trace_inverse", "lcs_shift_inverse")


def _jet_check(kind: str, trials: int, seed: int, threads: int, n: int = SUITE_RANK) -> CheckResult:
    def one(rng, k):
        words, j, deg = _jet_claims(kind, rng, n)
        if j.linear or (deg >= 2 and j.quadratic):
            return {"trial": k, "words": [str(w) for w in words], "jet": j.to_json_obj(),
                    "required_vanishing_degree": deg}
        return None
    return _run_check(kind, trials, seed, threads, one)


# -- explicit families -------------------------------------------------------

def _matrix_power_trace(trials: int, seed: int, threads: int) -> CheckResult:
    """``tr A^m`` has constant term 2 and linear coefficient m^2 in s."""
    def one(rng, k):
        m = rng.randint(-12, 12)
        co = poly_coefficients(lambda s: (lemma_matrix(s) ** m).trace(), abs(m))
        co += [Fraction(0)] * 2
        if co[0] != 2 or co[1] != m * m:
            return {"trial": k, "m": m, "coefficients": [str(c) for c in co[:2]]}
        return None
    return _run_check("matrix_power_trace", trials, seed, threads, one)


def _family_trace(fid: str, params: dict, placement: tuple, word: str, n: int = SUITE_RANK) -> Fraction:
    from .freegroup import parse_word
    return eval_word(rho_family(fid, n, params, placement), parse_word(word, n)).trace() - 2


def _diagonal_unipotent_forms(P: dict) -> dict:
    s, l, t, m, u = (P[k] for k in ("s", "l", "t", "m", "u"))
    return {
        "x1": s * s / (1 - s),
        "x1 x2": (s * s + 2 * l * s * t - l * s * s * t) / (1 - s),
        "x2 x3": -(l - m) ** 2 * t * u,
        "x1 x2 x3": (s * s + 2 * l * s * t + 2 * m * s * u - (m - l) ** 2 * t * u
                     + 2 * l * (l - m) * s * t * u - l * s * s * t - m * s * s * u
                     + l * (m - l) * s * s * t * u) / (1 - s),
    }


def _diagonal_unipotent_series(P: dict) -> dict:
    """Truncations below degree 4 in (s, t, u)."""
    s, l, t, m, u = (P[k] for k in ("s", "l", "t", "m", "u"))
    return {
        "x1": s * s + s ** 3,
        "x1 x2": s * s + 2 * l * s * t + s ** 3 + l * s * s * t,
        "x1 x2 x3": (s * s + s ** 3 + 2 * l * s * t + 2 * m * s * u - (m - l) ** 2 * t * u
                     + (l * l - m * m) * s * t * u + l * s * s * t + m * s * s * u),
    }


def _random_params(rng: random.Random, fid: str) -> dict:
    while True:
        P = {k: random_rational(rng) for k in FAMILY_PARAMS[fid]}
        if P.get("s", 0) != 1:
            return P


def _family_closed_forms(trials: int, seed: int, threads: int) -> CheckResult:
    def one(rng, k):
        bad = []
        P = _random_params(rng, "1")
        for word, val in _diagonal_unipotent_forms(P).items():
            if _family_trace("1", P, (1, 2, 3), word) != val:
                bad.append(("1", word))
        Q = _random_params(rng, "2")
        kk, s, l, t, m, u = (Q[x] for x in ("k", "s", "l", "t", "m", "u"))
        forms2 = {"x1 x2": -(kk - l) ** 2 * s * t,
                  "x1 x2 x3": ((kk - l) * (l - m) * (m - kk) * s * t * u - (kk - l) ** 2 * s * t
                               - (l - m) ** 2 * t * u - (m - kk) ** 2 * s * u)}
        for word, val in forms2.items():
            if _family_trace("2", Q, (1, 2, 3), word) != val:
                bad.append(("2", word))
        R = _random_params(rng, "11")
        s, t, u = R["s"], R["t"], R["u"]
        forms11 = {"x1 x2 x3": s * t + t * u - s * u - s * t * u,
                   "x1^-1 x2^-1 x3^-1": s * t + t * u - s * u + s * t * u,
                   "x1 x2": s * t}
        for word, val in forms11.items():
            if _family_trace("11", R, (1, 2, 3), word) != val:
                bad.append(("11", word))
        if bad:
            return {"trial": k, "failed": [f"{f}:{w}" for f, w in bad],
                    "params": {f: {a: str(b) for a, b in p.items()} for f, p in (("1", P), ("2", Q), ("11", R))}}
        return None
    return _run_check("family_closed_forms", trials, seed, threads, one)


def _scaled(P: dict, lam, keys) -> dict:
    return {k: (v * lam if k in keys else v) for k, v in P.items()}


def _family_series(trials: int, seed: int, threads: int) -> CheckResult:
    """``(1 - s)(tr' - truncation)`` vanishes to order 4 under (s,t,u) -> lam (s,t,u)."""
    keys = ("s", "t", "u")

    def one(rng, k):
        P = _random_params(rng, "1")
        for word in _diagonal_unipotent_series(P):
            def f(lam, word=word):
                Q = _scaled(P, lam, keys)
                if Q["s"] == 1:
                    raise SingularParameter("scaled s hits 1")
                return (1 - Q["s"]) * (_family_trace("1", Q, (1, 2, 3), word)
                                       - _diagonal_unipotent_series(Q)[word])
            try:
                order = vanishing_order(f, 8)
            except SingularParameter:
                return None
            if order < 4:
                return {"trial": k, "word": word, "order": order,
                        "params": {a: str(b) for a, b in P.items()}}
        return None
    return _run_check("family_series", trials, seed, threads, one)


def _commutator_table() -> dict:
    """Images of commutator powers under the upper/lower unipotent family, mod degree 4.

    Keys are letter roles in (a, b, i); values map (e, s, t, u) to entries.
    """
    return {
        ("b", "a"): lambda e, s, t, u: (1 - e * s * t, e * s * s * t, -e * s * t * t, 1 + e * s * t),
        ("i", "a"): lambda e, s, t, u: (1 + e * (s * u - s * u * u), -e * (2 * s * u + s * s * u - s * u * u),
                                        -e * s * u * u, 1 - e * (s * u - s * u * u)),
        ("i", "b"): lambda e, s, t, u: (1 + e * (t * u + t * u * u), -e * t * u * u,
                                        e * (2 * t * u + t * u * u + t * t * u), 1 - e * (t * u + t * u * u)),
        ("b", "a", "a"): lambda e, s, t, u: (1, -2 * e * s * s * t, 0, 1),
        ("b", "a", "b"): lambda e, s, t, u: (1, 0, 2 * e * s * t * t, 1),
        ("b", "a", "i"): lambda e, s, t, u: (1, -2 * e * s * t * u, -2 * e * s * t * u, 1),
        ("i", "a", "a"): lambda e, s, t, u: (1, 2 * e * s * s * u, 0, 1),
        ("i", "a", "b"): lambda e, s, t, u: (1 - 2 * e * s * t * u, 0, -2 * e * s * t * u, 1 + 2 * e * s * t * u),
        ("i", "a", "i"): lambda e, s, t, u: (1 + 2 * e * s * u * u, -2 * e * s * u * u,
                                             2 * e * s * u * u, 1 - 2 * e * s * u * u),
        ("i", "b", "b"): lambda e, s, t, u: (1, 0, -2 * e * t * t * u, 1),
        ("i", "b", "i"): lambda e, s, t, u: (1 - 2 * e * t * u * u, 2 * e * t * u * u,
                                             -2 * e * t * u * u, 1 + 2 * e * t * u * u),
    }


def _series_mul(p: list, q: list) -> list:
    k = len(p)
    return [sum((p[i] * q[d - i] for i in range(d + 1)), Fraction(0)) for d in range(k)]


def _series_matmul(A: tuple, B: tuple) -> tuple:
    (a, b, c, d), (e, f, g, h) = A, B
    add = lambda x, y: [u + v for u, v in zip(x, y)]
    return (add(_series_mul(a, e), _series_mul(b, g)), add(_series_mul(a, f), _series_mul(b, h)),
            add(_series_mul(c, e), _series_mul(d, g)), add(_series_mul(c, f), _series_mul(d, h)))


def _series_word(gens: dict, w: Word, order: int) -> tuple:
    """Image of ``w`` as power series in lam, truncated below ``order``.

    ``gens[g]`` holds the SL(2) entries of generator g as series; inverses
    are the adjugates.
    """
    one = [Fraction(1)] + [Fraction(0)] * (order - 1)
    zero = [Fraction(0)] * order
    out = (one, zero, zero, one)
    for u in w.units():
        a, b, c, d = gens[abs(u)]
        m = (a, b, c, d) if u > 0 else (d, [-x for x in b], [-x for x in c], a)
        out = _series_matmul(out, m)
    return out


def _linear_series(c0, c1, order: int) -> list:
    return [Fraction(c0), Fraction(c1)] + [Fraction(0)] * (order - 2)


def _commutator_table_check(trials: int, seed: int, threads: int) -> CheckResult:
    """Images under ``(s, t, u) -> lam (s, t, u)`` agree with the table below order 4."""
    from .freegroup import left_normed
    n, order = SUITE_RANK, 4
    role = {"a": 1, "b": 2, "i": 3}
    table = _commutator_table()

    def one(rng, k):
        P = _random_params(rng, "11")
        s, t, u = P["s"], P["t"], P["u"]
        L = lambda c0, c1: _linear_series(c0, c1, order)
        gens = {1: (L(1, 0), L(0, s), L(0, 0), L(1, 0)),
                2: (L(1, 0), L(0, 0), L(0, t), L(1, 0)),
                3: (L(1, -u), L(0, u), L(0, -u), L(1, u))}
        e = rng.choice((-2, -1, 1, 2))
        for key, form in table.items():
            w = left_normed([Word.gen(n, role[c]) for c in key]) ** e
            img = _series_word(gens, w, order)
            vals = [poly_coefficients(lambda lam, idx=idx: form(e, lam * s, lam * t, lam * u)[idx], 3)
                    for idx in range(4)]
            for idx in range(4):
                if img[idx] != vals[idx]:
                    return {"trial": k, "commutator": "".join(key), "e": e, "entry": idx,
                            "params": {a: str(b) for a, b in P.items()}}
        return None
    return _run_check("commutator_table", trials, seed, threads, one)


def _reducer_oracle(trials: int, seed: int, threads: int, n: int, max_len: int = 8) -> CheckResult:
    """Reduced trace polynomial against the matrix trace on random words."""
    from .reduce import trace_reduce

    def one(rng, k):
        w = _random_word(rng, n, max_len)
        r = random_representation(n, rng)
        val = trace_reduce(w).evaluate(char_values(r)) - eval_word(r, w).trace()
        if val:
            small = _shrink([w], lambda c: trace_reduce(c[0]).evaluate(char_values(r))
                            != eval_word(r, c[0]).trace())
            return {"trial": k, "word": str(small[0]), "value": str(val), "representation": _rep_json(r)}
        return None
    return _run_check("reducer_vs_matrix", trials, seed, threads, one)


def lemma_suite(seed: int = 0, trials: int = 100, threads: int = 1, n: int = SUITE_RANK) -> SuiteReport:
    """Every trace identity, jet-level filtration statement and family formula.

    Words live in F_n (n >= 2 for the identities, n >= 3 for the jet
    statements); the explicit families always use rank 3.
    """
    checks = [_reducer_oracle(trials, seed, threads, n)]
    checks += [_identity_check(name, arity, fn, trials, seed, threads, n)
               for name, (arity, fn) in TRACE_IDENTITIES.items()]
    checks += [_jet_check(kind, trials, seed, threads, max(n, 3)) for kind in JET_CLAIMS]
    checks.append(_matrix_power_trace(trials, seed, threads))
    checks.append(_family_closed_forms(trials, seed, threads))
    checks.append(_family_series(trials, seed, threads))
    checks.append(_commutator_table_check(trials, seed, threads))
    return SuiteReport(checks)


def relations_suite(n: int, seed: int = 0, trials: int = 100, threads: int = 1) -> SuiteReport:
    """Relations vanish on representations, lie in J^2, and have the expected rank."""
    from .graded import independence_check, relations_deg2
    rels = list(relations_deg2(n))
    vanish = CheckResult("relations_vanish", trials * len(rels))
    for r in rels:
        rep = identity_check(r.poly, trials, _name_seed(seed, r.label), threads)
        vanish.failures += [dict(f, relation=r.label) for f in rep.failures]
    in_j2 = CheckResult("relations_in_J2", len(rels))
    for r in rels:
        q = r.primed
        if not (q.graded_part(0).is_zero() and q.graded_part(1).is_zero()):
            in_j2.failures.append({"relation": r.label, "degree_1_part": str(q.graded_part(1))})
    checks = [vanish, in_j2]
    if n <= 6:
        rank = CheckResult("quadratic_rank", 1)
        info = independence_check(n)
        if info["rank"] != info["expected"]:
            rank.failures.append(info)
        checks.append(rank)
    return SuiteReport(checks)
