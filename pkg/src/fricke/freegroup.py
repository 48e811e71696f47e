"""Words in the free group F_n, commutators, and the Magnus expansion.

Words are stored run-length as ``(generator, exponent)`` pairs and are freely
reduced on construction.  Commutators follow ``[x, y] = x y x^-1 y^-1`` and
left-normed brackets nest to the left, ``[y1, y2, y3] = [[y1, y2], y3]``.

Automorphisms act on the right: ``a * b`` means "apply ``a``, then ``b``",
i.e. ``x^(ab) = (x^a)^b``.  The lower central series starts at
``Gamma(1) = F_n``; membership in ``Gamma(k)`` is decided by the Magnus
expansion ``x_i -> 1 + X_i`` (a word lies in ``Gamma(k)`` iff its expansion
has no terms of degree 1..k-1).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

MAGNUS_CAP = 6


class WordSyntaxError(ValueError):
    """Text does not follow the word grammar."""


class IndexOutOfRange(ValueError):
    """A generator index exceeds the rank."""


class RankMismatch(ValueError):
    """Operands live in free groups of different rank."""


class InfiniteWeight(ValueError):
    """The identity lies in every term of the lower central series."""


class NotAnAutomorphism(ValueError):
    """The supplied inverse does not invert the forward map."""


def _reduce(letters: Iterable[tuple]) -> tuple:
    out: list = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e2 = out[-1][1] + e
            out.pop()
            if e2:
                out.append((g, e2))
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    n: int
    letters: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rank must be positive")
        for g, e in self.letters:
            if not 1 <= g <= self.n:
                raise IndexOutOfRange(f"generator x{g} not in F_{self.n}")
        object.__setattr__(self, "letters", _reduce((int(g), int(e)) for g, e in self.letters))

    @classmethod
    def identity(cls, n: int) -> "Word":
        return cls(n, ())

    @classmethod
    def gen(cls, n: int, g: int, e: int = 1) -> "Word":
        return cls(n, ((g, e),))

    @classmethod
    def from_units(cls, n: int, units: Iterable[int]) -> "Word":
        """Build from signed unit letters, ``-2`` meaning ``x2^-1``."""
        return cls(n, tuple((abs(u), 1 if u > 0 else -1) for u in units))

    def units(self) -> tuple:
        """Signed unit letters, e.g. ``x1^2 x2^-1 -> (1, 1, -2)``."""
        out = []
        for g, e in self.letters:
            out.extend([g if e > 0 else -g] * abs(e))
        return tuple(out)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else invert(self)
        out = Word.identity(self.n)
        for _ in range(abs(k)):
            out = multiply(out, base)
        return out

    def __str__(self) -> str:
        if not self.letters:
            return ""
        return " ".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in self.letters)

    def __repr__(self) -> str:
        return f"Word({self.n}, '{self}')"


_TERM = re.compile(r"x(\d+)(?:\^([+-]?\d+))?")


def parse_word(text: str, n: int) -> Word:
    letters = []
    for tok in text.split():
        m = _TERM.fullmatch(tok)
        if not m:
            raise WordSyntaxError(f"cannot parse {tok!r} in {text!r}")
        g = int(m.group(1))
        e = int(m.group(2)) if m.group(2) is not None else 1
        if not 1 <= g <= n:
            raise IndexOutOfRange(f"generator x{g} not in F_{n}")
        letters.append((g, e))
    return Word(n, tuple(letters))


def _same_rank(*ws: Word) -> int:
    ranks = {w.n for w in ws}
    if len(ranks) != 1:
        raise RankMismatch(f"ranks differ: {sorted(ranks)}")
    return ranks.pop()


def multiply(u: Word, v: Word) -> Word:
    n = _same_rank(u, v)
    return Word(n, u.letters + v.letters)


def invert(u: Word) -> Word:
    return Word(u.n, tuple((g, -e) for g, e in reversed(u.letters)))


def commutator(u: Word, v: Word) -> Word:
    n = _same_rank(u, v)
    return Word(n, u.letters + v.letters + invert(u).letters + invert(v).letters)


def left_normed(ws: Sequence[Word]) -> Word:
    if len(ws) < 2:
        raise ValueError("a left-normed commutator needs at least two entries")
    out = ws[0]
    for w in ws[1:]:
        out = commutator(out, w)
    return out


def cyclic_reduce(w: Word) -> tuple:
    """Return ``(core, conj)`` with ``w = conj * core * conj^-1``."""
    letters = list(w.letters)
    prefix = []
    while len(letters) >= 2 and letters[0][0] == letters[-1][0]:
        g, e0 = letters[0]
        e1 = letters[-1][1]
        if e0 + e1 == 0:
            prefix.append((g, e0))
            letters = letters[1:-1]
        else:
            # merge the ends: x^e0 ... x^e1 is conjugate to ... x^(e0+e1)
            prefix.append((g, e0))
            letters = letters[1:-1] + [(g, e0 + e1)]
            break
    core = Word(w.n, tuple(letters))
    conj = Word(w.n, tuple(prefix))
    return core, conj


# -- Magnus expansion --------------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    """Element of Z<<X_1..X_n>> truncated above degree ``d``.

    ``coeffs`` maps monomials (tuples of generator indices) to integers; the
    empty tuple is the constant term.
    """

    n: int
    d: int
    coeffs: dict = field(default_factory=dict)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if (self.n, self.d) != (other.n, other.d):
            raise RankMismatch("series of different shape")
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                if len(m1) + len(m2) > self.d:
                    continue
                m = m1 + m2
                out[m] = out.get(m, 0) + c1 * c2
        return TruncatedSeries(self.n, self.d, {m: c for m, c in out.items() if c})

    def is_one(self) -> bool:
        return self.coeffs == {(): 1}

    def part(self, k: int) -> dict:
        return {m: c for m, c in self.coeffs.items() if len(m) == k}

    def min_degree(self) -> int | None:
        """Smallest positive degree carrying a nonzero coefficient."""
        ds = [len(m) for m, c in self.coeffs.items() if m and c]
        return min(ds) if ds else None

    def __str__(self) -> str:
        parts = []
        for m, c in sorted(self.coeffs.items(), key=lambda mc: (len(mc[0]), mc[0])):
            mono = "".join(f"X{g}" for g in m) or "1"
            parts.append(f"{c}*{mono}" if m and c != 1 else (mono if c == 1 else f"{c}"))
        return " + ".join(parts) if parts else "0"


def _letter_series(g: int, e: int, d: int) -> list:
    """Coefficients of (1 + X_g)^e up to degree d as ``[(k, c_k)]``."""
    out = []
    for k in range(d + 1):
        if e >= 0:
            c = comb(e, k)
        else:
            c = (-1) ** k * comb(-e + k - 1, k)
        if c:
            out.append((k, c))
    return out


def magnus(w: Word, d: int, cap: int = MAGNUS_CAP) -> TruncatedSeries:
    if d < 1:
        raise ValueError("cutoff must be at least 1")
    if d > cap:
        raise ValueError(f"Magnus cutoff {d} exceeds the configured cap {cap}")
    cur = {(): 1}
    for g, e in w.letters:
        series = _letter_series(g, e, d)
        nxt: dict = {}
        for m, c in cur.items():
            room = d - len(m)
            for k, ck in series:
                if k > room:
                    break
                key = m + (g,) * k
                nxt[key] = nxt.get(key, 0) + c * ck
        cur = {m: c for m, c in nxt.items() if c}
    return TruncatedSeries(w.n, d, cur)


def lcs_weight(w: Word, max_k: int, cap: int = MAGNUS_CAP) -> int:
    """Largest ``k <= max_k`` with ``w`` in ``Gamma(k)``."""
    if w.is_identity():
        raise InfiniteWeight("the identity lies in every Gamma(k)")
    if max_k <= 1:
        return 1
    low = magnus(w, max_k - 1, cap).min_degree()
    return max_k if low is None else low


# -- endomorphisms and automorphisms -----------------------------------------

@dataclass(frozen=True)
class Endomorphism:
    n: int
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.n:
            raise ValueError(f"need {self.n} images, got {len(self.images)}")
        for w in self.images:
            if w.n != self.n:
                raise RankMismatch("image rank differs from the endomorphism rank")
        object.__setattr__(self, "images", tuple(self.images))

    @classmethod
    def identity(cls, n: int) -> "Endomorphism":
        return cls(n, tuple(Word.gen(n, i) for i in range(1, n + 1)))

    def __str__(self) -> str:
        return "; ".join(f"x{i} -> {w}" for i, w in enumerate(self.images, 1))


def apply(e: Endomorphism, w: Word) -> Word:
    if e.n != w.n:
        raise RankMismatch("word and endomorphism ranks differ")
    letters: list = []
    for g, k in w.letters:
        img = e.images[g - 1].letters
        if k < 0:
            img = tuple((h, -f) for h, f in reversed(img))
        letters.extend(img * abs(k))
    return Word(w.n, tuple(letters))


def compose(e: Endomorphism, f: Endomorphism) -> Endomorphism:
    """``e`` then ``f``: x -> (x^e)^f."""
    return Endomorphism(e.n, tuple(apply(f, w) for w in e.images))


def is_identity_map(e: Endomorphism) -> bool:
    return all(w.letters == ((i, 1),) for i, w in enumerate(e.images, 1))


class Automorphism:
    """Automorphism given by generator images and the images of its inverse.

    Products remember their atomic factors and expand their images only on
    demand, so jet computations can work factor by factor.
    """

    __slots__ = ("_forward", "_inverse", "factors")

    def __init__(self, forward: Endomorphism, inverse: Endomorphism, factors: tuple = ()):
        if forward.n != inverse.n:
            raise RankMismatch("forward and inverse ranks differ")
        if not (is_identity_map(compose(forward, inverse))
                and is_identity_map(compose(inverse, forward))):
            raise NotAnAutomorphism("supplied inverse does not invert the map")
        self._forward, self._inverse, self.factors = forward, inverse, tuple(factors)

    @property
    def n(self) -> int:
        return self.factor_list()[0]._forward.n if self._forward is None else self._forward.n

    @property
    def forward(self) -> Endomorphism:
        if self._forward is None:
            e = self.factors[0].forward
            for f in self.factors[1:]:
                e = compose(e, f.forward)
            self._forward = e
        return self._forward

    @property
    def inverse(self) -> Endomorphism:
        if self._inverse is None:
            e = self.factors[-1].inverse
            for f in reversed(self.factors[:-1]):
                e = compose(e, f.inverse)
            self._inverse = e
        return self._inverse

    @classmethod
    def identity(cls, n: int) -> "Automorphism":
        e = Endomorphism.identity(n)
        return cls(e, e)

    @classmethod
    def _unchecked(cls, forward: Endomorphism | None, inverse: Endomorphism | None,
                   factors: tuple = ()) -> "Automorphism":
        obj = object.__new__(cls)
        obj._forward, obj._inverse, obj.factors = forward, inverse, factors
        return obj

    def factor_list(self) -> tuple:
        """Atomic factors in application order."""
        return self.factors or (self,)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.forward == other.forward

    def __hash__(self) -> int:
        return hash(self.forward)

    def __repr__(self) -> str:
        return f"Automorphism({self.forward!r})"

    def __call__(self, w: Word) -> Word:
        for f in self.factor_list():
            w = apply(f.forward, w)
        return w

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        if self.n != other.n:
            raise RankMismatch("automorphism ranks differ")
        return Automorphism._unchecked(None, None, self.factor_list() + other.factor_list())

    def inv(self) -> "Automorphism":
        if not self.factors:
            return Automorphism._unchecked(self._inverse, self._forward)
        parts = tuple(f.inv() for f in reversed(self.factors))
        return Automorphism._unchecked(self._inverse, self._forward, parts)

    def conj(self, other: "Automorphism") -> "Automorphism":
        """``other^-1 * self * other``."""
        return other.inv() * self * other

    def __str__(self) -> str:
        return str(self.forward)


def aut_commutator(a: Automorphism, b: Automorphism) -> Automorphism:
    """``[a, b] = a b a^-1 b^-1`` in the composition order of ``*``."""
    return a * b * a.inv() * b.inv()


def inner(y: Word) -> Automorphism:
    """The inner automorphism ``x -> y^-1 x y``."""
    n = y.n
    yi = invert(y)
    fwd = tuple(multiply(multiply(yi, Word.gen(n, i)), y) for i in range(1, n + 1))
    bwd = tuple(multiply(multiply(y, Word.gen(n, i)), yi) for i in range(1, n + 1))
    return Automorphism._unchecked(Endomorphism(n, fwd), Endomorphism(n, bwd))


def transvection(n: int, i: int, c: Word) -> Automorphism:
    """``x_i -> x_i c`` with ``c`` free of ``x_i``; all other generators fixed."""
    if any(g == i for g, _ in c.letters):
        raise ValueError("the factor must not involve the moved generator")
    fwd = [Word.gen(n, k) for k in range(1, n + 1)]
    bwd = list(fwd)
    fwd[i - 1] = multiply(Word.gen(n, i), c)
    bwd[i - 1] = multiply(Word.gen(n, i), invert(c))
    return Automorphism._unchecked(Endomorphism(n, tuple(fwd)), Endomorphism(n, tuple(bwd)))


def nielsen(kind: str, n: int) -> Automorphism:
    """Elementary Nielsen maps ``P12`` (swap), ``I1`` (invert), ``M12`` (x1 -> x1 x2)."""
    m = re.fullmatch(r"([PIM])(\d)(\d)?", kind)
    if not m:
        raise ValueError(f"unknown Nielsen generator {kind!r}")
    op, i = m.group(1), int(m.group(2))
    j = int(m.group(3)) if m.group(3) else None
    if (op == "I") != (j is None) or i > n or (j is not None and (j > n or j == i)):
        raise ValueError(f"bad Nielsen generator {kind!r} for rank {n}")
    gens = [Word.gen(n, k) for k in range(1, n + 1)]
    fwd, bwd = list(gens), list(gens)
    if op == "P":
        fwd[i - 1], fwd[j - 1] = gens[j - 1], gens[i - 1]
        bwd = list(fwd)
    elif op == "I":
        fwd[i - 1] = bwd[i - 1] = Word.gen(n, i, -1)
    else:
        fwd[i - 1] = multiply(gens[i - 1], gens[j - 1])
        bwd[i - 1] = multiply(gens[i - 1], Word.gen(n, j, -1))
    return Automorphism(Endomorphism(n, tuple(fwd)), Endomorphism(n, tuple(bwd)))


def aut_depth(a: Automorphism | Endomorphism, max_k: int, cap: int = MAGNUS_CAP) -> int:
    """Largest ``k <= max_k`` with ``a`` in ``A(k)``; 0 when not even IA."""
    e = a.forward if isinstance(a, Automorphism) else a
    depth = max_k
    for i in range(1, e.n + 1):
        c = multiply(e.images[i - 1], Word.gen(e.n, i, -1))
        if c.is_identity():
            continue
        depth = min(depth, lcs_weight(c, max_k + 1, cap) - 1)
        if depth == 0:
            break
    return depth


def parse_endomorphism(text: str, n: int) -> Endomorphism:
    """Parse ``"x1 -> w1; x2 -> w2"``; omitted generators are fixed."""
    images = [Word.gen(n, i) for i in range(1, n + 1)]
    seen = set()
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise WordSyntaxError(f"expected 'x<i> -> <word>' in {part!r}")
        lhs, rhs = part.split("->", 1)
        m = re.fullmatch(r"x(\d+)", lhs.strip())
        if not m:
            raise WordSyntaxError(f"bad left-hand side {lhs.strip()!r}")
        i = int(m.group(1))
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"generator x{i} not in F_{n}")
        if i in seen:
            raise WordSyntaxError(f"x{i} assigned twice")
        seen.add(i)
        images[i - 1] = parse_word(rhs, n)
    return Endomorphism(n, tuple(images))


def parse_automorphism(text: str, n: int, inverse: str | None = None) -> Automorphism:
    """Accept an explicit map (with ``inverse``) or a shorthand.

    Shorthands: ``nielsen:P12``, ``nielsen:I1``, ``nielsen:M12`` and
    ``inner:<word>``.
    """
    text = text.strip()
    if text.startswith("nielsen:"):
        return nielsen(text[len("nielsen:"):].strip(), n)
    if text.startswith("inner:"):
        return inner(parse_word(text[len("inner:"):], n))
    fwd = parse_endomorphism(text, n)
    if inverse is None:
        raise NotAnAutomorphism("an explicit map needs its inverse")
    return Automorphism(fwd, parse_endomorphism(inverse, n))
