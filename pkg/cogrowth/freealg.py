"""Phase 2: Free algebra – deglex order, exact polynomials, reduction."""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from cogrowth.models import Alphabet, ParseError, UsageError, Word

LESS, EQUAL, GREATER = -1, 0, 1


# ---------------------------------------------------------------------------
# Coefficient fields
# ---------------------------------------------------------------------------

class RationalField:
    """Exact rationals (the default)."""

    name = "rational"

    def coerce(self, num: int, den: int = 1) -> Fraction:
        if den == 0:
            raise UsageError("zero denominator")
        return Fraction(num, den)

    @property
    def one(self) -> Fraction:
        return Fraction(1)


class PrimeElement:
    """Element of GF(p); immutable."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int) -> None:
        self.p = p
        self.value = value % p

    def _lift(self, other: Any) -> int:
        if isinstance(other, PrimeElement):
            if other.p != self.p:
                raise UsageError(f"field mismatch: GF({self.p}) vs GF({other.p})")
            return other.value
        return int(other)

    def __add__(self, other: Any) -> "PrimeElement":
        return PrimeElement(self.value + self._lift(other), self.p)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "PrimeElement":
        return PrimeElement(self.value - self._lift(other), self.p)

    def __rsub__(self, other: Any) -> "PrimeElement":
        return PrimeElement(self._lift(other) - self.value, self.p)

    def __mul__(self, other: Any) -> "PrimeElement":
        return PrimeElement(self.value * self._lift(other), self.p)

    __rmul__ = __mul__

    def __neg__(self) -> "PrimeElement":
        return PrimeElement(-self.value, self.p)

    def inverse(self) -> "PrimeElement":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return PrimeElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other: Any) -> "PrimeElement":
        return self * PrimeElement(self._lift(other), self.p).inverse()

    def __rtruediv__(self, other: Any) -> "PrimeElement":
        return PrimeElement(self._lift(other), self.p) * self.inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PrimeElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.p))

    def __repr__(self) -> str:
        return f"GF{self.p}({self.value})"

    def __str__(self) -> str:
        return str(self.value)


class PrimeField:
    def __init__(self, p: int) -> None:
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise UsageError(f"{p} is not prime")
        self.p = p
        self.name = f"prime:{p}"

    def coerce(self, num: int, den: int = 1) -> PrimeElement:
        if den % self.p == 0:
            raise UsageError(f"denominator {den} vanishes in GF({self.p})")
        return PrimeElement(num, self.p) / den

    @property
    def one(self) -> PrimeElement:
        return PrimeElement(1, self.p)


Field = RationalField | PrimeField
RATIONAL = RationalField()


def field_from_name(name: str) -> Field:
    if name == "rational":
        return RATIONAL
    if name.startswith("prime:"):
        try:
            return PrimeField(int(name.split(":", 1)[1]))
        except ValueError:
            raise UsageError(f"invalid prime field {name!r}") from None
    raise UsageError(f"unknown coefficient field {name!r}")


# ---------------------------------------------------------------------------
# Order
# ---------------------------------------------------------------------------

def deglex_key(w: Word) -> tuple[int, Word]:
    return (len(w), w)


def deglex_cmp(u: Word, v: Word, alphabet: Alphabet | None = None) -> int:
    """Compare by length, then lexicographically by letter precedence.

    Words are bare index tuples, so the only alphabet check is the optional
    ``alphabet`` bound on letter indices.
    """
    if alphabet is not None:
        alphabet.validate(u)
        alphabet.validate(v)
    ku, kv = deglex_key(u), deglex_key(v)
    if ku < kv:
        return LESS
    if ku > kv:
        return GREATER
    return EQUAL


def contains_at(word: Word, sub: Word) -> int:
    """Leftmost occurrence of ``sub`` in ``word`` or -1."""
    n, k = len(word), len(sub)
    for pos in range(n - k + 1):
        if word[pos:pos + k] == sub:
            return pos
    return -1


def is_subword(sub: Word, word: Word) -> bool:
    return contains_at(word, sub) >= 0


# ---------------------------------------------------------------------------
# Polynomials (immutable)
# ---------------------------------------------------------------------------

Term = tuple[Any, Word]


@dataclass(frozen=True)
class Poly:
    terms: tuple[Term, ...] = ()   # strictly descending in deglex, nonzero coefficients

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def lead_word(self) -> Word:
        if not self.terms:
            raise UsageError("the zero polynomial has no leading word")
        return self.terms[0][1]

    @property
    def lead_coeff(self) -> Any:
        if not self.terms:
            raise UsageError("the zero polynomial has no leading coefficient")
        return self.terms[0][0]

    @property
    def degree(self) -> int:
        return max((len(w) for _, w in self.terms), default=-1)

    @property
    def is_monic(self) -> bool:
        return bool(self.terms) and self.terms[0][0] == 1

    def words(self) -> list[Word]:
        return [w for _, w in self.terms]

    def coeff(self, word: Word) -> Any:
        for c, w in self.terms:
            if w == word:
                return c
        return 0

    def tail(self) -> "Poly":
        return Poly(self.terms[1:])

    def monic(self) -> "Poly":
        lc = self.lead_coeff
        return Poly(tuple((c / lc, w) for c, w in self.terms))

    def scale(self, c: Any) -> "Poly":
        if c == 0:
            return Poly()
        return Poly(tuple((c * a, w) for a, w in self.terms))

    def mul_words(self, left: Word = (), right: Word = ()) -> "Poly":
        # word multiplication preserves deglex order of the terms
        return Poly(tuple((c, left + w + right) for c, w in self.terms))

    def __add__(self, other: "Poly") -> "Poly":
        return poly_normalize(self.terms + other.terms)

    def __neg__(self) -> "Poly":
        return Poly(tuple((-c, w) for c, w in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    @classmethod
    def monomial(cls, word: Word, coeff: Any = 1) -> "Poly":
        return cls(((coeff, word),)) if coeff != 0 else cls()


def poly_normalize(raw_terms: Iterable[tuple[Any, Word]]) -> Poly:
    """Merge like terms, drop zeros, sort strictly descending in deglex."""
    acc: dict[Word, Any] = {}
    for c, w in raw_terms:
        acc[w] = acc[w] + c if w in acc else c
    terms = [(c, w) for w, c in acc.items() if c != 0]
    terms.sort(key=lambda t: deglex_key(t[1]), reverse=True)
    return Poly(tuple(terms))


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------

def reduce_once(p: Poly, g: Poly, at: tuple[int, int]) -> Poly:
    """Replace the occurrence of lead(g) in monomial ``at[0]`` of p at position ``at[1]``."""
    if not g.is_monic:
        raise UsageError("reducer must be monic")
    index, pos = at
    if not 0 <= index < len(p.terms):
        raise UsageError(f"monomial index {index} out of range")
    c, word = p.terms[index]
    lead = g.lead_word
    if pos < 0 or word[pos:pos + len(lead)] != lead:
        raise UsageError(f"leading word of reducer does not occur at position {pos}")
    u, v = word[:pos], word[pos + len(lead):]
    return p - g.mul_words(u, v).scale(c)


class _LeadIndex:
    """Lookup of basis leads by length for subword matching."""

    def __init__(self, basis: Mapping[Word, Poly]) -> None:
        self.basis = basis
        self.lengths = sorted({len(w) for w in basis})

    def match(self, word: Word) -> tuple[int, Word] | None:
        """Leftmost occurrence; among leads there, the deglex-least."""
        for pos in range(len(word) + 1):
            for k in self.lengths:
                if pos + k > len(word):
                    break
                piece = word[pos:pos + k]
                if piece in self.basis:
                    return pos, piece
        return None


def _heap_key(w: Word) -> tuple[int, tuple[int, ...]]:
    # max-heap over deglex by negation
    return (-len(w), tuple(-i for i in w))


def normal_form(p: Poly, basis: Mapping[Word, Poly] | Sequence[Poly]) -> Poly:
    """Fully reduce p: greatest reducible monomial first, leftmost occurrence, least lead."""
    if not isinstance(basis, Mapping):
        basis = {g.lead_word: g for g in basis}
    for lead, g in basis.items():
        if not g.is_monic:
            raise UsageError("basis elements must be monic")
    if not basis or p.is_zero:
        return p
    index = _LeadIndex(basis)
    acc: dict[Word, Any] = {w: c for c, w in p.terms}
    heap = [_heap_key(w) + (w,) for w in acc]
    heapq.heapify(heap)
    out: list[Term] = []
    while heap:
        *_, w = heapq.heappop(heap)
        c = acc.pop(w, 0)
        if c == 0:
            continue
        hit = index.match(w)
        if hit is None:
            out.append((c, w))
            continue
        pos, lead = hit
        u, v = w[:pos], w[pos + len(lead):]
        # lower-order tail terms enter the queue; all are deglex-smaller than w
        for tc, tw in basis[lead].terms[1:]:
            m = u + tw + v
            if m in acc:
                acc[m] = acc[m] - c * tc
            else:
                acc[m] = -c * tc
                heapq.heappush(heap, _heap_key(m) + (m,))
    return Poly(tuple(out))


def is_member(p: Poly, basis: Mapping[Word, Poly], saturated: bool) -> bool | None:
    """Word problem: True if p reduces to 0, False if not and the basis is complete."""
    if normal_form(p, basis).is_zero:
        return True
    return False if saturated else None


# ---------------------------------------------------------------------------
# Text grammar
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))")


def _tokenize(text: str, line: int, source: str, offset: int = 0) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col + offset, source)
        kind = m.lastgroup or "op"
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return tokens


class _PolyParser:
    def __init__(self, text: str, alphabet: Alphabet, field: Field,
                 line: int, source: str, column_offset: int) -> None:
        self.alphabet = alphabet
        self.field = field
        self.line = line
        self.source = source
        self.offset = column_offset
        self.end_col = len(text) + 1 + column_offset
        self.tokens = _tokenize(text, line, source, column_offset)
        self.i = 0

    def error(self, reason: str, col: int | None = None) -> ParseError:
        if col is None:
            col = self.tokens[self.i][2] if self.i < len(self.tokens) else self.end_col - self.offset
        return ParseError(reason, self.line, col + self.offset, self.source)

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of polynomial")
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.tokens:
            raise self.error("empty polynomial")
        raw: list[tuple[Any, Word]] = []
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            self.i += 1
        raw.append(self.term(sign))
        while self.peek() is not None:
            kind, val, col = self.take()
            if kind != "op" or val not in "+-":
                raise self.error(f"expected '+' or '-', found {val!r}", col)
            raw.append(self.term(-1 if val == "-" else 1))
        return poly_normalize(raw)

    def term(self, sign: int) -> tuple[Any, Word]:
        num, den = 1, 1
        has_coeff = False
        tok = self.peek()
        if tok is not None and tok[0] == "num":
            self.i += 1
            num = int(tok[1])
            has_coeff = True
            nxt = self.peek()
            if nxt is not None and nxt[1] == "/":
                self.i += 1
                kind, val, col = self.take()
                if kind != "num":
                    raise self.error("expected denominator", col)
                den = int(val)
                if den == 0:
                    raise self.error("zero denominator", col)
            nxt = self.peek()
            if nxt is None or (nxt[0] == "op" and nxt[1] in "+-"):
                return self.field.coerce(sign * num, den), ()
            if nxt[1] != "*":
                raise self.error(f"expected '*' after coefficient, found {nxt[1]!r}")
            self.i += 1
        word: list[int] = list(self.factor())
        while self.peek() is not None and self.peek()[1] == "*":
            self.i += 1
            word.extend(self.factor())
        if not has_coeff and not word:
            raise self.error("empty term")
        return self.field.coerce(sign * num, den), tuple(word)

    def factor(self) -> Word:
        kind, val, col = self.take()
        if kind == "num" and val == "1":
            base: Word = ()
        elif kind == "name":
            base = self.letters(val, col)
        else:
            raise self.error(f"expected a letter, found {val!r}", col)
        nxt = self.peek()
        if nxt is not None and nxt[1] == "^":
            self.i += 1
            kind, val, col = self.take()
            if kind != "num":
                raise self.error("expected exponent", col)
            return base * int(val)
        return base

    def letters(self, name: str, col: int) -> Word:
        if name in self.alphabet.letters:
            return (self.alphabet.letters.index(name),)
        if self.alphabet.compact and all(ch in self.alphabet.letters for ch in name):
            return tuple(self.alphabet.letters.index(ch) for ch in name)
        raise self.error(f"unknown letter {name!r}", col)


def parse_poly(text: str, alphabet: Alphabet, field: Field = RATIONAL, *,
               line: int = 1, source: str = "<input>", column_offset: int = 0) -> Poly:
    """Parse ``2/3*x*x*y + y - 1`` into a normalized Poly."""
    return _PolyParser(text, alphabet, field, line, source, column_offset).parse()


def _format_coeff(c: Any) -> str:
    return str(c)


def format_poly(p: Poly, alphabet: Alphabet) -> str:
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for i, (c, w) in enumerate(p.terms):
        negative = isinstance(c, Fraction) and c < 0
        mag = -c if negative else c
        if w:
            body = "*".join(alphabet.letters[j] for j in w)
            text = body if mag == 1 else f"{_format_coeff(mag)}*{body}"
        else:
            text = _format_coeff(mag)
        if i == 0:
            parts.append(f"-{text}" if negative else text)
        else:
            parts.append(f" - {text}" if negative else f" + {text}")
    return "".join(parts)
