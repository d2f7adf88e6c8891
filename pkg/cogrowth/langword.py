"""Phase 4: Infinite words – sources, factors, minimal forbidden words, colength."""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterator

from cogrowth.config import DEFAULT_LIMITS, Limits
from cogrowth.models import (
    Alphabet,
    BoundViolation,
    ColengthResult,
    ObstructionReport,
    ParseError,
    PeriodBoundsReport,
    ResourceLimitError,
    UsageError,
)


# ---------------------------------------------------------------------------
# Sources
# ---------------------------------------------------------------------------

class SourceKind(Enum):
    PERIODIC = "periodic"
    FIBONACCI = "fibonacci"
    MORPHIC = "morphic"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class WordSource:
    kind: SourceKind
    alphabet: Alphabet
    period: str = ""
    rules: tuple[tuple[str, str], ...] = ()
    seed: str = ""
    text: str = ""
    complete_upto: int = 0
    name: str = ""

    def rule(self, letter: str) -> str:
        return dict(self.rules)[letter]


FIBONACCI_RULES = (("a", "ab"), ("b", "a"))


def _default_alphabet(letters: str) -> Alphabet:
    return Alphabet(tuple(sorted(set(letters))))


def _with_alphabet(letters: str, alphabet: Alphabet | None, descriptor: str) -> Alphabet:
    if alphabet is None:
        return _default_alphabet(letters)
    if not alphabet.compact:
        raise UsageError("word sources need single-character letters")
    missing = sorted(set(letters) - set(alphabet.letters))
    if missing:
        raise UsageError(f"{descriptor}: letters {missing} not in alphabet {alphabet.letters}")
    return alphabet


def periodic_source(period: str, alphabet: Alphabet | None = None) -> WordSource:
    if not period:
        raise UsageError("period must be nonempty")
    return WordSource(SourceKind.PERIODIC, _with_alphabet(period, alphabet, period),
                      period=period, name=f"periodic:{period}")


def fibonacci_source(alphabet: Alphabet | None = None) -> WordSource:
    return WordSource(SourceKind.FIBONACCI, _with_alphabet("ab", alphabet, "fib"),
                      rules=FIBONACCI_RULES, seed="a", name="fib")


def morphic_source(rules: dict[str, str], seed: str,
                   alphabet: Alphabet | None = None) -> WordSource:
    letters = "".join(rules) + "".join(rules.values())
    alpha = _with_alphabet(letters, alphabet, "morphic")
    for letter in alpha.letters:
        if letter not in rules:
            raise UsageError(f"morphism has no rule for letter {letter!r}")
    image = rules.get(seed, "")
    if len(seed) != 1 or not image.startswith(seed) or len(image) < 2:
        raise UsageError(f"morphism is not prolongable on {seed!r}")
    ordered = tuple(sorted(rules.items()))
    name = "morphic:" + ",".join(f"{a}->{w}" for a, w in ordered) + f";seed={seed}"
    return WordSource(SourceKind.MORPHIC, alpha, rules=ordered, seed=seed, name=name)


def explicit_source(text: str, complete_upto: int,
                    alphabet: Alphabet | None = None, name: str = "prefix") -> WordSource:
    if not text:
        raise UsageError("explicit prefix is empty")
    if not 1 <= complete_upto <= len(text):
        raise UsageError(f"complete={complete_upto} must lie in 1..{len(text)}")
    return WordSource(SourceKind.EXPLICIT, _with_alphabet(text, alphabet, name),
                      text=text, complete_upto=complete_upto, name=name)


def make_source(descriptor: str, alphabet: Alphabet | None = None) -> WordSource:
    """Parse ``fib``, ``periodic:<w>``, ``morphic:a->ab,b->a;seed=a`` or ``prefix:<path>;complete=<n>``."""
    descriptor = descriptor.strip()
    if descriptor == "fib":
        return fibonacci_source(alphabet)
    kind, sep, body = descriptor.partition(":")
    if not sep:
        raise ParseError(f"unknown source {descriptor!r}", 1, 1, "<source>")
    col = len(kind) + 2
    if kind == "periodic":
        if not body:
            raise ParseError("empty period", 1, col, "<source>")
        return periodic_source(body, alphabet)
    if kind == "morphic":
        rules_text, sep, seed_text = body.partition(";")
        if not sep or not seed_text.startswith("seed="):
            raise ParseError("expected ';seed=<letter>'", 1, col + len(rules_text), "<source>")
        rules: dict[str, str] = {}
        pos = col
        for item in rules_text.split(","):
            letter, arrow, image = item.partition("->")
            if not arrow or len(letter.strip()) != 1:
                raise ParseError(f"malformed rule {item!r}", 1, pos, "<source>")
            if letter.strip() in rules:
                raise ParseError(f"duplicate rule for {letter.strip()!r}", 1, pos, "<source>")
            rules[letter.strip()] = image.strip()
            pos += len(item) + 1
        return morphic_source(rules, seed_text[len("seed="):].strip(), alphabet)
    if kind == "prefix":
        path_text, sep, complete_text = body.partition(";")
        if not sep or not complete_text.startswith("complete="):
            raise ParseError("expected ';complete=<n>'", 1, col + len(path_text), "<source>")
        try:
            complete_upto = int(complete_text[len("complete="):])
        except ValueError:
            raise ParseError("complete= needs an integer", 1,
                             col + len(path_text) + 1 + len("complete="), "<source>") from None
        try:
            text = Path(path_text).read_text(encoding="utf-8").strip()
        except OSError as e:
            raise UsageError(f"cannot read prefix file {path_text}: {e.strerror}") from None
        if any(ch.isspace() for ch in text):
            raise ParseError("prefix file must hold one line of letters", 1, 1, path_text)
        return explicit_source(text, complete_upto, alphabet, name=descriptor)
    raise ParseError(f"unknown source kind {kind!r}", 1, 1, "<source>")


def finite_fibonacci_word(k: int) -> str:
    """u_0 = b, u_1 = a, u_k = u_{k-1} u_{k-2}."""
    if k < 0:
        raise UsageError("index must be nonnegative")
    prev, cur = "b", "a"
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, cur + prev
    return cur


def _iterates(source: WordSource, cap: int) -> Iterator[str]:
    """Successive words, each a prefix of the next."""
    if source.kind is SourceKind.FIBONACCI:
        prev, cur = "b", "a"
        while True:
            yield cur
            prev, cur = cur, cur + prev
            if len(cur) > cap:
                raise ResourceLimitError("max_prefix_len", cap)
    rules = dict(source.rules)
    cur = source.seed
    while True:
        nxt = "".join(rules[ch] for ch in cur)
        if len(nxt) == len(cur):
            raise UsageError(f"{source.name} does not generate an infinite word")
        if len(nxt) > cap:
            raise ResourceLimitError("max_prefix_len", cap)
        cur = nxt
        yield cur


def prefix(source: WordSource, n: int, limits: Limits = DEFAULT_LIMITS) -> str:
    if n < 0:
        raise UsageError("prefix length must be nonnegative")
    if source.kind is SourceKind.PERIODIC:
        p = source.period
        return (p * (n // len(p) + 1))[:n]
    if source.kind is SourceKind.EXPLICIT:
        if n > len(source.text):
            raise UsageError(f"{source.name} holds only {len(source.text)} letters")
        return source.text[:n]
    for it in _iterates(source, limits.max_prefix_len):
        if len(it) >= n:
            return it[:n]
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Suffix automaton
# ---------------------------------------------------------------------------

class SuffixAutomaton:
    """Minimal automaton of all factors of a text (online construction)."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.length = [0]
        self.link = [-1]
        self.next: list[dict[str, int]] = [{}]
        self.endpos = [-1]   # end index of the first occurrence
        last = 0
        for i, ch in enumerate(text):
            last = self._extend(last, ch, i)

    def _new_state(self, length: int, link: int, nxt: dict[str, int], endpos: int) -> int:
        self.length.append(length)
        self.link.append(link)
        self.next.append(nxt)
        self.endpos.append(endpos)
        return len(self.length) - 1

    def _extend(self, last: int, ch: str, i: int) -> int:
        cur = self._new_state(self.length[last] + 1, 0, {}, i)
        p = last
        while p != -1 and ch not in self.next[p]:
            self.next[p][ch] = cur
            p = self.link[p]
        if p == -1:
            return cur
        q = self.next[p][ch]
        if self.length[p] + 1 == self.length[q]:
            self.link[cur] = q
            return cur
        clone = self._new_state(self.length[p] + 1, self.link[q], dict(self.next[q]),
                                self.endpos[q])
        while p != -1 and self.next[p].get(ch) == q:
            self.next[p][ch] = clone
            p = self.link[p]
        self.link[q] = clone
        self.link[cur] = clone
        return cur

    @property
    def size(self) -> int:
        return len(self.length)

    def contains(self, word: str) -> bool:
        state = 0
        for ch in word:
            state = self.next[state].get(ch, -1)
            if state < 0:
                return False
        return True

    def complexity(self, n: int) -> list[int]:
        """Number of distinct factors of each length 1..n."""
        diff = [0] * (n + 2)
        for v in range(1, self.size):
            lo = self.length[self.link[v]] + 1
            hi = min(self.length[v], n)
            if lo <= hi:
                diff[lo] += 1
                diff[hi + 1] -= 1
        out, running = [], 0
        for k in range(1, n + 1):
            running += diff[k]
            out.append(running)
        return out

    def count(self, n: int) -> int:
        return sum(1 for v in range(1, self.size)
                   if self.length[self.link[v]] < n <= self.length[v])

    def minimal_forbidden(self, letters: tuple[str, ...], max_len: int) -> list[str]:
        """Words a·w·b absent from the text with a·w and w·b present."""
        if max_len < 1:
            return []
        found = [ch for ch in letters if ch not in self.next[0]]
        for p in range(1, self.size):
            q = self.link[p]
            wlen = self.length[q]
            if wlen + 2 > max_len:
                continue
            end = self.endpos[p]
            aw = self.text[end - wlen:end + 1]
            for b in letters:
                if b in self.next[q] and b not in self.next[p]:
                    found.append(aw + b)
        return found


@functools.lru_cache(maxsize=16)
def _automaton(text: str) -> SuffixAutomaton:
    return SuffixAutomaton(text)


@functools.lru_cache(maxsize=256)
def _stable_text(source: WordSource, n: int, cap: int) -> str:
    """A prefix containing every factor of length <= n."""
    if source.kind is SourceKind.PERIODIC:
        p = len(source.period)
        return source.period * math.ceil((n + p) / p)
    if source.kind is SourceKind.EXPLICIT:
        if n > source.complete_upto:
            raise UsageError(
                f"{source.name} is complete only up to length {source.complete_upto}, asked {n}"
            )
        if 2 * n > len(source.text):
            warnings.warn(
                f"{source.name}: factors of length {n} rely on the declared completeness",
                RuntimeWarning, stacklevel=3,
            )
        return source.text
    previous = None
    for it in _iterates(source, cap):
        if len(it) <= 2 * n:
            continue
        count = _automaton(it).count(n)
        if previous is not None and count == previous:
            return it
        previous = count
    raise AssertionError("unreachable")


def _sort_key(alphabet: Alphabet):
    order = {ch: i for i, ch in enumerate(alphabet.letters)}
    return lambda w: (len(w), tuple(order[ch] for ch in w))


# ---------------------------------------------------------------------------
# Factors and obstructions
# ---------------------------------------------------------------------------

def factors(source: WordSource, n: int, limits: Limits = DEFAULT_LIMITS) -> frozenset[str]:
    if n < 1:
        raise UsageError("factor length must be at least 1")
    text = _stable_text(source, n, limits.max_prefix_len)
    return frozenset(text[i:i + n] for i in range(len(text) - n + 1))


def complexity(source: WordSource, n: int, limits: Limits = DEFAULT_LIMITS) -> list[int]:
    """p(1..n), the number of factors of each length."""
    if n < 1:
        raise UsageError("n must be at least 1")
    return _automaton(_stable_text(source, n, limits.max_prefix_len)).complexity(n)


def word_obstructions(source: WordSource, max_len: int,
                      limits: Limits = DEFAULT_LIMITS) -> ObstructionReport:
    if max_len < 1:
        raise UsageError("max_len must be at least 1")
    text = _stable_text(source, max_len, limits.max_prefix_len)
    found = _automaton(text).minimal_forbidden(source.alphabet.letters, max_len)
    found.sort(key=_sort_key(source.alphabet))
    cogrowth = _cumulative([len(w) for w in found], max_len)
    return ObstructionReport(max_len, tuple(found), tuple(cogrowth))


def candidate_obstructions(source: WordSource, max_len: int,
                           limits: Limits = DEFAULT_LIMITS) -> list[str]:
    """Extension rule: v = f·b is an obstruction iff v is absent and v[1:] is a factor."""
    letters = source.alphabet.letters
    out = [ch for ch in letters if ch not in factors(source, 1, limits)]
    for m in range(2, max_len + 1):
        shorter, current = factors(source, m - 1, limits), factors(source, m, limits)
        for f in shorter:
            for b in letters:
                v = f + b
                if v not in current and v[1:] in shorter:
                    out.append(v)
    out.sort(key=_sort_key(source.alphabet))
    return out


def _cumulative(lengths: list[int], n: int) -> list[int]:
    per = [0] * (n + 1)
    for ell in lengths:
        per[ell] += 1
    out, total = [], 0
    for k in range(1, n + 1):
        total += per[k]
        out.append(total)
    return out


def cogrowth_word(source: WordSource, n: int, limits: Limits = DEFAULT_LIMITS) -> list[int]:
    return list(word_obstructions(source, n, limits).cogrowth)


# ---------------------------------------------------------------------------
# Periods and colength
# ---------------------------------------------------------------------------

def minimal_period(u: str) -> int:
    if not u:
        raise UsageError("word must be nonempty")
    fail = [0] * len(u)
    k = 0
    for i in range(1, len(u)):
        while k and u[i] != u[k]:
            k = fail[k - 1]
        if u[i] == u[k]:
            k += 1
        fail[i] = k
    return len(u) - fail[-1]


def colength(u: str, alphabet: Alphabet | None = None,
             limits: Limits = DEFAULT_LIMITS) -> ColengthResult:
    if not u:
        raise UsageError("period must be nonempty")
    alpha = _with_alphabet(u, alphabet, u)
    p = minimal_period(u)
    root_len = p if len(u) % p == 0 else len(u)
    source = periodic_source(u[:root_len], alpha)
    report = word_obstructions(source, root_len + 1, limits)
    return ColengthResult(u, root_len, len(report.obstructions), report.obstructions)


def fibonacci_number(c: int) -> int:
    """phi_1 = 1, phi_2 = 2, phi_3 = 3, phi_4 = 5 (phi_0 = 1)."""
    if c < 0:
        raise UsageError("index must be nonnegative")
    a, b = 1, 1
    for _ in range(c):
        a, b = b, a + b
    return a


def chelnokov_family(k: int, limits: Limits = DEFAULT_LIMITS) -> ColengthResult:
    """Colength of the k-th finite Fibonacci word taken as a period."""
    return colength(finite_fibonacci_word(k), Alphabet(("a", "b")), limits)


def lyndon_words(length: int, letters: tuple[str, ...] = ("a", "b")) -> Iterator[str]:
    """Lyndon words of exactly ``length`` letters (Duval)."""
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == length:
            yield "".join(letters[i] for i in w)
        while len(w) < length:
            w.append(w[-m])
        while w and w[-1] == len(letters) - 1:
            w.pop()


def check_period_bounds(max_len: int, limits: Limits = DEFAULT_LIMITS) -> PeriodBoundsReport:
    """Fibonacci and logarithmic lower bounds on the colength of binary periods."""
    if max_len > limits.exhaustive_cap:
        raise UsageError(f"max_len {max_len} exceeds exhaustive cap {limits.exhaustive_cap}")
    binary = Alphabet(("a", "b"))
    report = PeriodBoundsReport(max_len)
    for length in range(1, max_len + 1):
        for u in lyndon_words(length, binary.letters):
            c = colength(u, binary, limits).colength
            report.classes_checked += 1
            # every rotation of u has the same factor language
            report.words_checked += length
            report.min_colength[length] = min(report.min_colength.get(length, c), c)
            phi = fibonacci_number(c)
            if phi < length:
                report.violations.append(
                    BoundViolation("lavrov", u, c, f"phi_{c}={phi} < {length}"))
            if c < 1 or 2 ** (c - 1) < length:
                report.violations.append(
                    BoundViolation("chelnokov", u, c, f"{c} < log2({length}) + 1"))
    return report


# ---------------------------------------------------------------------------
# Recurrence
# ---------------------------------------------------------------------------

def recurrence_window(source: WordSource, t: int, search_limit: int,
                      limits: Limits = DEFAULT_LIMITS) -> int | None:
    """Smallest T <= search_limit such that every length-T factor contains every length-t factor."""
    if t < 1:
        raise UsageError("t must be at least 1")
    if search_limit < t:
        return None
    text = _stable_text(source, search_limit, limits.max_prefix_len)
    starts: dict[str, list[int]] = {}
    for i in range(len(text) - t + 1):
        starts.setdefault(text[i:i + t], []).append(i)
    need = t
    for occ in starts.values():
        need = max(need, occ[0] + t, len(text) - occ[-1])
        for a, b in zip(occ, occ[1:]):
            need = max(need, b - a + t - 1)
    return need if need <= search_limit else None
