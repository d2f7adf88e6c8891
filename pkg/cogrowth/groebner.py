"""Phase 3: Gröbner bases – compositions, bounded completion, certificates."""

from __future__ import annotations

import heapq
import itertools
import random
import warnings
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from cogrowth.config import DEFAULT_LIMITS, Limits
from cogrowth.freealg import (
    RATIONAL,
    Field,
    Poly,
    deglex_key,
    format_poly,
    is_subword,
    normal_form,
    parse_poly,
    poly_normalize,
)
from cogrowth.models import (
    Alphabet,
    Certificate,
    CompletionOutcome,
    CompletionStatus,
    Overlap,
    ParseError,
    ResourceLimitError,
    UsageError,
    Verdict,
    Word,
)


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relations: tuple[Poly, ...]   # monic, normalized
    source: str = "<input>"

    @property
    def max_degree(self) -> int:
        return max((r.degree for r in self.relations), default=0)

    def render(self) -> str:
        lines = [f"alphabet: {' '.join(self.alphabet.letters)}"]
        lines += [f"relation: {format_poly(r, self.alphabet)}" for r in self.relations]
        return "\n".join(lines) + "\n"


def parse_presentation(text: str, source: str = "<input>", field: Field = RATIONAL) -> Presentation:
    """Parse a relation file: ``alphabet: x y`` then ``relation: <poly>`` lines."""
    alphabet: Alphabet | None = None
    relations: list[Poly] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        indent = len(line) - len(line.lstrip())
        if not sep:
            raise ParseError("expected 'alphabet:' or 'relation:'", lineno, indent + 1, source)
        key = key.strip()
        offset = len(key) + indent + 1 + (len(rest) - len(rest.lstrip()))
        if key == "alphabet":
            if alphabet is not None:
                raise ParseError("duplicate alphabet line", lineno, indent + 1, source)
            letters = rest.split()
            try:
                alphabet = Alphabet(tuple(letters))
            except UsageError as e:
                raise ParseError(str(e), lineno, offset + 1, source) from None
        elif key == "relation":
            if alphabet is None:
                raise ParseError("relation before alphabet line", lineno, indent + 1, source)
            p = parse_poly(rest.strip(), alphabet, field, line=lineno, source=source,
                           column_offset=offset)
            if p.is_zero:
                raise ParseError("relation is zero", lineno, offset + 1, source)
            relations.append(p.monic())
        else:
            raise ParseError(f"unknown key {key!r}", lineno, indent + 1, source)
    if alphabet is None:
        raise ParseError("missing alphabet line", 1, 1, source)
    return Presentation(alphabet, tuple(relations), source)


def load_presentation(path: str | Path, field: Field = RATIONAL) -> Presentation:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read relation file {path}: {e.strerror}") from None
    return parse_presentation(text, str(path), field)


# ---------------------------------------------------------------------------
# Compositions
# ---------------------------------------------------------------------------

def overlaps(w1: Word, w2: Word) -> list[tuple[Word, Word, Word]]:
    """Proper overlaps of a suffix of w1 with a prefix of w2, longest first."""
    out = []
    for k in range(min(len(w1), len(w2)) - 1, 0, -1):
        if w1[-k:] == w2[:k]:
            out.append((w1[:-k], w1[-k:], w2[k:]))
    return out


def composition_result(f: Poly, g: Poly, o: Overlap) -> Poly:
    if not (f.is_monic and g.is_monic):
        raise UsageError("composition needs monic polynomials")
    if f.lead_word != o.left or g.lead_word != o.right:
        raise UsageError("leading words do not match the overlap")
    if o.u1 + o.u2 != o.left or o.u2 + o.u3 != o.right or not o.u2:
        raise UsageError("malformed overlap")
    return f.tail().mul_words(right=o.u3) - g.tail().mul_words(left=o.u1)


# ---------------------------------------------------------------------------
# Completion
# ---------------------------------------------------------------------------

class _Completion:
    """Inter-reduced monic basis plus a queue of composition words."""

    def __init__(self, bound: int, limits: Limits) -> None:
        self.bound = bound
        self.limits = limits
        self.basis: dict[Word, Poly] = {}
        self.queue: list[tuple[int, Word, Word, Word, int]] = []
        self.queued: set[tuple[Word, Word, int]] = set()
        self.processed = 0

    def outcome(self, status: CompletionStatus) -> CompletionOutcome:
        return CompletionOutcome(dict(self.basis), self.bound, status, self.processed)

    def live(self) -> bool:
        return any(left in self.basis and right in self.basis
                   for _, _, left, right, _ in self.queue)

    def insert(self, p: Poly) -> None:
        pending = deque([p])
        while pending:
            q = normal_form(pending.popleft(), self.basis)
            if q.is_zero:
                continue
            q = q.monic()
            lead = q.lead_word
            for w in [w for w in self.basis if is_subword(lead, w)]:
                pending.append(self.basis.pop(w))
            self.basis[lead] = q
            for w, g in list(self.basis.items()):
                if w != lead and any(is_subword(lead, m) for m in g.words()[1:]):
                    tail = normal_form(g.tail(), self.basis)
                    self.basis[w] = Poly(((g.lead_coeff, w),) + tail.terms)
            if len(self.basis) > self.limits.max_basis:
                raise ResourceLimitError("max_basis", self.limits.max_basis,
                                         self.outcome(CompletionStatus.TRUNCATED))
            self.enqueue(lead)

    def enqueue(self, lead: Word) -> None:
        for other in list(self.basis):
            pairs = [(lead, other)] if other == lead else [(lead, other), (other, lead)]
            for left, right in pairs:
                for u1, u2, u3 in overlaps(left, right):
                    key = (left, right, len(u2))
                    if key in self.queued:
                        continue
                    self.queued.add(key)
                    word = u1 + u2 + u3
                    heapq.heappush(self.queue, (len(word), word, left, right, len(u2)))
        if len(self.queue) > self.limits.max_queue:
            raise ResourceLimitError("max_queue", self.limits.max_queue,
                                     self.outcome(CompletionStatus.TRUNCATED))

    def run(self) -> CompletionOutcome:
        while self.queue and self.queue[0][0] <= self.bound:
            _, word, left, right, k = heapq.heappop(self.queue)
            if left not in self.basis or right not in self.basis:
                continue
            o = Overlap(left[:-k], left[-k:], right[k:], left, right)
            self.processed += 1
            self.insert(composition_result(self.basis[left], self.basis[right], o))
        status = CompletionStatus.TRUNCATED if self.live() else CompletionStatus.SATURATED
        return self.outcome(status)


def _check_relations(relations: Sequence[Poly]) -> None:
    for r in relations:
        if r.is_zero:
            raise UsageError("zero relation")


def complete(relations: Sequence[Poly], max_word_len: int,
             limits: Limits = DEFAULT_LIMITS) -> CompletionOutcome:
    """Degree-bounded completion; composition words are processed in (length, deglex) order."""
    _check_relations(relations)
    m = max((r.degree for r in relations), default=0)
    if max_word_len < m:
        raise UsageError(f"word bound {max_word_len} below maximal relation degree {m}")
    state = _Completion(max_word_len, limits)
    for r in sorted(relations, key=lambda r: deglex_key(r.lead_word)):
        state.insert(r)
    return state.run()


def obstructions_of_algebra(relations: Sequence[Poly], n: int,
                            limits: Limits = DEFAULT_LIMITS) -> list[Word]:
    if n < 1:
        raise UsageError("n must be at least 1")
    _check_relations(relations)
    m = max((r.degree for r in relations), default=0)
    outcome = complete(relations, max(2 * n, m), limits)
    return [w for w in outcome.obstructions if len(w) <= n]


def cogrowth_algebra(relations: Sequence[Poly], n: int,
                     limits: Limits = DEFAULT_LIMITS) -> list[int]:
    lengths = [len(w) for w in obstructions_of_algebra(relations, n, limits)]
    return [sum(1 for ell in lengths if ell <= k) for k in range(1, n + 1)]


def certify_finite_basis(relations: Sequence[Poly], N: int,
                         limits: Limits = DEFAULT_LIMITS) -> Certificate:
    """Certified iff completion up to 2N finds no obstruction of length in [N, 2N]."""
    _check_relations(relations)
    m = max((r.degree for r in relations), default=0)
    if N < m:
        raise UsageError(f"N={N} is below the maximal relation degree m={m}")
    outcome = complete(relations, 2 * N, limits)
    lengths = tuple(sorted(len(w) for w in outcome.obstructions if N <= len(w) <= 2 * N))
    if lengths:
        return Certificate(Verdict.NOT_CERTIFIED, N, m,
                           obstruction_lengths=lengths, status=outcome.status)
    basis = tuple(outcome.basis[w] for w in outcome.obstructions if len(w) < N)
    return Certificate(Verdict.CERTIFIED, N, m, basis=basis, status=outcome.status)


def check_confluence(outcome: CompletionOutcome) -> list[tuple[Overlap, Poly]]:
    """Compositions within the processed bound whose results do not reduce to 0."""
    residues = []
    leads = list(outcome.obstructions)
    for left, right in itertools.product(leads, repeat=2):
        for u1, u2, u3 in overlaps(left, right):
            if len(u1) + len(u2) + len(u3) > outcome.processed_word_bound:
                continue
            o = Overlap(u1, u2, u3, left, right)
            r = normal_form(composition_result(outcome.basis[left], outcome.basis[right], o),
                            outcome.basis)
            if not r.is_zero:
                residues.append((o, r))
    return residues


def reduce_in(presentation: Presentation, p: Poly, bound: int,
              limits: Limits = DEFAULT_LIMITS) -> tuple[Poly, CompletionOutcome]:
    """Normal form of p modulo the ideal, using a completion up to ``bound``."""
    outcome = complete(presentation.relations, max(bound, presentation.max_degree), limits)
    if not outcome.saturated:
        warnings.warn(
            f"basis truncated at word length {outcome.processed_word_bound}; "
            "normal form may not be canonical",
            RuntimeWarning, stacklevel=2,
        )
    return normal_form(p, outcome.basis), outcome


def format_certificate(cert: Certificate, alphabet: Alphabet) -> str:
    lines = [
        f"verdict={cert.verdict.value}",
        f"N={cert.N}",
        f"m={cert.m}",
        f"status={cert.status.value}",
    ]
    lines += [f"basis={format_poly(g, alphabet)}" for g in cert.basis]
    lines.append("obstruction_lengths=" + ",".join(str(n) for n in cert.obstruction_lengths))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Linear-algebra oracle
# ---------------------------------------------------------------------------

def _letter_count(relations: Sequence[Poly], alphabet: Alphabet | None) -> int:
    if alphabet is not None:
        return alphabet.size
    return 1 + max((i for r in relations for w in r.words() for i in w), default=0)


def reducible_oracle(relations: Sequence[Poly], n: int, slack: int,
                     alphabet: Alphabet | None = None,
                     limits: Limits = DEFAULT_LIMITS) -> set[Word]:
    """Leading words of span{u·f·v : |u·f·v| <= n + slack}, restricted to length <= n."""
    if slack < 0:
        raise UsageError("slack must be nonnegative")
    pivots = _span_pivots(relations, n + slack, _letter_count(relations, alphabet), n, limits)
    return {w for w in pivots if len(w) <= n}


def stable_reducible_oracle(relations: Sequence[Poly], n: int,
                            alphabet: Alphabet | None = None,
                            limits: Limits = DEFAULT_LIMITS) -> set[Word]:
    """reducible_oracle at ``limits.oracle_slack``, checked against slack + 2.

    Returns the larger result and warns when the two differ.
    """
    slack = limits.oracle_slack
    low = reducible_oracle(relations, n, slack, alphabet, limits)
    high = reducible_oracle(relations, n, slack + 2, alphabet, limits)
    if low != high:
        warnings.warn(
            f"oracle not stable at slack {slack}: {len(high) - len(low)} more reducible "
            f"words at slack {slack + 2}",
            RuntimeWarning, stacklevel=2,
        )
    return high


def ideal_span_contains(relations: Sequence[Poly], p: Poly, slack: int = 0,
                        alphabet: Alphabet | None = None,
                        limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether p lies in span{u·f·v : |u·f·v| <= deg p + slack}."""
    if slack < 0:
        raise UsageError("slack must be nonnegative")
    if p.is_zero:
        return True
    s = _letter_count([*relations, p], alphabet)
    pivots = _span_pivots(relations, p.degree + slack, s, p.degree, limits)
    row = {w: c for c, w in p.terms}
    return _reduce_row(pivots, row) is None


def _span_pivots(relations: Sequence[Poly], top: int, s: int, n: int,
                 limits: Limits) -> dict[Word, dict[Word, Any]]:
    pivots: dict[Word, dict[Word, Any]] = {}
    columns: set[Word] = set()
    for f in relations:
        room = top - f.degree
        for a in range(room + 1):
            for b in range(room - a + 1):
                for u in itertools.product(range(s), repeat=a):
                    for v in itertools.product(range(s), repeat=b):
                        row = {u + w + v: c for c, w in f.terms}
                        columns.update(row)
                        if len(columns) > limits.max_states:
                            raise ResourceLimitError("max_states", limits.max_states,
                                                     {w for w in pivots if len(w) <= n})
                        _echelon_insert(pivots, row)
    return pivots


def _reduce_row(pivots: dict[Word, dict[Word, Any]], row: dict[Word, Any]) -> Word | None:
    """Eliminate pivot columns from row in place; the surviving lead, or None."""
    while row:
        lead = max(row, key=deglex_key)
        if lead not in pivots:
            return lead
        c = row[lead]
        for w, a in pivots[lead].items():
            value = row.get(w, 0) - c * a
            if value == 0:
                row.pop(w, None)
            else:
                row[w] = value
    return None


def _echelon_insert(pivots: dict[Word, dict[Word, Any]], row: dict[Word, Any]) -> None:
    lead = _reduce_row(pivots, row)
    if lead is not None:
        c = row[lead]
        pivots[lead] = {w: a / c for w, a in row.items()}


def irreducible_count_oracle(relations: Sequence[Poly], alphabet: Alphabet, n: int,
                             slack: int | None = None,
                             limits: Limits = DEFAULT_LIMITS) -> list[int]:
    """V(0..n) from the oracle: words of length <= k that are not reducible.

    Without an explicit slack the stabilized oracle is used.
    """
    if slack is None:
        reducible = stable_reducible_oracle(relations, n, alphabet, limits)
    else:
        reducible = reducible_oracle(relations, n, slack, alphabet, limits)
    s = alphabet.size
    values, total = [], 0
    for k in range(n + 1):
        total += s ** k - sum(1 for w in reducible if len(w) == k)
        values.append(total)
    return values


def random_presentation(rng: random.Random, alphabet: Alphabet, max_relations: int = 2,
                        max_degree: int = 3, field: Field = RATIONAL) -> Presentation:
    """Homogeneous relations with small integer coefficients."""
    relations = []
    for _ in range(rng.randint(1, max_relations)):
        d = rng.randint(2, max_degree)
        words = list(itertools.product(range(alphabet.size), repeat=d))
        chosen = rng.sample(words, rng.randint(1, min(3, len(words))))
        raw = [(field.coerce(rng.choice([-2, -1, 1, 2])), w) for w in chosen]
        relations.append(poly_normalize(raw).monic())
    return Presentation(alphabet, tuple(relations), "<random>")


def reducible_words(obstructions: Iterable[Word], alphabet: Alphabet, n: int) -> set[Word]:
    """All words of length <= n containing one of the given words."""
    obs = list(obstructions)
    out = set()
    for k in range(n + 1):
        for w in itertools.product(range(alphabet.size), repeat=k):
            if any(is_subword(o, w) for o in obs):
                out.add(w)
    return out
