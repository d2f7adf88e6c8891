"""Phase 1: Shared data models – alphabets, result records, errors."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

# A monomial of the free algebra: indices into an Alphabet, () is the unit.
Word = tuple[int, ...]


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class UsageError(ValueError):
    """A precondition of an operation was violated by its caller."""


class ParseError(UsageError):
    """Malformed relation file, polynomial text or source descriptor."""

    def __init__(self, reason: str, line: int = 1, column: int = 1,
                 source: str = "<input>") -> None:
        self.reason = reason
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {reason}")


class ResourceLimitError(RuntimeError):
    """A configured cap was exceeded; ``partial`` holds what was computed."""

    def __init__(self, limit_name: str, limit: int, partial: Any = None) -> None:
        self.limit_name = limit_name
        self.limit = limit
        self.partial = partial
        super().__init__(f"limit '{limit_name}' exceeded (cap {limit})")


# ---------------------------------------------------------------------------
# Alphabet (immutable)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]   # precedence ascending: letters[0] is the least

    def __post_init__(self) -> None:
        if not self.letters:
            raise UsageError("alphabet must be nonempty")
        if len(set(self.letters)) != len(self.letters):
            raise UsageError(f"duplicate letters in alphabet {self.letters}")
        for letter in self.letters:
            if not letter or any(ch.isspace() for ch in letter):
                raise UsageError(f"invalid letter {letter!r}")

    @classmethod
    def of(cls, text: str) -> "Alphabet":
        """``Alphabet.of("ab")`` or ``Alphabet.of("x y z")``."""
        parts = text.split() if any(ch.isspace() for ch in text) else list(text)
        return cls(tuple(parts))

    @property
    def size(self) -> int:
        return len(self.letters)

    @property
    def compact(self) -> bool:
        """True when every letter is a single character."""
        return all(len(letter) == 1 for letter in self.letters)

    def index(self, letter: str) -> int:
        try:
            return self.letters.index(letter)
        except ValueError:
            raise UsageError(f"letter {letter!r} not in alphabet {self.letters}") from None

    def word(self, text: str) -> Word:
        """Parse a word: concatenated letters, or ``*``-separated names."""
        if not text or text == "1":
            return ()
        if "*" in text or not self.compact:
            return tuple(self.index(part.strip()) for part in text.split("*"))
        return tuple(self.index(ch) for ch in text)

    def render(self, word: Word) -> str:
        if not word:
            return "1"
        sep = "" if self.compact else "*"
        return sep.join(self.letters[i] for i in word)

    def validate(self, word: Word) -> None:
        for i in word:
            if not 0 <= i < len(self.letters):
                raise UsageError(
                    f"letter index {i} invalid for alphabet of size {len(self.letters)}"
                )


# ---------------------------------------------------------------------------
# Completion records (groebner)
# ---------------------------------------------------------------------------

class CompletionStatus(Enum):
    SATURATED = "saturated"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class Overlap:
    u1: Word
    u2: Word
    u3: Word
    left: Word    # lead of the left basis element, u1·u2
    right: Word   # lead of the right basis element, u2·u3

    @property
    def word(self) -> Word:
        return self.u1 + self.u2 + self.u3


@dataclass(frozen=True)
class CompletionOutcome:
    basis: dict[Word, Any]            # lead word -> monic Poly
    processed_word_bound: int
    status: CompletionStatus
    compositions_processed: int = 0

    @property
    def obstructions(self) -> tuple[Word, ...]:
        return tuple(sorted(self.basis, key=lambda w: (len(w), w)))

    @property
    def obstructions_exact_upto(self) -> int:
        return self.processed_word_bound // 2

    @property
    def saturated(self) -> bool:
        return self.status is CompletionStatus.SATURATED


class Verdict(Enum):
    CERTIFIED = "certified"
    NOT_CERTIFIED = "not_certified"


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    N: int
    m: int
    basis: tuple[Any, ...] = ()                 # certified: the finite basis
    obstruction_lengths: tuple[int, ...] = ()   # not certified: lengths in [N, 2N]
    status: CompletionStatus = CompletionStatus.SATURATED

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED


# ---------------------------------------------------------------------------
# Infinite-word records (langword)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionReport:
    max_len: int
    obstructions: tuple[str, ...]   # sorted by (length, alphabet order)
    cogrowth: tuple[int, ...]       # O_W(1..max_len)

    def lengths(self) -> list[int]:
        return [len(w) for w in self.obstructions]


@dataclass(frozen=True)
class ColengthResult:
    period: str
    minimal_period: int
    colength: int
    obstructions: tuple[str, ...]

    @property
    def root(self) -> str:
        return self.period[:self.minimal_period]


@dataclass(frozen=True)
class BoundViolation:
    bound: str      # "lavrov" or "chelnokov"
    word: str
    colength: int
    detail: str


@dataclass
class PeriodBoundsReport:
    max_len: int
    classes_checked: int = 0
    words_checked: int = 0
    min_colength: dict[int, int] = field(default_factory=dict)
    violations: list[BoundViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


# ---------------------------------------------------------------------------
# Rauzy graph records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErResult:
    value: int | None   # None means infinite

    @property
    def infinite(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)


@dataclass(frozen=True)
class LemmaEdgeResult:
    edge: str
    ok: bool
    component_size: int = 0
    component_er: ErResult | None = None


@dataclass
class LemmaReport:
    base_er: int
    bound: int                      # 3·er(H)
    iterated_vertices: int
    iterated_edges: int
    results: list[LemmaEdgeResult] = field(default_factory=list)

    @property
    def failures(self) -> list[LemmaEdgeResult]:
        return [r for r in self.results if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.failures
