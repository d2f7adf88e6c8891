"""Phase 5: Growth counting – avoidance automaton and V(n)."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from cogrowth.freealg import is_subword
from cogrowth.models import Alphabet, UsageError, Word


@dataclass(frozen=True)
class AvoidanceAutomaton:
    """Total deterministic matcher for a subword-minimal set of obstructions.

    State 0 is the empty prefix.  Dead states are absorbing: a word reaches
    one iff it contains an obstruction.
    """

    alphabet: Alphabet
    prefixes: tuple[Word, ...]                 # state -> trie prefix
    transitions: tuple[tuple[int, ...], ...]   # state -> letter -> state
    dead: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.prefixes)

    @property
    def live(self) -> list[int]:
        return [s for s in range(self.size) if s not in self.dead]

    def run(self, word: Word) -> int:
        state = 0
        for letter in word:
            state = self.transitions[state][letter]
        return state

    def accepts(self, word: Word) -> bool:
        """True when the word avoids every obstruction."""
        return self.run(word) not in self.dead


def check_minimal(obstructions: Iterable[Word], alphabet: Alphabet) -> list[Word]:
    obs = sorted(set(obstructions), key=lambda w: (len(w), w))
    for w in obs:
        alphabet.validate(w)
    for short, long in itertools.combinations(obs, 2):
        if is_subword(short, long):
            raise UsageError(
                f"obstruction set is not minimal: {alphabet.render(short)} "
                f"is a subword of {alphabet.render(long)}"
            )
    return obs


def avoidance_automaton(obstructions: Iterable[Word], alphabet: Alphabet) -> AvoidanceAutomaton:
    obs = check_minimal(obstructions, alphabet)
    # trie
    children: list[dict[int, int]] = [{}]
    prefixes: list[Word] = [()]
    terminal: set[int] = set()
    for w in obs:
        node = 0
        for letter in w:
            if letter not in children[node]:
                children.append({})
                prefixes.append(prefixes[node] + (letter,))
                children[node][letter] = len(children) - 1
            node = children[node][letter]
        terminal.add(node)

    # failure links, breadth first
    size = len(children)
    fail = [0] * size
    delta = [[0] * alphabet.size for _ in range(size)]
    dead = set(terminal)
    queue: deque[int] = deque()
    for letter in range(alphabet.size):
        child = children[0].get(letter)
        if child is None:
            delta[0][letter] = 0
        else:
            delta[0][letter] = child
            queue.append(child)
    while queue:
        node = queue.popleft()
        if fail[node] in dead:
            dead.add(node)
        for letter in range(alphabet.size):
            child = children[node].get(letter)
            if child is None:
                delta[node][letter] = delta[fail[node]][letter]
            else:
                fail[child] = delta[fail[node]][letter]
                delta[node][letter] = child
                queue.append(child)
    for state in dead:
        delta[state] = [state] * alphabet.size
    return AvoidanceAutomaton(
        alphabet,
        tuple(prefixes),
        tuple(tuple(row) for row in delta),
        frozenset(dead),
    )


def growth_values(obstructions: Iterable[Word], alphabet: Alphabet, n: int) -> list[int]:
    """V(0..n): words of length <= k avoiding every obstruction."""
    if n < 0:
        raise UsageError("n must be nonnegative")
    automaton = avoidance_automaton(obstructions, alphabet)
    counts = {0: 1} if 0 not in automaton.dead else {}
    values, total = [], 0
    for _ in range(n + 1):
        total += sum(counts.values())
        values.append(total)
        step: dict[int, int] = {}
        for state, c in counts.items():
            for target in automaton.transitions[state]:
                if target not in automaton.dead:
                    step[target] = step.get(target, 0) + c
        counts = step
    return values


def transfer_matrix(automaton: AvoidanceAutomaton) -> np.ndarray:
    """Live-state transition counts; entry (i, j) counts letters taking live[i] to live[j]."""
    live = automaton.live
    position = {s: i for i, s in enumerate(live)}
    matrix = np.zeros((len(live), len(live)), dtype=np.int64)
    for s in live:
        for target in automaton.transitions[s]:
            if target in position:
                matrix[position[s], position[target]] += 1
    return matrix


def brute_force_growth(obstructions: Iterable[Word], alphabet: Alphabet, n: int) -> list[int]:
    obs = list(obstructions)
    values, total = [], 0
    for k in range(n + 1):
        total += sum(
            1 for w in itertools.product(range(alphabet.size), repeat=k)
            if not any(is_subword(o, w) for o in obs)
        )
        values.append(total)
    return values


def classify_growth(values: list[int]) -> str:
    """Sampled-range reading of V: bounded, linear, at_least_quadratic or unclassified."""
    if len(values) < 3:
        return "unclassified"
    diffs = [b - a for a, b in zip(values, values[1:])]
    tail = diffs[len(diffs) // 2:]
    if all(d == 0 for d in tail):
        return "bounded"
    if len(set(tail)) == 1:
        return "linear"
    if all(v >= k * (k + 3) // 2 for k, v in enumerate(values)):
        return "at_least_quadratic"
    return "unclassified"
