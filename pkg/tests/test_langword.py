"""Tests for Phase 4: Infinite words."""

import os
import tempfile
import unittest

from cogrowth.config import Limits
from cogrowth.freealg import Poly
from cogrowth.groebner import obstructions_of_algebra
from cogrowth.langword import (
    SuffixAutomaton,
    candidate_obstructions,
    chelnokov_family,
    check_period_bounds,
    cogrowth_word,
    colength,
    complexity,
    explicit_source,
    factors,
    fibonacci_number,
    finite_fibonacci_word,
    lyndon_words,
    make_source,
    minimal_period,
    periodic_source,
    prefix,
    recurrence_window,
    word_obstructions,
)
from cogrowth.models import Alphabet, ParseError, ResourceLimitError, UsageError

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data", "words")
FIB = make_source("fib")
AB = make_source("periodic:ab")
AAB = make_source("periodic:aab")


class TestSources(unittest.TestCase):
    def test_fibonacci_prefix(self):
        self.assertEqual(prefix(FIB, 13), "abaababaabaab")

    def test_periodic_prefix(self):
        self.assertEqual(prefix(AB, 5), "ababa")

    def test_morphic_equals_fibonacci(self):
        morphic = make_source("morphic:a->ab,b->a;seed=a")
        self.assertEqual(prefix(morphic, 10_000), prefix(FIB, 10_000))

    def test_finite_fibonacci_words(self):
        self.assertEqual([finite_fibonacci_word(k) for k in range(5)],
                         ["b", "a", "ab", "aba", "abaab"])

    def test_not_prolongable(self):
        with self.assertRaises(UsageError):
            make_source("morphic:a->ba,b->a;seed=a")

    def test_missing_rule(self):
        with self.assertRaises(UsageError):
            make_source("morphic:a->abc,b->a;seed=a")

    def test_malformed_descriptors(self):
        for text in ["bogus", "periodic:", "morphic:a=>ab;seed=a", "morphic:a->ab,b->a",
                     "prefix:x.txt"]:
            with self.assertRaises(ParseError, msg=text):
                make_source(text)

    def test_alphabet_must_cover_source(self):
        with self.assertRaises(UsageError):
            make_source("periodic:abc", Alphabet(("a", "b")))

    def test_prefix_cap(self):
        with self.assertRaises(ResourceLimitError):
            prefix(FIB, 5000, Limits(max_prefix_len=1000))

    def test_explicit_file(self):
        path = os.path.join(DATA_DIR, "fib987.txt")
        source = make_source(f"prefix:{path};complete=20")
        self.assertEqual(word_obstructions(source, 20).obstructions,
                         word_obstructions(FIB, 20).obstructions)
        with self.assertRaises(UsageError):
            factors(source, 21)

    def test_explicit_near_bound_warns(self):
        source = explicit_source("abaababa", 5)
        with self.assertWarns(RuntimeWarning):
            factors(source, 5)


class TestFactors(unittest.TestCase):
    def test_periodic(self):
        self.assertEqual(factors(AB, 2), {"ab", "ba"})

    def test_fibonacci(self):
        self.assertEqual(factors(FIB, 2), {"aa", "ab", "ba"})
        self.assertEqual(factors(FIB, 3), {"aab", "aba", "baa", "bab"})

    def test_length_must_be_positive(self):
        with self.assertRaises(UsageError):
            factors(FIB, 0)

    def test_periodic_matches_long_prefix(self):
        periods = [w for k in range(1, 6) for w in lyndon_words(k)] + ["abcab", "aabbab", "abaabbba"]
        for u in periods:
            long = explicit_source(u * 100, 20)
            for n in range(1, 21):
                self.assertEqual(factors(periodic_source(u), n), factors(long, n), (u, n))

    def test_sturmian_complexity(self):
        self.assertEqual(complexity(FIB, 10), [n + 1 for n in range(1, 11)])

    def test_suffix_automaton_counts(self):
        sam = SuffixAutomaton("abaababaab")
        text = sam.text
        for n in range(1, 11):
            self.assertEqual(sam.count(n), len({text[i:i + n] for i in range(len(text) - n + 1)}))
        self.assertTrue(sam.contains("baba"))
        self.assertFalse(sam.contains("bb"))


class TestObstructions(unittest.TestCase):
    def test_fibonacci(self):
        self.assertEqual(word_obstructions(FIB, 5).obstructions, ("bb", "aaa", "babab"))

    def test_periodic(self):
        self.assertEqual(word_obstructions(AB, 3).obstructions, ("aa", "bb"))
        self.assertEqual(word_obstructions(AAB, 4).obstructions, ("bb", "aaa", "bab"))

    def test_cogrowth(self):
        self.assertEqual(cogrowth_word(FIB, 5), [0, 1, 2, 2, 3])
        self.assertEqual(cogrowth_word(AB, 2), [0, 2])
        self.assertEqual(cogrowth_word(FIB, 1), [0])

    def test_unused_letter_is_an_obstruction(self):
        source = periodic_source("ab", Alphabet(("a", "b", "c")))
        self.assertEqual(word_obstructions(source, 2).obstructions, ("c", "aa", "bb"))

    def test_matches_extension_rule(self):
        for source in (FIB, AB, AAB, make_source("periodic:abbab"),
                       make_source("morphic:a->abc,b->ac,c->b;seed=a")):
            self.assertEqual(list(word_obstructions(source, 12).obstructions),
                             candidate_obstructions(source, 12))

    def test_two_sided_minimality(self):
        for source in (FIB, AAB, make_source("morphic:a->aab,b->ba;seed=a")):
            report = word_obstructions(source, 14)
            for w in report.obstructions:
                self.assertNotIn(w, factors(source, len(w)))
                if len(w) > 1:
                    self.assertIn(w[1:], factors(source, len(w) - 1))
                    self.assertIn(w[:-1], factors(source, len(w) - 1))

    def test_fibonacci_lengths_are_fibonacci_numbers(self):
        report = word_obstructions(FIB, 100)
        self.assertEqual(report.lengths(), [2, 3, 5, 8, 13, 21, 34, 55, 89])

    def test_monomial_algebra_consistency(self):
        ab = Alphabet(("a", "b"))
        report = word_obstructions(FIB, 6)
        relations = [Poly.monomial(ab.word(w)) for w in report.obstructions]
        found = obstructions_of_algebra(relations, 6)
        self.assertEqual([ab.render(w) for w in found], list(report.obstructions))


class TestColength(unittest.TestCase):
    def test_minimal_period(self):
        self.assertEqual(minimal_period("abab"), 2)
        self.assertEqual(minimal_period("aab"), 3)
        self.assertEqual(minimal_period("aaaa"), 1)

    def test_examples(self):
        r = colength("ab")
        self.assertEqual((r.colength, r.obstructions), (2, ("aa", "bb")))
        r = colength("aab")
        self.assertEqual((r.colength, r.obstructions), (3, ("bb", "aaa", "bab")))
        self.assertEqual(colength("a", Alphabet(("a",))).colength, 0)

    def test_power_reduces_to_root(self):
        self.assertEqual(colength("abab").obstructions, colength("ab").obstructions)
        self.assertEqual(colength("abab").root, "ab")

    def test_bordered_period(self):
        # aba has border period 2 but (aba)^inf has period 3
        r = colength("aba")
        self.assertEqual(r.minimal_period, 3)
        self.assertEqual(r.obstructions, colength("aab").obstructions)

    def test_obstruction_length_bound(self):
        for k in range(1, 9):
            for u in lyndon_words(k):
                r = colength(u, Alphabet(("a", "b")))
                self.assertTrue(all(len(w) <= r.minimal_period + 1 for w in r.obstructions))

    def test_alphabet_missing_letter(self):
        with self.assertRaises(UsageError):
            colength("ab", Alphabet(("a",)))

    def test_fibonacci_numbers(self):
        self.assertEqual([fibonacci_number(c) for c in range(1, 7)], [1, 2, 3, 5, 8, 13])

    def test_chelnokov_family(self):
        for k in range(2, 10):
            r = chelnokov_family(k)
            self.assertGreaterEqual(fibonacci_number(r.colength), len(r.period))

    def test_bounds_small(self):
        report = check_period_bounds(2)
        self.assertTrue(report.ok)
        self.assertEqual(report.classes_checked, 3)
        self.assertEqual(report.min_colength[2], 2)
        self.assertEqual(check_period_bounds(3).min_colength[3], 3)

    def test_bounds_cap(self):
        with self.assertRaises(UsageError):
            check_period_bounds(13)

    def test_lyndon_counts(self):
        self.assertEqual([len(list(lyndon_words(k))) for k in range(1, 9)],
                         [2, 1, 2, 3, 6, 9, 18, 30])


class TestRecurrence(unittest.TestCase):
    def test_windows(self):
        self.assertEqual(recurrence_window(AB, 1, 50), 2)
        self.assertEqual(recurrence_window(AAB, 2, 50), 4)
        self.assertEqual(recurrence_window(FIB, 1, 50), 3)

    def test_unknown_within_limit(self):
        self.assertIsNone(recurrence_window(FIB, 1, 2))

    def test_window_is_minimal(self):
        t = 3
        T = recurrence_window(FIB, t, 200)
        need = factors(FIB, t)
        for size, expect in [(T, True), (T - 1, False)]:
            windows = factors(FIB, size)
            ok = all(all(f in w for f in need) for w in windows)
            self.assertEqual(ok, expect)


class TestExplicitFiles(unittest.TestCase):
    def test_one_line_required(self):
        with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as f:
            f.write("ab ab\n")
        try:
            with self.assertRaises(ParseError):
                make_source(f"prefix:{f.name};complete=2")
        finally:
            os.unlink(f.name)


if __name__ == "__main__":
    unittest.main()
