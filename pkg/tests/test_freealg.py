"""Tests for Phase 2: Free algebra."""

import itertools
import unittest
from fractions import Fraction

from cogrowth.freealg import (
    EQUAL,
    GREATER,
    LESS,
    Poly,
    PrimeField,
    deglex_cmp,
    deglex_key,
    field_from_name,
    format_poly,
    is_member,
    normal_form,
    parse_poly,
    poly_normalize,
    reduce_once,
)
from cogrowth.groebner import ideal_span_contains
from cogrowth.models import Alphabet, ParseError, UsageError

XY = Alphabet(("x", "y"))
X, Y = 0, 1


def P(text):
    return parse_poly(text, XY)


def words_upto(n, letters=2):
    for k in range(n + 1):
        yield from itertools.product(range(letters), repeat=k)


class TestDeglex(unittest.TestCase):
    def test_length_dominates(self):
        self.assertEqual(deglex_cmp((X, X), (Y,)), GREATER)

    def test_lex_within_length(self):
        self.assertEqual(deglex_cmp((X, Y), (Y, X)), LESS)

    def test_empty_word_is_least(self):
        self.assertEqual(deglex_cmp((), (X,)), LESS)
        self.assertEqual(deglex_cmp((), ()), EQUAL)

    def test_total_order_exhaustive(self):
        words = sorted(words_upto(5), key=deglex_key)
        for i, u in enumerate(words):
            for j, v in enumerate(words):
                expected = LESS if i < j else GREATER if i > j else EQUAL
                self.assertEqual(deglex_cmp(u, v), expected)
                if len(u) != len(v):
                    self.assertEqual(deglex_cmp(u, v), LESS if len(u) < len(v) else GREATER)

    def test_invalid_letter(self):
        with self.assertRaises(UsageError):
            deglex_cmp((X, 5), (Y,), XY)


class TestNormalize(unittest.TestCase):
    def test_merge(self):
        p = poly_normalize([(Fraction(1), (X, Y)), (Fraction(1), (X, Y))])
        self.assertEqual(p.terms, ((2, (X, Y)),))

    def test_cancellation(self):
        p = poly_normalize([(Fraction(1), (X, Y)), (Fraction(-1), (X, Y))])
        self.assertTrue(p.is_zero)

    def test_sorted_descending(self):
        p = poly_normalize([(Fraction(1), (X,)), (Fraction(1), (Y, X))])
        self.assertEqual(p.words(), [(Y, X), (X,)])

    def test_idempotent(self):
        p = P("x + y*x - 3*x*y*x + 1/2")
        self.assertEqual(poly_normalize(p.terms), p)


class TestReduction(unittest.TestCase):
    def setUp(self):
        self.g = P("y*x - x*x")

    def test_reduce_once_inside_word(self):
        p = P("y*y*x")
        self.assertEqual(reduce_once(p, self.g, (0, 1)), P("y*x*x"))

    def test_reduce_once_self(self):
        self.assertTrue(reduce_once(self.g, self.g, (0, 0)).is_zero)

    def test_reduce_once_no_occurrence(self):
        with self.assertRaises(UsageError):
            reduce_once(P("x*y"), self.g, (0, 0))

    def test_reduce_once_non_monic(self):
        with self.assertRaises(UsageError):
            reduce_once(P("y*y*x"), P("2*y*x"), (0, 1))

    def test_reduce_once_only_removes_selected_monomial_above_it(self):
        p = P("y*y*x + y*x*x + x")
        eliminated = (Y, Y, X)
        r = reduce_once(p, self.g, (0, 1))
        above = lambda q: {w for w in q.words() if deglex_key(w) >= deglex_key(eliminated)}
        self.assertEqual(above(p) - above(r), {eliminated})
        self.assertFalse(above(r) - above(p))

    def test_normal_form_rewrites_fully(self):
        self.assertEqual(normal_form(P("y*y*x"), [self.g]), P("x*x*x"))

    def test_normal_form_irreducible(self):
        self.assertEqual(normal_form(P("x*y"), [self.g]), P("x*y"))

    def test_normal_form_member(self):
        self.assertTrue(normal_form(self.g, [self.g]).is_zero)

    def test_normal_form_deterministic(self):
        basis = [P("y*x - x*y"), P("x*x*x - y")]
        p = P("y*y*x*x*x + 2*x*y*x - 1")
        self.assertEqual(normal_form(p, basis).terms, normal_form(p, basis).terms)

    def test_normal_form_no_basis_lead_remains(self):
        basis = {g.lead_word: g for g in [P("y*x - x*y"), P("x*x - 1")]}
        r = normal_form(P("y*y*x*x*y*x + x*y*x*x"), basis)
        for w in r.words():
            for lead in basis:
                self.assertFalse(any(w[i:i + len(lead)] == lead for i in range(len(w))))

    def test_normal_form_difference_lies_in_ideal(self):
        bases = [
            [self.g],
            [P("y*x - x*y"), P("x*x*x - y")],
            [P("x*x - 1")],
            [P("y*y - x*y")],
        ]
        polys = [P("y*y*x"), P("y*x*y + x"), P("x*x*x*y - 2*y*x"), P("y*y*y - 1"), P("x*y")]
        for basis in bases:
            for p in polys:
                diff = p - normal_form(p, basis)
                with self.subTest(basis=[format_poly(g, XY) for g in basis], p=format_poly(p, XY)):
                    self.assertTrue(ideal_span_contains(basis, diff, 0, XY))

    def test_span_rejects_nonmember(self):
        self.assertFalse(ideal_span_contains([self.g], P("y*y"), 2, XY))
        self.assertFalse(ideal_span_contains([P("x*x - 1")], P("x"), 2, XY))

    def test_unit_in_basis_kills_everything(self):
        self.assertTrue(normal_form(P("x*y + 3"), [P("1")]).is_zero)

    def test_is_member(self):
        basis = {(Y, X): self.g}
        self.assertTrue(is_member(P("y*y*x - y*x*x"), basis, saturated=True))
        self.assertFalse(is_member(P("x*y"), basis, saturated=True))
        self.assertIsNone(is_member(P("x*y"), basis, saturated=False))


class TestGrammar(unittest.TestCase):
    def test_parse_example(self):
        p = P("2/3*x*x*y + y - 1")
        self.assertEqual(p.terms, ((Fraction(2, 3), (X, X, Y)), (1, (Y,)), (-1, ())))

    def test_powers_and_compact_names(self):
        self.assertEqual(P("x^2*y"), P("x*x*y"))
        self.assertEqual(P("xy - yx"), P("x*y - y*x"))

    def test_unit_token(self):
        self.assertEqual(P("1").terms, ((1, ()),))

    def test_format_round_trip(self):
        for text in ["2/3*x*x*y + y - 1", "-x*y + 1/2*y*x", "y^3 - 7", "x"]:
            p = P(text)
            self.assertEqual(P(format_poly(p, XY)), p)

    def test_format_text(self):
        self.assertEqual(format_poly(P("1 - x*y + 2*y*x"), XY), "2*y*x - x*y + 1")
        self.assertEqual(format_poly(Poly(), XY), "0")

    def test_error_column(self):
        with self.assertRaises(ParseError) as ctx:
            P("x + * y")
        self.assertEqual(ctx.exception.column, 5)

    def test_bad_character(self):
        with self.assertRaises(ParseError) as ctx:
            P("x + $")
        self.assertEqual(ctx.exception.column, 5)

    def test_unknown_letter(self):
        with self.assertRaises(ParseError):
            P("x*z")

    def test_zero_denominator(self):
        with self.assertRaises(ParseError):
            P("1/0*x")

    def test_multichar_letters(self):
        alpha = Alphabet(("x1", "x2"))
        p = parse_poly("x2*x1 - x1*x2", alpha)
        self.assertEqual(p.lead_word, (1, 0))
        self.assertEqual(format_poly(p, alpha), "x2*x1 - x1*x2")


class TestPrimeField(unittest.TestCase):
    def test_monic_in_gf5(self):
        p = parse_poly("2*x + 3", XY, PrimeField(5)).monic()
        self.assertTrue(p.is_monic)
        self.assertEqual(p.coeff(()), 4)

    def test_not_prime(self):
        with self.assertRaises(UsageError):
            PrimeField(9)

    def test_field_names(self):
        self.assertEqual(field_from_name("prime:7").p, 7)
        with self.assertRaises(UsageError):
            field_from_name("float")

    def test_reduction_mod_p(self):
        gf = PrimeField(3)
        g = parse_poly("y*x - 2*x*y", XY, gf)
        r = normal_form(parse_poly("y*y*x", XY, gf), [g])
        self.assertEqual(r, parse_poly("4*x*y*y", XY, gf))


if __name__ == "__main__":
    unittest.main()
