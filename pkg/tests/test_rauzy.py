"""Tests for Phase 6: Rauzy graphs, line graphs and the entropy regulator."""

import random
import unittest

from cogrowth.langword import make_source, word_obstructions
from cogrowth.models import ErResult, ResourceLimitError, UsageError
from cogrowth.rauzy import (
    Digraph,
    Edge,
    check_del_edge_lemma,
    digraph_from_edges,
    entropy_regulator,
    er_profile,
    line_graph,
    random_strong_digraph,
    rauzy_graph,
    to_dot,
    walk_count,
)

FIB = make_source("fib")
AB = make_source("periodic:ab")
AAB = make_source("periodic:aab")

LOOP = digraph_from_edges([("v", "v", "l")])
TWO_CYCLE = digraph_from_edges([("a", "b", "ab"), ("b", "a", "ba")])


def edge_triples(H):
    return {(e.tail, e.head, e.label) for e in H.edges}


class TestRauzyGraph(unittest.TestCase):
    def test_fib_r1(self):
        H = rauzy_graph(FIB, 1)
        self.assertEqual(H.vertices, ("a", "b"))
        self.assertEqual(edge_triples(H), {("a", "a", "aa"), ("a", "b", "ab"), ("b", "a", "ba")})

    def test_periodic_two_cycle(self):
        H = rauzy_graph(AB, 1)
        self.assertEqual(edge_triples(H), {("a", "b", "ab"), ("b", "a", "ba")})

    def test_fib_r2(self):
        H = rauzy_graph(FIB, 2)
        self.assertEqual(H.vertices, ("aa", "ab", "ba"))
        self.assertEqual([e.label for e in H.edges], ["aab", "aba", "baa", "bab"])

    def test_n_must_be_positive(self):
        with self.assertRaises(UsageError):
            rauzy_graph(FIB, 0)

    def test_chain_identity(self):
        for source in (FIB, AAB):
            for n in range(1, 15):
                H = rauzy_graph(source, n)
                self.assertEqual(set(rauzy_graph(source, n + 1).vertices),
                                 {e.label for e in H.edges})

    def test_deletion_accounting(self):
        for source in (FIB, AAB):
            lengths = word_obstructions(source, 16).lengths()
            for n in range(1, 15):
                L = line_graph(rauzy_graph(source, n))
                R = rauzy_graph(source, n + 1)
                self.assertEqual(len(L.edges) - len(R.edges), lengths.count(n + 2), (source.name, n))

    def test_periodic_graphs_are_cycles(self):
        for n in range(3, 8):
            H = rauzy_graph(AAB, n)
            self.assertEqual(set(H.out_degree().values()), {1})
            self.assertTrue(entropy_regulator(H).infinite)


class TestLineGraph(unittest.TestCase):
    def test_loop_is_fixed(self):
        L = line_graph(LOOP)
        self.assertEqual(L.vertices, ("l",))
        self.assertEqual(len(L.edges), 1)
        self.assertEqual((L.edges[0].tail, L.edges[0].head), ("l", "l"))

    def test_fib_r1(self):
        L = line_graph(rauzy_graph(FIB, 1))
        self.assertEqual(L.vertices, ("aa", "ab", "ba"))
        pairs = {(e.tail, e.head) for e in L.edges}
        self.assertEqual(pairs, {("aa", "aa"), ("aa", "ab"), ("ab", "ba"), ("ba", "aa"), ("ba", "ab")})

    def test_two_cycle_is_fixed(self):
        L = line_graph(TWO_CYCLE)
        self.assertEqual(len(L.vertices), 2)
        self.assertEqual({(e.tail, e.head) for e in L.edges}, {("ab", "ba"), ("ba", "ab")})

    def test_merged_labels_are_words(self):
        L = line_graph(rauzy_graph(FIB, 3))
        for e in L.edges:
            self.assertEqual(len(e.label), 5)

    def test_walk_counts_preserved(self):
        rng = random.Random(3)
        graphs = [rauzy_graph(FIB, 2), TWO_CYCLE] + [random_strong_digraph(rng) for _ in range(5)]
        for H in graphs:
            L = line_graph(H)
            for k in range(6):
                self.assertEqual(walk_count(L, k), walk_count(H, k + 1))


class TestEntropyRegulator(unittest.TestCase):
    def test_cycle_is_infinite(self):
        self.assertTrue(entropy_regulator(TWO_CYCLE).infinite)
        self.assertEqual(str(entropy_regulator(TWO_CYCLE)), "inf")

    def test_fib_r1(self):
        self.assertEqual(entropy_regulator(rauzy_graph(FIB, 1)), ErResult(1))

    def test_path_with_shortcut(self):
        H = digraph_from_edges([("v1", "v2", None), ("v2", "v3", None), ("v1", "v3", None)])
        self.assertEqual(entropy_regulator(H).value, 2)

    def test_all_branching(self):
        H = digraph_from_edges([("a", "a", "aa"), ("a", "b", "ab"), ("b", "a", "ba"), ("b", "b", "bb")])
        self.assertEqual(entropy_regulator(H).value, 0)

    def test_profile(self):
        rows = er_profile(FIB, 4)
        self.assertEqual(rows[0], (1, ErResult(1), 0, 1))
        self.assertEqual(rows[1], (2, ErResult(2), 1, 2))
        for n, er, o, bound in rows:
            self.assertLessEqual(er.value, bound)


class TestLemma(unittest.TestCase):
    def test_fib_r1(self):
        report = check_del_edge_lemma(rauzy_graph(FIB, 1), 20_000)
        self.assertEqual((report.base_er, report.bound), (1, 3))
        self.assertTrue(report.ok)
        self.assertEqual(len(report.results), report.iterated_edges)

    def test_fib_r2(self):
        report = check_del_edge_lemma(rauzy_graph(FIB, 2), 20_000)
        self.assertEqual(report.bound, 6)
        self.assertTrue(report.ok)

    def test_results_sorted_by_edge(self):
        report = check_del_edge_lemma(rauzy_graph(FIB, 1), 20_000)
        keys = [r.edge for r in report.results]
        self.assertEqual(keys, sorted(keys))

    def test_infinite_er_rejected(self):
        with self.assertRaises(UsageError):
            check_del_edge_lemma(TWO_CYCLE, 20_000)

    def test_all_branching_rejected(self):
        complete = digraph_from_edges([("a", "a", "aa"), ("a", "b", "ab"),
                                       ("b", "a", "ba"), ("b", "b", "bb")])
        self.assertEqual(entropy_regulator(complete).value, 0)
        with self.assertRaises(UsageError):
            check_del_edge_lemma(complete, 20_000)

    def test_not_strongly_connected(self):
        H = digraph_from_edges([("a", "b", "ab"), ("a", "a", "aa")])
        with self.assertRaises(UsageError):
            check_del_edge_lemma(H, 20_000)

    def test_size_cap(self):
        with self.assertRaises(ResourceLimitError):
            check_del_edge_lemma(rauzy_graph(FIB, 2), 10)


class TestDigraph(unittest.TestCase):
    def test_duplicate_edge(self):
        with self.assertRaises(UsageError):
            digraph_from_edges([("a", "b", "x"), ("b", "a", "x")])

    def test_unknown_endpoint(self):
        with self.assertRaises(UsageError):
            Digraph(("a",), (Edge("a", "b", "ab"),))

    def test_parallel_edges_need_labels(self):
        H = digraph_from_edges([("a", "b", "p"), ("a", "b", "q"), ("b", "a", None)])
        self.assertEqual(H.out_degree(), {"a": 2, "b": 1})
        with self.assertRaises(UsageError):
            digraph_from_edges([("a", "b", None), ("a", "b", None)])

    def test_random_digraphs(self):
        rng = random.Random(11)
        for _ in range(10):
            H = random_strong_digraph(rng)
            self.assertLessEqual(len(H.vertices), 6)
            self.assertLessEqual(max(H.out_degree().values()), 2)
            er = entropy_regulator(H)
            self.assertFalse(er.infinite)
            self.assertIn(er.value, (1, 2))

    def test_dot(self):
        self.assertEqual(to_dot(rauzy_graph(FIB, 1), "R1"), (
            'digraph "R1" {\n'
            '  "a";\n'
            '  "b";\n'
            '  "a" -> "a" [label="aa"];\n'
            '  "a" -> "b" [label="ab"];\n'
            '  "b" -> "a" [label="ba"];\n'
            "}\n"
        ))


if __name__ == "__main__":
    unittest.main()
