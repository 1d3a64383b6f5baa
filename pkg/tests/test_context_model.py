# -*- coding: utf-8  -*-
#
# Copyright (C) 2026 The contextbp developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

from fractions import Fraction
import unittest

from contextbp.context_model import (SourcePolicy, build_context_graph, canon,
                                     constant_lambda, dense_lift_size,
                                     first_order_project, interpolated_row,
                                     predict_longest_suffix, witten_bell,
                                     witten_bell_ml)
from contextbp.corpus import CountTable, count_contexts, parse_corpus
from contextbp.errors import GraphError

from ._test_distribution import example

class TestContextModel(unittest.TestCase):
    """Test cases for context graphs and source policies."""

    def setUp(self):
        self.corpus, self.counts = example()[:2]

    def test_canon(self):
        """test that canon returns the longest stored suffix"""
        self.assertEqual((1, 2), canon(self.counts, 2, (0, 1), 2))
        self.assertEqual((1, 3), canon(self.counts, 2, (0, 1), 3))
        self.assertEqual((), canon(self.counts, 2, (1, 2), 4))
        self.assertEqual((6, 2), canon(self.counts, 2, (6,), 2))
        self.assertEqual((2,), canon(self.counts, 1, (6,), 2))
        self.assertRaises(ValueError, canon, self.counts, 0, (), 1)

    def test_example_graph(self):
        """test the size and weights of the integer example's graph"""
        graph = build_context_graph(self.counts, 2, exact=True)
        self.assertEqual(11, graph.state_count())
        self.assertEqual(23, graph.edge_count())
        self.assertEqual(((2, Fraction(10, 21), (1, 2)),
                          (3, Fraction(11, 21), (1, 3))), graph.edges((0, 1)))
        self.assertEqual(((4, Fraction(1, 11), ()), (5, Fraction(10, 11), ())),
                         graph.edges((1, 3)))
        self.assertEqual(Fraction(1, 21),
                         graph.sequence_probability((3, 4), (0, 1)))
        self.assertEqual(0, graph.sequence_probability((2, 5), (0, 1)))
        self.assertEqual((0, 1), graph.start_state((5, 0, 1)))
        self.assertEqual((), graph.start_state((4,)))
        self.assertIn((6, 3), graph)
        self.assertNotIn((4,), graph)
        self.assertRaises(GraphError, graph.edges, (4,))

    def test_rows_normalize(self):
        """test that every outgoing row sums to one"""
        for policy in (SourcePolicy.mle(), SourcePolicy.interpolated(),
                       SourcePolicy.interpolated("witten-bell-ml", 0.5)):
            graph = build_context_graph(self.counts, 2, policy)
            for state in graph.states():
                total = sum(p for _, p, _ in graph.edges(state))
                self.assertAlmostEqual(1.0, total, delta=1e-12)

    def test_lazy_graph(self):
        """test that a lazy graph only computes the rows it is asked for"""
        graph = build_context_graph(self.counts, 2, lazy=True)
        self.assertEqual(0, graph.materialized_state_count)
        graph.edges((0, 1))
        self.assertEqual(1, graph.materialized_state_count)
        full = build_context_graph(self.counts, 2)
        self.assertEqual(11, full.materialized_state_count)
        self.assertEqual(full.edges((0, 1)), graph.edges((0, 1)))
        self.assertEqual(graph.edges((0, 1)), graph.edges([0, 1]))
        self.assertEqual(full.edges(()), full.edges([]))
        self.assertEqual(1, graph.materialized_state_count)

    def test_predict_longest_suffix(self):
        """test prediction after histories of various lengths"""
        order, dist = predict_longest_suffix(self.counts, 2, (5, 0, 1), True)
        self.assertEqual(2, order)
        self.assertEqual({2: Fraction(10, 21), 3: Fraction(11, 21)}, dist)
        order, dist = predict_longest_suffix(self.counts, 2, (1, 2, 4), True)
        self.assertEqual(0, order)
        self.assertEqual(Fraction(1011, 6084), dist[4])
        order, _ = predict_longest_suffix(self.counts, 1, (0, 1))
        self.assertEqual(1, order)
        empty = CountTable(1, {})
        self.assertRaises(GraphError, predict_longest_suffix, empty, 1, ())

    def test_first_order_project(self):
        """test that the order-1 projection merges histories"""
        graph = first_order_project(self.counts, exact=True)
        weights = {(s, y): p for s in graph.states() for y, p, _ in graph.edges(s)}
        self.assertEqual(Fraction(1, 101), weights[((2,), 4)])
        self.assertEqual(Fraction(1001, 1011), weights[((3,), 4)])

    def test_lambda_rules(self):
        """test the interpolation weight rules"""
        self.assertEqual(Fraction(2, 23), witten_bell(21, 2))
        self.assertEqual(Fraction(21, 23), witten_bell_ml(21, 2))
        self.assertEqual(Fraction(1, 4), constant_lambda("1/4")(10, 3))
        self.assertRaises(ValueError, constant_lambda, 2)
        self.assertRaises(ValueError, SourcePolicy.interpolated, "nonsense")

    def test_interpolated_row(self):
        """test interpolated smoothing on a small table"""
        counts = count_contexts(parse_corpus("0 1\n0 2"), 1)
        # root: {0: 2, 1: 1, 2: 1}; (0,): {1: 1, 2: 1}
        row = interpolated_row(counts, (0,), constant_lambda(1), exact=True)
        self.assertEqual({1: Fraction(1, 2), 2: Fraction(1, 2)}, row)
        row = interpolated_row(counts, (0,), constant_lambda(0), exact=True)
        self.assertEqual({0: Fraction(1, 2), 1: Fraction(1, 4),
                          2: Fraction(1, 4)}, row)
        row = interpolated_row(counts, (0,), exact=True)
        # lam = 2 / (2 + 2)
        self.assertEqual({0: Fraction(1, 4), 1: Fraction(3, 8),
                          2: Fraction(3, 8)}, row)
        row = interpolated_row(counts, (0,), constant_lambda(1),
                               discount=Fraction(1, 2), exact=True)
        self.assertEqual({0: Fraction(1, 4), 1: Fraction(3, 8),
                          2: Fraction(3, 8)}, row)
        self.assertRaises(ValueError, interpolated_row, counts, (0,),
                          discount=-1)

    def test_interpolated_graph_has_backoff_edges(self):
        """test that interpolation adds edges a longest-suffix row lacks"""
        graph = build_context_graph(self.counts, 2,
                                    SourcePolicy.interpolated(), exact=True)
        symbols = [y for y, _, _ in graph.edges((1, 2))]
        self.assertEqual(list(range(7)), symbols)
        for y, p, nxt in graph.edges((1, 2)):
            self.assertEqual(graph.canon((1, 2), y), nxt)

    def test_dump(self):
        """test the canonical edge listing"""
        counts = count_contexts(parse_corpus("0 1"), 1)
        graph = build_context_graph(counts, 1)
        self.assertEqual("() -> 0 : (0) @ 0.5\n() -> 1 : () @ 0.5\n"
                         "(0) -> 1 : () @ 1\n", graph.dump())

    def test_dense_lift_size(self):
        """test the dense lift bound"""
        self.assertEqual(25 ** 6, dense_lift_size(range(25), 6))
        self.assertEqual(7, dense_lift_size(self.counts.alphabet, 1))

    def test_cutoff_checks(self):
        """test that graph orders are validated"""
        self.assertRaises(ValueError, build_context_graph, self.counts, 0)
        self.assertRaises(ValueError, build_context_graph, self.counts, 3)

if __name__ == "__main__":
    unittest.main(verbosity=2)
