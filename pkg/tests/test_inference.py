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
import math
import unittest

from contextbp.constraints import (PositionalMask, accept_all,
                                   compile_forbidden, intersect,
                                   mask_to_acceptor)
from contextbp.context_model import build_context_graph
from contextbp.corpus import count_contexts, parse_corpus
from contextbp.errors import GraphError, InfeasibleError
from contextbp.inference import (BackwardTable, backward_pass,
                                 conditional_distribution,
                                 first_order_hybrid, forward_marginals,
                                 initial_state, log_partition,
                                 partition_function, product_stats,
                                 sample_sequence)
from contextbp.oracle import empirical_distribution, random_instance, tv_distance
from contextbp.utils import make_rng

from ._test_distribution import (EXAMPLE_CONDITIONAL, EXAMPLE_Z,
                                 DistributionTestCase, example)

class TestInference(DistributionTestCase):
    """Test cases for the backward pass and the exact sampler."""

    def setUp(self):
        (self.corpus, self.counts, self.acceptor, self.mask,
         self.prefix) = example()
        self.graph = build_context_graph(self.counts, 2)
        self.start = initial_state(self.graph, self.acceptor, self.prefix)
        self.table = backward_pass(self.graph, self.acceptor, self.mask,
                                   start=self.start)

    def test_partition_function(self):
        """test Z on the integer example"""
        value, scale = partition_function(self.table, self.start)
        self.assertEqual(0.0, scale)
        self.assertAlmostEqual(float(EXAMPLE_Z), value, delta=1e-12)
        self.assertAlmostEqual(0.52380952381, value, places=11)
        self.assertAlmostEqual(math.log(11 / 21),
                               log_partition(self.table, self.start),
                               delta=1e-12)

    def test_exact_mode(self):
        """test that an exact graph gives rational messages"""
        graph = build_context_graph(self.counts, 2, exact=True)
        table = backward_pass(graph, self.acceptor, self.mask,
                              prefix=self.prefix)
        start = initial_state(graph, self.acceptor, self.prefix)
        self.assertEqual((EXAMPLE_Z, 0.0), partition_function(table, start))
        self.assertEqual(EXAMPLE_CONDITIONAL, conditional_distribution(
            graph, self.acceptor, self.mask, table, start))

    def test_conditional_distribution(self):
        """test the conditioned distribution of the integer example"""
        dist = conditional_distribution(self.graph, self.acceptor, self.mask,
                                        self.table, self.start)
        self.assertDistributionEqual(EXAMPLE_CONDITIONAL, dist)
        self.assertLessEqual(tv_distance(EXAMPLE_CONDITIONAL, dist), 1e-12)

    def test_product_stats(self):
        """test the reachable product of the integer example"""
        stats = product_stats(self.graph, self.acceptor, self.mask,
                              start=self.start)
        self.assertEqual(11, stats.contexts)
        self.assertEqual(23, stats.context_edges)
        self.assertEqual(1, stats.acceptor_states)
        self.assertEqual(4, stats.reach_states)
        self.assertEqual(4, stats.time_states)
        self.assertEqual(4, stats.reach_edges)
        self.assertEqual(4, stats.time_edges)
        self.assertEqual(23, stats.full_bound)
        self.assertEqual(4, self.table.reach_edges)

    def test_edge_visits(self):
        """test that each time-indexed product edge is visited once"""
        stats = product_stats(self.graph, self.acceptor, self.mask,
                              start=self.start)
        self.assertEqual(stats.time_edges, self.table.edge_visits)
        self.assertLessEqual(self.table.edge_visits,
                             self.mask.horizon * stats.reach_edges)

    def test_sampling_fidelity(self):
        """test 20000 seeded samples against the exact conditional"""
        rng = make_rng(0)
        samples = [sample_sequence(self.graph, self.acceptor, self.mask,
                                   self.table, self.start, rng).sequence
                   for _ in range(20000)]
        self.assertValidSamples(samples, self.acceptor, self.mask)
        empirical = empirical_distribution(samples)
        self.assertLessEqual(tv_distance(EXAMPLE_CONDITIONAL, empirical), 0.02)

    def test_sampling_is_seeded(self):
        """test that equal seeds give equal samples"""
        first = [sample_sequence(self.graph, self.acceptor, self.mask,
                                 self.table, self.start, 7).sequence
                 for _ in range(5)]
        second = [sample_sequence(self.graph, self.acceptor, self.mask,
                                  self.table, self.start, 7).sequence
                  for _ in range(5)]
        self.assertEqual(first, second)

    def test_sample_trace(self):
        """test the per-step trace of a sample"""
        result = sample_sequence(self.graph, self.acceptor, self.mask,
                                 self.table, self.start, 3, trace=True)
        self.assertEqual([2, 2], result.orders)
        self.assertEqual(2, len(result.trace))
        self.assertEqual(0, result.trace[0].t)
        self.assertEqual([0, 1], result.trace[0].state)
        self.assertEqual(result.sequence[0], result.trace[0].symbol)
        self.assertEqual(4, result.trace[1].symbol)

    def test_infeasible(self):
        """test that a zero-mass problem is reported, not sampled"""
        mask = PositionalMask(2, {1: {0}})
        table = backward_pass(self.graph, self.acceptor, mask,
                              start=self.start)
        self.assertEqual(0, partition_function(table, self.start)[0])
        self.assertEqual(float("-inf"), log_partition(table, self.start))
        self.assertEqual({}, conditional_distribution(
            self.graph, self.acceptor, mask, table, self.start))
        self.assertEqual([], forward_marginals(
            self.graph, self.acceptor, mask, table, self.start))
        with self.assertRaises(InfeasibleError):
            sample_sequence(self.graph, self.acceptor, mask, table, self.start)
        self.assertRaises(GraphError, partition_function, table, ((4,), 0))

    def test_rescaling(self):
        """test that long horizons rescale instead of underflowing"""
        corpus = parse_corpus("\n".join("{} {}".format(a, b)
                                        for a in range(10) for b in range(10)))
        counts = count_contexts(corpus, 1)
        graph = build_context_graph(counts, 1)
        acceptor = accept_all(corpus.alphabet)
        n = 400
        mask = PositionalMask(n, {t: {t % 10} for t in range(n)})
        start = initial_state(graph, acceptor)
        table = backward_pass(graph, acceptor, mask, start=start)
        self.assertGreater(table.rescale_events, 0)
        expected = n * math.log(0.1)
        self.assertAlmostEqual(1.0, log_partition(table, start) / expected,
                               delta=1e-9)
        sample = sample_sequence(graph, acceptor, mask, table, start, 0)
        self.assertEqual([t % 10 for t in range(n)], sample.sequence)
        flat = backward_pass(graph, acceptor, mask, start=start, rescale=False)
        self.assertEqual(0.0, partition_function(flat, start)[0])

    def test_rescaling_is_transparent(self):
        """test that rescaled and plain tables agree on Z and on samples"""
        corpus = parse_corpus("0 1 2 0 2 1\n1 1 0 2 2 0\n2 0 1 1 2")
        counts = count_contexts(corpus, 2)
        graph = build_context_graph(counts, 2)
        acceptor = compile_forbidden([(2, 2)], corpus.alphabet)
        mask = PositionalMask(30)
        start = initial_state(graph, acceptor)
        scaled = BackwardTable(graph, acceptor, mask, threshold=0.5)
        scaled.prepare(start)
        plain = backward_pass(graph, acceptor, mask, start=start, rescale=False)
        self.assertGreater(scaled.rescale_events, 0)
        self.assertEqual(0, plain.rescale_events)
        self.assertAlmostEqual(log_partition(plain, start),
                               log_partition(scaled, start), delta=1e-9)
        value, scale = partition_function(scaled, start)
        self.assertAlmostEqual(1.0, value * math.exp(scale) /
                               partition_function(plain, start)[0], delta=1e-9)
        for seed in range(20):
            self.assertEqual(
                sample_sequence(graph, acceptor, mask, plain, start,
                                seed).sequence,
                sample_sequence(graph, acceptor, mask, scaled, start,
                                seed).sequence)

    def test_forward_marginals(self):
        """test the per-position marginals of the integer example"""
        marginals = forward_marginals(self.graph, self.acceptor, self.mask,
                                      self.table, self.start)
        self.assertEqual(2, len(marginals))
        self.assertAlmostEqual(10 / 11, marginals[0][2], delta=1e-12)
        self.assertAlmostEqual(1 / 11, marginals[0][3], delta=1e-12)
        self.assertAlmostEqual(1.0, marginals[1][4], delta=1e-12)

    def test_feed_prefix(self):
        """test that a fed prefix counts toward forbidden substrings"""
        acceptor = compile_forbidden([(1, 2)], self.corpus.alphabet)
        start = initial_state(self.graph, acceptor, self.prefix, True)
        table = backward_pass(self.graph, acceptor, self.mask, start=start)
        self.assertAlmostEqual(1 / 21, partition_function(table, start)[0],
                               delta=1e-12)
        self.assertDistributionEqual({(3, 4): 1}, conditional_distribution(
            self.graph, acceptor, self.mask, table, start))
        start = initial_state(self.graph, acceptor, self.prefix)
        table = backward_pass(self.graph, acceptor, self.mask, start=start)
        self.assertAlmostEqual(11 / 21, partition_function(table, start)[0],
                               delta=1e-12)

    def test_first_order_hybrid(self):
        """test that merging histories reverses the first-step preference"""
        scores = first_order_hybrid(self.counts, 2, self.mask, self.prefix)
        self.assertGreater(scores[3], 0.99)
        self.assertAlmostEqual(0.991, scores[3], delta=1e-3)
        exact = first_order_hybrid(self.counts, 2, self.mask, self.prefix,
                                   exact=True)
        self.assertEqual(Fraction(1112111, 1122221), exact[3])
        support = first_order_hybrid(self.counts, 2, self.mask, self.prefix,
                                     mode="support", exact=True)
        self.assertEqual({2: Fraction(10, 21), 3: Fraction(11, 21)}, support)
        self.assertRaises(ValueError, first_order_hybrid, self.counts, 2,
                          self.mask, self.prefix, mode="other")

    def test_masks_match_position_automaton(self):
        """test that masks and a folded position automaton give equal Z"""
        problems = [(self.counts, 2, self.acceptor, self.mask, self.prefix)]
        for seed in range(20):
            inst = random_instance(seed)
            problems.append((inst.counts, inst.max_order, inst.acceptor,
                             inst.mask, inst.prefix))
        for counts, order, acceptor, mask, prefix in problems:
            graph = build_context_graph(counts, order)
            start = initial_state(graph, acceptor, prefix)
            table = backward_pass(graph, acceptor, mask, start=start)
            folded = intersect(acceptor, mask_to_acceptor(mask, counts.alphabet))
            plain = PositionalMask(mask.horizon)
            fstart = initial_state(graph, folded, prefix)
            ftable = backward_pass(graph, folded, plain, start=fstart)
            self.assertAlmostEqual(partition_function(table, start)[0],
                                   partition_function(ftable, fstart)[0],
                                   delta=1e-12)

if __name__ == "__main__":
    unittest.main(verbosity=2)
