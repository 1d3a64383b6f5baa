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

import unittest

from contextbp.augmentation import (Transform, TransformGroup,
                                    VirtualCountTable, check_equivalence,
                                    close_alphabet, materialize, virtual_row)
from contextbp.constraints import PositionalMask, compile_forbidden
from contextbp.context_model import SourcePolicy, build_context_graph
from contextbp.corpus import count_contexts, parse_corpus
from contextbp.errors import TransformError
from contextbp.orderstack import OrderPolicy

TINY = "0 1 2\n1 2 0 1\n2* 2 2 1"

class TestAugmentation(unittest.TestCase):
    """Test cases for transforms and virtual augmentation."""

    def setUp(self):
        self.corpus = parse_corpus(TINY)
        self.group = TransformGroup.shifts([0, 1, 2])

    def test_transforms(self):
        """test shifts and explicit maps"""
        up = Transform.shift(3)
        self.assertEqual(5, up.apply(2))
        self.assertEqual(2, up.invert(5))
        self.assertEqual((3, 4), up.apply_all((0, 1)))
        self.assertTrue(Transform.shift(0).is_identity)
        swap = Transform.explicit([(0, 1), (1, 0)])
        self.assertEqual((1, 0, 7), swap.apply_all((0, 1, 7)))
        self.assertEqual((0, 1), swap.invert_all((1, 0)))
        self.assertFalse(swap.is_identity)
        self.assertTrue(Transform.explicit([]).is_identity)
        self.assertEqual([[0, 1], [1, 0]], swap.pairs())
        self.assertRaises(TransformError, Transform.explicit, [(0, 1), (0, 2)])
        self.assertRaises(TransformError, Transform.explicit, [(0, 2), (1, 2)])

    def test_group(self):
        """test group construction and documents"""
        self.assertEqual(3, len(self.group))
        self.assertEqual(3, len(TransformGroup.shifts([0, 1, 1, 2])))
        self.assertRaises(TransformError, TransformGroup.shifts, [1, 2])
        doc = {"kind": "shift", "amounts": [0, 1, 2]}
        self.assertEqual(doc, TransformGroup.from_document(doc).to_document())
        doc = {"kind": "explicit", "maps": [[], [[0, 1], [1, 0]]]}
        self.assertEqual(doc, TransformGroup.from_document(doc).to_document())
        self.assertRaises(TransformError, TransformGroup.from_document,
                          {"kind": "rotate"})
        self.assertRaises(TransformError, TransformGroup.from_document,
                          {"amounts": [0]})

    def test_close_alphabet(self):
        """test closure and the injectivity checks"""
        self.assertEqual(frozenset(range(5)),
                         close_alphabet(self.corpus, self.group))
        down = TransformGroup.shifts([0, -1])
        self.assertRaises(TransformError, close_alphabet, self.corpus, down)
        clash = TransformGroup([Transform.shift(0),
                                Transform.explicit([(0, 1)])])
        self.assertRaises(TransformError, close_alphabet, {0, 1}, clash)
        self.assertRaises(TransformError, close_alphabet,
                          parse_corpus("0 0"), clash)
        swap = TransformGroup([Transform.shift(0),
                               Transform.explicit([(0, 1), (1, 0)])])
        self.assertEqual(frozenset([0, 1]),
                         close_alphabet(parse_corpus("0 0"), swap))

    def test_virtual_rows(self):
        """test that virtual rows equal the materialized corpus rows"""
        base = count_contexts(self.corpus, 2)
        virtual = VirtualCountTable(base, self.group)
        augmented = materialize(self.corpus, self.group)
        full = count_contexts(augmented, 2, augmented.alphabet)
        self.assertEqual(full.contexts(), virtual.contexts())
        for context in full.contexts():
            self.assertEqual(dict(full.row(context)),
                             virtual_row(virtual, context))
            self.assertIn(context, virtual)
        self.assertNotIn((0, 0), virtual)
        self.assertEqual({}, virtual_row(virtual, (0, 0)))
        self.assertEqual(self.corpus.token_count, virtual.stored_events())
        self.assertEqual(3 * self.corpus.token_count, virtual.event_count())
        self.assertEqual(augmented.token_count, virtual.event_count())

    def test_augmented_policy(self):
        """test that the augmented source policy builds the materialized graph"""
        base = count_contexts(self.corpus, 2)
        augmented = materialize(self.corpus, self.group)
        full = count_contexts(augmented, 2, augmented.alphabet)
        lazy = build_context_graph(base, 2, SourcePolicy.augmented(self.group))
        explicit = build_context_graph(full, 2)
        self.assertEqual(explicit.edge_table(), lazy.edge_table())

    def test_lazy_rows(self):
        """test that only the rows reached are computed"""
        base = count_contexts(self.corpus, 2)
        virtual = VirtualCountTable(base, self.group)
        graph = build_context_graph(virtual, 2, lazy=True)
        graph.edges((1, 2))
        self.assertLess(virtual.rows_computed, len(virtual.contexts()))

    def test_identity_group(self):
        """test that the identity group trivially passes"""
        report = check_equivalence(self.corpus, 2, TransformGroup.identity(),
                                   horizon=3, prefix=(0,))
        self.assertTrue(report.passed)
        self.assertEqual(1, report.group_size)
        self.assertEqual(report.stored_events_virtual,
                         report.stored_events_materialized)

    def test_shift_group_equivalence(self):
        """test that virtual and materialized pipelines agree exactly"""
        report = check_equivalence(self.corpus, 2, self.group, horizon=3,
                                   prefix=(0,))
        self.assertTrue(report.passed)
        self.assertEqual(0, report.row_difference)
        self.assertIs(None, report.first_mismatch)
        self.assertEqual(0, report.edge_mismatches)
        self.assertEqual(0.0, report.z_difference)
        self.assertEqual(0.0, report.mass_difference)
        self.assertEqual(0.0, report.start_order_difference)
        self.assertEqual(report.z_virtual, report.z_materialized)
        self.assertEqual(report.contexts_virtual, report.contexts_materialized)
        self.assertLessEqual(report.lazy_touched_states,
                             report.full_graph_states)

    def test_constrained_equivalence(self):
        """test equivalence under forbidden substrings, anchors and singleton avoidance"""
        closure = close_alphabet(self.corpus, self.group)
        acceptor = compile_forbidden([(2, 2), (3, 4)], closure)
        mask = PositionalMask(4, {3: {1, 2, 3}})
        report = check_equivalence(self.corpus, 2, self.group, acceptor, mask,
                                   prefix=(1,),
                                   order_policy=OrderPolicy.singleton_avoiding())
        self.assertTrue(report.passed)
        self.assertGreater(report.z_virtual, 0)
        self.assertGreater(report.mass_virtual, 0)

    def test_stored_event_accounting(self):
        """test that twelve shifts store one twelfth of the events"""
        corpus = parse_corpus("148* 0 1 2 3")
        self.assertEqual(592, corpus.token_count)
        report = check_equivalence(corpus, 2, TransformGroup.shifts(range(12)),
                                   horizon=2)
        self.assertEqual(592, report.stored_events_virtual)
        self.assertEqual(7104, report.stored_events_materialized)
        self.assertEqual(12, report.group_size)
        self.assertTrue(report.passed)

    def test_requires_horizon(self):
        """test that a horizon or a mask is required"""
        self.assertRaises(ValueError, check_equivalence, self.corpus, 2,
                          self.group)

if __name__ == "__main__":
    unittest.main(verbosity=2)
