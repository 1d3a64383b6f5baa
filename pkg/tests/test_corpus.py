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

from contextbp.corpus import Corpus, CountTable, count_contexts, parse_corpus
from contextbp.errors import CorpusError

from ._test_distribution import EXAMPLE_CORPUS

class TestCorpus(unittest.TestCase):
    """Test cases for corpus parsing and context counting."""

    def test_parse(self):
        """test that comments, blank lines and multiplicities are handled"""
        corpus = parse_corpus(EXAMPLE_CORPUS)
        self.assertEqual(5, len(corpus))
        self.assertEqual((10, (0, 1, 2, 4)), corpus.sequences[0])
        self.assertEqual((1, (0, 1, 3, 4)), corpus.sequences[2])
        self.assertEqual(frozenset(range(7)), corpus.alphabet)
        self.assertEqual(6084, corpus.token_count)
        self.assertEqual(corpus, parse_corpus("\n\n" + corpus.to_text()))
        self.assertEqual(corpus, parse_corpus(corpus.to_text().splitlines()))
        self.assertEqual(corpus, parse_corpus(corpus.to_text().encode("utf8")))
        self.assertEqual(((3, (1, 2)),), parse_corpus("3*1 2").sequences)

    def test_parse_errors(self):
        """test that malformed corpora raise CorpusError with a line number"""
        with self.assertRaises(CorpusError) as ctx:
            parse_corpus("0 1\n0 x 2\n")
        self.assertEqual(2, ctx.exception.lineno)
        self.assertIn("line 2", str(ctx.exception))
        self.assertRaises(CorpusError, parse_corpus, "0* 1 2")
        self.assertRaises(CorpusError, parse_corpus, "a* 1 2")
        self.assertRaises(CorpusError, parse_corpus, "3*")
        self.assertRaises(CorpusError, parse_corpus, "0 -1")
        self.assertRaises(CorpusError, parse_corpus, "# only a comment\n\n")
        self.assertRaises(ValueError, parse_corpus, "0 1", 0)
        self.assertRaises(CorpusError, Corpus, [(1, ())])
        self.assertRaises(CorpusError, Corpus, [(0, (1,))])
        self.assertRaises(CorpusError, Corpus, [(1, (1, 5))], {1})

    def test_count_contexts(self):
        """test the counts and contexts of the integer example"""
        counts = count_contexts(parse_corpus(EXAMPLE_CORPUS), 2)
        self.assertEqual(11, len(counts))
        self.assertEqual(6084, counts.event_count())
        self.assertEqual({2: 10, 3: 11}, dict(counts.row((0, 1))))
        self.assertEqual({4: 10}, dict(counts.row((1, 2))))
        self.assertEqual({5: 10, 4: 1}, dict(counts.row((1, 3))))
        self.assertEqual({4: 10, 5: 1000}, dict(counts.row((2,))))
        self.assertEqual({5: 10, 4: 1001}, dict(counts.row((3,))))
        self.assertEqual({}, dict(counts.row((4,))))
        self.assertNotIn((4,), counts)
        self.assertEqual(2, counts.distinct((1, 3)))
        self.assertEqual(21, counts.total((0, 1)))
        self.assertEqual([(), (0,), (1,), (2,), (3,), (6,)], counts.contexts(1))
        counts.check_suffix_closure()
        self.assertRaises(ValueError, count_contexts, parse_corpus("0 1"), 0)

    def test_suffix_closure(self):
        """test that every counted context keeps its suffixes"""
        corpus = parse_corpus("0 1 2 0 1 3\n2 2 2 1\n4* 3 0 1 2")
        for k in (1, 2, 3, 4):
            counts = count_contexts(corpus, k)
            counts.check_suffix_closure()
            for context in counts.contexts():
                self.assertLessEqual(len(context), k)
                self.assertTrue(counts.row(context) or not context)
        broken = CountTable(2, {(): {1: 1}, (0, 1): {2: 1}})
        self.assertRaises(CorpusError, broken.check_suffix_closure)

    def test_rows_are_read_only(self):
        """test that rows cannot be modified through the table"""
        counts = count_contexts(parse_corpus("0 1 2"), 1)
        row = counts.row((0,))
        with self.assertRaises(TypeError):
            row[1] = 5

    def test_model_document(self):
        """test that serialized models are canonical and load back equal"""
        corpus = parse_corpus(EXAMPLE_CORPUS)
        counts = count_contexts(corpus, 2)
        text = counts.dumps()
        self.assertEqual(text, count_contexts(parse_corpus(EXAMPLE_CORPUS), 2).dumps())
        self.assertTrue(text.endswith("\n"))
        loaded = CountTable.loads(text)
        self.assertEqual(counts, loaded)
        self.assertEqual(counts.alphabet, loaded.alphabet)
        self.assertEqual(text, loaded.dumps())
        self.assertRaises(CorpusError, CountTable.loads, "{not json")
        self.assertRaises(CorpusError, CountTable.loads, '{"K": 2}')
        self.assertRaises(CorpusError, CountTable.loads,
                          '{"K": 0, "alphabet": [], "counts": []}')

if __name__ == "__main__":
    unittest.main(verbosity=2)
