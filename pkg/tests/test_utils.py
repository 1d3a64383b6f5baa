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

import io
import unittest

import numpy as np

from contextbp.utils import make_rng, parse_symbols, rng_metadata, suffix

class TestUtils(unittest.TestCase):
    """Tests for the utils module, which provides parse_symbols()."""

    def test_parse_symbols_valid(self):
        """tests for valid input to utils.parse_symbols()"""
        tests = [
            ("0 1", (0, 1)),
            ("  3\t4\n5 ", (3, 4, 5)),
            (b"7 8", (7, 8)),
            (5, (5,)),
            (np.int64(6), (6,)),
            (None, ()),
            ("", ()),
            ([1, "2", np.int32(3)], (1, 2, 3)),
            ((4, 5), (4, 5)),
            (io.StringIO("9 10"), (9, 10)),
        ]
        for test, valid in tests:
            self.assertEqual(valid, parse_symbols(test))

    def test_parse_symbols_invalid(self):
        """tests for invalid input to utils.parse_symbols()"""
        self.assertRaises(ValueError, parse_symbols, "0 x")
        self.assertRaises(ValueError, parse_symbols, "-1")
        self.assertRaises(ValueError, parse_symbols, [1, -2])
        self.assertRaises(ValueError, parse_symbols, (1, -2))
        self.assertRaises(ValueError, parse_symbols, (-1,))
        self.assertRaises(ValueError, parse_symbols, Ellipsis)
        self.assertRaises(ValueError, parse_symbols, [object()])
        self.assertRaises(ValueError, parse_symbols, [True])
        self.assertRaises(ValueError, parse_symbols, 1.5)

    def test_make_rng(self):
        """test that generators are seeded and passed through"""
        first = make_rng(3)
        self.assertIs(first, make_rng(first))
        self.assertEqual(make_rng(3).random(), make_rng(3).random())
        self.assertIsInstance(make_rng(None), np.random.Generator)
        self.assertEqual({"seed": 3, "rng": "numpy.PCG64"}, rng_metadata(3))

    def test_suffix(self):
        """test taking the last items of a sequence"""
        self.assertEqual((2, 3), suffix([1, 2, 3], 2))
        self.assertEqual((1, 2, 3), suffix((1, 2, 3), 5))
        self.assertEqual((), suffix((1, 2, 3), 0))

if __name__ == "__main__":
    unittest.main(verbosity=2)
