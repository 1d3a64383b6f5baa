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

"""
`contextbp` samples exactly from variable-order backoff Markov models under
regular and positional constraints. Count a corpus into a suffix-closed
table, build the sparse context graph, compile the constraints into an
acceptor and masks, and run the backward pass over their product.
"""

import logging

__author__ = "The contextbp developers"
__copyright__ = "Copyright (C) 2026 The contextbp developers"
__license__ = "MIT License"
__version__ = "0.1.dev0"

from . import (augmentation, constraints, context_model, corpus, definitions,
               errors, inference, oracle, orderstack, records, utils)

parse = corpus.parse_corpus
train = corpus.count_contexts

logging.getLogger(__name__).addHandler(logging.NullHandler())
