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
This module parses integer-symbol corpora and builds the continuation count
table N(c, y) used by every model in the package.

The corpus text format is one sequence per line: an optional multiplicity
written ``N*`` followed by whitespace-separated nonnegative integers.  Lines
starting with ``#`` and blank lines are ignored::

    # ten copies of the first phrase
    10* 0 1 2 4
    1* 0 1 3 4
    5
"""

import json
import logging
from collections import defaultdict
from types import MappingProxyType

from .errors import CorpusError

__all__ = ["Corpus", "CountTable", "parse_corpus", "count_contexts"]

logger = logging.getLogger(__name__)

_EMPTY_ROW = MappingProxyType({})

class Corpus(object):
    """A multiset of nonempty symbol sequences.

    *sequences* is a list of ``(multiplicity, symbols)`` pairs. The alphabet
    defaults to the set of symbols seen; a larger one may be declared (for
    example, the closure alphabet of an augmented corpus).
    """

    def __init__(self, sequences, alphabet=None):
        seqs = []
        seen = set()
        for mult, symbols in sequences:
            symbols = tuple(symbols)
            if mult < 1:
                raise CorpusError("multiplicity must be positive, got {}".format(mult))
            if not symbols:
                raise CorpusError("sequences must be nonempty")
            seen.update(symbols)
            seqs.append((int(mult), symbols))
        if alphabet is None:
            alphabet = seen
        elif not seen <= set(alphabet):
            missing = sorted(seen - set(alphabet))
            raise CorpusError("symbols {} are not in the alphabet".format(missing))
        self._sequences = tuple(seqs)
        self._alphabet = frozenset(alphabet)

    def __repr__(self):
        return "Corpus(sequences={}, alphabet_size={})".format(
            len(self._sequences), len(self._alphabet))

    def __eq__(self, other):
        if not isinstance(other, Corpus):
            return NotImplemented
        return (self._sequences == other._sequences and
                self._alphabet == other._alphabet)

    def __ne__(self, other):
        return not self == other

    def __iter__(self):
        return iter(self._sequences)

    def __len__(self):
        return len(self._sequences)

    @property
    def sequences(self):
        """The ``(multiplicity, symbols)`` pairs, in input order."""
        return self._sequences

    @property
    def alphabet(self):
        """The frozen set of symbols of this corpus."""
        return self._alphabet

    @property
    def token_count(self):
        """The multiplicity-weighted number of symbols (stored events)."""
        return sum(mult * len(symbols) for mult, symbols in self._sequences)

    def expanded(self):
        """Yield every sequence once per unit of multiplicity."""
        for mult, symbols in self._sequences:
            for _ in range(mult):
                yield symbols

    def to_text(self):
        """Return the corpus in the text format understood by :func:`parse_corpus`."""
        lines = []
        for mult, symbols in self._sequences:
            body = " ".join(str(y) for y in symbols)
            lines.append(body if mult == 1 else "{}* {}".format(mult, body))
        return "\n".join(lines) + "\n"


class CountTable(object):
    """Continuation counts for every stored context of length 0..*max_order*.

    The table is suffix-closed: whenever a context is stored, so is each of
    its suffixes, down to the empty context (the root). Rows are returned as
    read-only mappings; a context that is not stored has an empty row.
    """

    def __init__(self, max_order, counts, alphabet=None):
        if max_order < 1:
            raise ValueError("max_order must be at least 1")
        self._max_order = max_order
        self._counts = {}
        for context, row in counts.items():
            context = tuple(context)
            if len(context) > max_order:
                raise CorpusError("context {} is longer than K={}".format(
                    context, max_order))
            clean = {y: n for y, n in row.items() if n > 0}
            if clean or not context:
                self._counts[context] = clean
        self._counts.setdefault((), {})
        if alphabet is None:
            alphabet = set()
            for context, row in self._counts.items():
                alphabet.update(context)
                alphabet.update(row)
        self._alphabet = frozenset(alphabet)

    def __repr__(self):
        return "CountTable(K={}, contexts={})".format(self._max_order,
                                                      len(self._counts))

    def __contains__(self, context):
        return tuple(context) in self._counts

    def __len__(self):
        return len(self._counts)

    def __eq__(self, other):
        if not isinstance(other, CountTable):
            return NotImplemented
        return (self._max_order == other._max_order and
                self._counts == other._counts)

    def __ne__(self, other):
        return not self == other

    @property
    def max_order(self):
        """The maximum stored context length K."""
        return self._max_order

    @property
    def alphabet(self):
        """The frozen set of symbols known to the model."""
        return self._alphabet

    def row(self, context):
        """Return the read-only continuation row N(*context*, .)."""
        row = self._counts.get(tuple(context))
        return MappingProxyType(row) if row is not None else _EMPTY_ROW

    def total(self, context):
        """Return the sum of the continuation counts of *context*."""
        return sum(self.row(context).values())

    def distinct(self, context):
        """Return the number of distinct continuations of *context*."""
        return len(self.row(context))

    def contexts(self, max_length=None):
        """Return the stored contexts in canonical (lexicographic) order."""
        if max_length is None:
            return sorted(self._counts)
        return sorted(c for c in self._counts if len(c) <= max_length)

    def event_count(self):
        """Return the number of counted events (the root row total)."""
        return self.total(())

    def check_suffix_closure(self):
        """Raise :exc:`.CorpusError` if a stored context lacks a suffix."""
        for context, row in self._counts.items():
            if not context:
                continue
            parent = context[1:]
            if parent not in self._counts:
                raise CorpusError("context {} stored without its suffix {}".format(
                    list(context), list(parent)))
            parent_row = self._counts[parent]
            if sum(parent_row.values()) < sum(row.values()):
                raise CorpusError("suffix {} has less mass than {}".format(
                    list(parent), list(context)))

    def to_document(self):
        """Return the canonical JSON-compatible document for this table."""
        entries = []
        for context in self.contexts():
            row = self._counts[context]
            for y in sorted(row):
                entries.append([list(context), y, row[y]])
        return {"K": self._max_order, "alphabet": sorted(self._alphabet),
                "counts": entries}

    def dumps(self):
        """Serialize the table; equal tables give byte-identical output."""
        return json.dumps(self.to_document(), separators=(",", ":")) + "\n"

    @classmethod
    def from_document(cls, doc):
        """Build a table from a document written by :meth:`to_document`."""
        try:
            max_order = int(doc["K"])
            alphabet = [int(y) for y in doc["alphabet"]]
            counts = defaultdict(dict)
            for context, y, n in doc["counts"]:
                context = tuple(int(x) for x in context)
                counts[context][int(y)] = int(n)
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusError("malformed model document: {}".format(exc))
        if max_order < 1:
            raise CorpusError("model K must be at least 1")
        table = cls(max_order, counts, alphabet)
        table.check_suffix_closure()
        return table

    @classmethod
    def loads(cls, text):
        """Inverse of :meth:`dumps`."""
        try:
            doc = json.loads(text)
        except ValueError as exc:
            raise CorpusError("model is not valid JSON: {}".format(exc))
        return cls.from_document(doc)


def _lines(value):
    if isinstance(value, bytes):
        value = value.decode("utf8")
    if isinstance(value, str):
        return value.splitlines()
    if hasattr(value, "read"):
        return _lines(value.read())
    return list(value)

def _parse_line(line, lineno):
    tokens = line.split()
    mult = 1
    head, star, rest = tokens[0].partition("*")
    if star:
        try:
            mult = int(head)
        except ValueError:
            raise CorpusError("bad multiplicity {!r}".format(head), lineno)
        if mult <= 0:
            raise CorpusError("multiplicity must be positive, got {}".format(mult),
                              lineno)
        tokens = ([rest] if rest else []) + tokens[1:]
    if not tokens:
        raise CorpusError("multiplicity without symbols", lineno)
    symbols = []
    for token in tokens:
        try:
            symbol = int(token)
        except ValueError:
            raise CorpusError("bad symbol {!r}".format(token), lineno)
        if symbol < 0:
            raise CorpusError("symbols must be nonnegative, got {}".format(symbol),
                              lineno)
        symbols.append(symbol)
    return mult, tuple(symbols)

def parse_corpus(value, declared_order=None):
    """Return a :class:`.Corpus` parsed from *value*.

    *value* may be a string, bytes, a file object or an iterable of lines.
    If given, *declared_order* is the maximum order the corpus will be
    counted with; it is only checked for being positive here.

    Raises :exc:`.CorpusError` (with the line number) on a malformed integer
    or multiplicity, and when the corpus holds no sequence at all.
    """
    if declared_order is not None and declared_order < 1:
        raise ValueError("K must be at least 1, got {}".format(declared_order))
    sequences = []
    for lineno, line in enumerate(_lines(value), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        sequences.append(_parse_line(line, lineno))
    if not sequences:
        raise CorpusError("corpus is empty")
    corpus = Corpus(sequences)
    logger.debug("[corpus] parsed %d sequences, %d events, %d symbols",
                 len(corpus), corpus.token_count, len(corpus.alphabet))
    return corpus

def count_contexts(corpus, max_order, alphabet=None):
    """Return the :class:`.CountTable` of *corpus* for contexts up to *max_order*.

    At every position t every context length 0..min(t, K) is counted, which
    makes the table suffix-closed by construction.
    """
    if max_order < 1:
        raise ValueError("K must be at least 1, got {}".format(max_order))
    counts = defaultdict(lambda: defaultdict(int))
    for mult, symbols in corpus:
        for t, y in enumerate(symbols):
            for k in range(min(t, max_order) + 1):
                counts[symbols[t - k:t]][y] += mult
    if alphabet is None:
        alphabet = corpus.alphabet
    table = CountTable(max_order, counts, alphabet)
    logger.debug("[corpus] counted %d contexts at K=%d", len(table), max_order)
    return table
