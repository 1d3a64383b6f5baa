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
This module contains the brute-force ground truth used to check the
inference code on tiny instances.

Sequence probabilities are computed by simulating the longest-suffix backoff
step by step with :class:`~fractions.Fraction` arithmetic, so every number
here is exact. Enumeration is refused above a configurable budget.
"""

import logging
from fractions import Fraction

from .constraints import (PositionalMask, accept_all, compile_forbidden,
                          validate_sequence)
from .context_model import predict_longest_suffix
from .corpus import Corpus, count_contexts
from .definitions import DEFAULT_ENUMERATION_BUDGET
from .errors import BudgetExceededError
from .records import Instance
from .utils import make_rng, suffix

__all__ = ["ExactDistribution", "sequence_probability", "total_mass",
           "enumerate_conditional", "tv_distance", "empirical_distribution",
           "random_instance"]

logger = logging.getLogger(__name__)

class ExactDistribution(object):
    """An exact conditional distribution and its normalizer.

    *entries* maps each accepted sequence to its conditional probability;
    *z* is the accepted mass before normalization.
    """

    def __init__(self, entries, z):
        self.entries = entries
        self.z = z

    def __repr__(self):
        return "ExactDistribution(z={}, support={})".format(self.z,
                                                            len(self.entries))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, sequence):
        return self.entries.get(tuple(sequence), Fraction(0))

    def support(self):
        return sorted(self.entries)

    def as_floats(self):
        return {seq: float(p) for seq, p in self.entries.items()}


def sequence_probability(counts, max_order, sequence, prefix=()):
    """Return P(*sequence* | *prefix*) under longest-suffix backoff, exactly."""
    history = tuple(prefix)
    prob = Fraction(1)
    for symbol in sequence:
        _, dist = predict_longest_suffix(counts, max_order, history, exact=True)
        prob *= dist.get(symbol, 0)
        if not prob:
            return prob
        history += (symbol,)
    return prob

def _walk(counts, max_order, prefix, horizon, budget):
    alphabet = sorted(counts.alphabet)
    required = len(alphabet) ** horizon
    if required > budget:
        raise BudgetExceededError("oracle enumeration", budget, required)
    cache = {}

    def predict(history):
        key = suffix(history, max_order)
        if key not in cache:
            cache[key] = predict_longest_suffix(counts, max_order, key,
                                                exact=True)[1]
        return cache[key]

    prefix = tuple(prefix)
    stack = [((), Fraction(1))]
    while stack:
        emitted, prob = stack.pop()
        if len(emitted) == horizon:
            yield emitted, prob
            continue
        dist = predict(prefix + emitted)
        for y in alphabet:
            p = dist.get(y)
            if p:
                stack.append((emitted + (y,), prob * p))

def total_mass(counts, max_order, horizon, prefix=(),
               budget=DEFAULT_ENUMERATION_BUDGET):
    """Return the sum of P(x) over every sequence of length *horizon*."""
    return sum((prob for _, prob in _walk(counts, max_order, prefix, horizon,
                                          budget)), Fraction(0))

def enumerate_conditional(counts, max_order, acceptor, mask, horizon=None,
                          prefix=(), budget=DEFAULT_ENUMERATION_BUDGET,
                          feed_prefix=False):
    """Return the :class:`.ExactDistribution` of the constrained problem.

    Every sequence of length *horizon* with nonzero probability is scored
    and kept when :func:`.validate_sequence` accepts it. Raises
    :exc:`.BudgetExceededError` when |V|^n exceeds *budget*.
    """
    if horizon is None:
        horizon = mask.horizon
    state = acceptor.run(prefix) if feed_prefix else None
    if feed_prefix and state is None:
        return ExactDistribution({}, Fraction(0))
    accepted = {}
    for sequence, prob in _walk(counts, max_order, prefix, horizon, budget):
        if validate_sequence(sequence, acceptor, mask, state):
            accepted[sequence] = prob
    z = sum(accepted.values(), Fraction(0))
    entries = {seq: p / z for seq, p in accepted.items()} if z else {}
    logger.debug("[oracle] Z=%s over %d accepted sequences", z, len(entries))
    return ExactDistribution(entries, z)

def tv_distance(p, q):
    """Return the total variation distance between two distributions."""
    if isinstance(p, ExactDistribution):
        p = p.entries
    if isinstance(q, ExactDistribution):
        q = q.entries
    total = 0
    for key in set(p) | set(q):
        total += abs(p.get(key, 0) - q.get(key, 0))
    return float(total) / 2

def empirical_distribution(samples):
    """Return the relative frequencies of *samples* (sequences)."""
    counts = {}
    size = 0
    for sample in samples:
        key = tuple(sample)
        counts[key] = counts.get(key, 0) + 1
        size += 1
    if not size:
        raise ValueError("cannot build an empirical distribution of nothing")
    return {key: n / size for key, n in counts.items()}

def random_instance(seed, max_alphabet=5, max_order=3, max_horizon=5):
    """Return a tiny random :class:`.Instance` for cross-checking.

    The instance has a random corpus over at most *max_alphabet* symbols, an
    order, a horizon, a prefix, and (at random) positional anchors and one or
    two forbidden substrings.
    """
    rng = make_rng(seed)
    size = int(rng.integers(2, max_alphabet + 1))
    sequences = []
    for _ in range(int(rng.integers(2, 6))):
        length = int(rng.integers(2, 7))
        symbols = tuple(int(y) for y in rng.integers(0, size, length))
        sequences.append((int(rng.integers(1, 4)), symbols))
    corpus = Corpus(sequences)
    order = int(rng.integers(1, max_order + 1))
    horizon = int(rng.integers(1, max_horizon + 1))
    alphabet = sorted(corpus.alphabet)
    prefix = tuple(int(rng.choice(alphabet))
                   for _ in range(int(rng.integers(0, 3))))
    masks = {}
    if rng.random() < 0.5:
        for _ in range(int(rng.integers(1, 3))):
            t = int(rng.integers(0, horizon))
            width = int(rng.integers(1, len(alphabet) + 1))
            allowed = set(int(y) for y in rng.choice(alphabet, width,
                                                     replace=False))
            masks[t] = masks.get(t, allowed) & allowed or allowed
    patterns = []
    if rng.random() < 0.6:
        for _ in range(int(rng.integers(1, 3))):
            length = int(rng.integers(1, 4))
            patterns.append(tuple(int(y) for y in rng.choice(alphabet, length)))
    acceptor = (compile_forbidden(patterns, alphabet) if patterns
                else accept_all(alphabet))
    return Instance(corpus=corpus, counts=count_contexts(corpus, order),
                    max_order=order, horizon=horizon, prefix=prefix,
                    mask=PositionalMask(horizon, masks), acceptor=acceptor,
                    patterns=patterns)
