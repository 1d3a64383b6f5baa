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
This module builds the sparse context graph of a variable-order model.

States are the stored contexts of a :class:`.CountTable` of length at most
the order cutoff k (the empty context is the root). Emitting symbol y from
state s moves to :func:`canon` (s, y), the longest stored suffix of s·y, so
the graph is deterministic and no state outside the table is ever created.
Edge weights come from a :class:`.SourcePolicy`: the longest-suffix MLE row,
an interpolated (smoothed) row, or the row of a virtually augmented table.
"""

import logging
from fractions import Fraction

from .definitions import NORMALIZATION_TOLERANCE
from .errors import GraphError

__all__ = ["canon", "predict_longest_suffix", "witten_bell",
           "witten_bell_ml", "constant_lambda", "interpolated_row",
           "SourcePolicy", "ContextGraph", "build_context_graph",
           "first_order_project", "dense_lift_size"]

logger = logging.getLogger(__name__)

def canon(counts, cutoff, context, symbol):
    """Return the longest suffix of *context* + (*symbol*,) stored in *counts*.

    Only suffixes of length at most *cutoff* are considered. The root ``()``
    is always a valid answer, so the function is total.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    word = tuple(context) + (symbol,)
    for length in range(min(len(word), cutoff), 0, -1):
        candidate = word[-length:]
        if candidate in counts:
            return candidate
    return ()

def _longest_stored(counts, cutoff, history):
    history = tuple(history)
    for length in range(min(len(history), cutoff), -1, -1):
        context = history[len(history) - length:]
        if counts.row(context):
            return context
    return None

def predict_longest_suffix(counts, cutoff, history, exact=False):
    """Return ``(order, distribution)`` for the next symbol after *history*.

    The longest suffix of *history* (at most *cutoff* symbols, down to the
    root) with a nonempty row is used, and its normalized counts are
    returned. With *exact*, probabilities are :class:`~fractions.Fraction`\\ s.

    Raises :exc:`.GraphError` when even the root row is empty.
    """
    context = _longest_stored(counts, cutoff, history)
    if context is None:
        raise GraphError("no context of {} has any continuation".format(
            list(history)))
    return len(context), _mle_row(counts.row(context), exact)

def _mle_row(row, exact):
    total = sum(row.values())
    if exact:
        return {y: Fraction(n, total) for y, n in row.items()}
    return {y: n / total for y, n in row.items()}


def witten_bell(total, distinct):
    """Default interpolation weight: n+(s) / (n+(s) + N(s))."""
    return Fraction(distinct, distinct + total)

def witten_bell_ml(total, distinct):
    """Classic Witten-Bell weight on the ML estimate: N(s) / (N(s) + n+(s))."""
    return Fraction(total, distinct + total)

def constant_lambda(value):
    """Return a lambda rule that always answers *value*."""
    value = Fraction(value)
    if not 0 <= value <= 1:
        raise ValueError("lambda must lie in [0, 1], got {}".format(value))
    def rule(total, distinct):
        return value
    return rule

_LAMBDA_RULES = {
    "witten-bell": witten_bell,
    "witten-bell-ml": witten_bell_ml,
}

def _lambda_rule(rule):
    if callable(rule):
        return rule
    if isinstance(rule, str):
        try:
            return _LAMBDA_RULES[rule]
        except KeyError:
            try:
                return constant_lambda(Fraction(rule))
            except ValueError:
                raise ValueError("unknown lambda rule {!r}".format(rule))
    return constant_lambda(rule)

def interpolated_row(counts, context, lambda_rule="witten-bell", discount=0,
                     exact=False):
    """Return the interpolated distribution P_int(. | *context*).

    The recursion starts from the root, whose row is the unigram row with
    *discount* subtracted from every count and the freed mass spread over the
    alphabet. Each longer stored suffix s of *context* then mixes its own
    discounted row with the row below it::

        P(y|s) = lam(s) * max(N(s,y) - D, 0) / N(s)
                 + (1 - lam(s) + lam(s) * D * n+(s) / N(s)) * P(y|suffix(s))

    Suffixes with no stored row are skipped. The result is renormalized.
    """
    rule = _lambda_rule(lambda_rule)
    num = Fraction if exact else float
    discount = Fraction(discount) if exact else float(discount)
    if discount < 0:
        raise ValueError("discount must be nonnegative")
    root = counts.row(())
    if not root:
        raise GraphError("cannot interpolate: the root row is empty")

    def mix(row, lam, lower):
        total = sum(row.values())
        freed = lam * discount * len(row) / total
        keep = 1 - lam + freed
        out = {y: keep * p for y, p in lower.items()}
        for y, n in row.items():
            share = lam * max(n - discount, 0) / total
            out[y] = out.get(y, 0) + share
        return out

    alphabet = sorted(set(counts.alphabet) | set(root))
    uniform = {y: num(1) / len(alphabet) for y in alphabet}
    dist = mix(root, num(1), uniform)
    context = tuple(context)
    for length in range(1, len(context) + 1):
        row = counts.row(context[-length:])
        if not row:
            continue
        lam = num(rule(sum(row.values()), len(row)))
        if not 0 <= lam <= 1:
            raise ValueError("lambda rule returned {} outside [0, 1]".format(lam))
        dist = mix(row, lam, dist)
    dist = {y: p for y, p in dist.items() if p > 0}
    norm = sum(dist.values())
    return {y: p / norm for y, p in dist.items()}


class SourcePolicy(object):
    """Describes how the outgoing row of a context state is weighted.

    Use the constructors :meth:`mle`, :meth:`interpolated` and
    :meth:`augmented` rather than calling the class directly.
    """

    KINDS = ("longest_suffix_mle", "interpolated", "augmented")

    def __init__(self, kind, lambda_rule="witten-bell", discount=0,
                 group=None, inner=None):
        if kind not in self.KINDS:
            raise ValueError("unknown source policy {!r}".format(kind))
        if kind == "augmented":
            if group is None:
                raise ValueError("the augmented policy needs a transform group")
            if inner is None:
                inner = SourcePolicy.mle()
            if inner.kind == "augmented":
                raise ValueError("augmented policies cannot be nested")
        if discount < 0:
            raise ValueError("discount must be nonnegative")
        self._kind = kind
        self._lambda_rule = lambda_rule
        self._discount = discount
        self._group = group
        self._inner = inner

    def __repr__(self):
        if self._kind == "interpolated":
            return "SourcePolicy.interpolated({!r}, {!r})".format(
                self._lambda_rule, self._discount)
        if self._kind == "augmented":
            return "SourcePolicy.augmented({!r}, {!r})".format(
                self._group, self._inner)
        return "SourcePolicy.mle()"

    @classmethod
    def mle(cls):
        """The longest-suffix maximum-likelihood policy."""
        return cls("longest_suffix_mle")

    @classmethod
    def interpolated(cls, lambda_rule="witten-bell", discount=0):
        """Interpolated smoothing; see :func:`interpolated_row`."""
        _lambda_rule(lambda_rule)
        return cls("interpolated", lambda_rule=lambda_rule, discount=discount)

    @classmethod
    def augmented(cls, group, inner=None):
        """Rows from the virtual augmentation of the counts by *group*."""
        return cls("augmented", group=group, inner=inner)

    @property
    def kind(self):
        return self._kind

    @property
    def group(self):
        return self._group

    @property
    def inner(self):
        return self._inner

    def row(self, counts, context, exact=False):
        """Return the outgoing distribution of *context* under this policy."""
        if self._kind == "longest_suffix_mle":
            row = counts.row(context)
            return _mle_row(row, exact) if row else {}
        if self._kind == "interpolated":
            return interpolated_row(counts, context, self._lambda_rule,
                                    self._discount, exact)
        raise GraphError("augmented rows need a virtual count table")


class ContextGraph(object):
    """A sparse, deterministic context graph with weighted edges.

    Outgoing edges of a state are computed on first use and memoized, so a
    graph built with ``lazy=True`` only ever touches the states an inference
    run reaches. Edges are ``(symbol, probability, next_state)`` tuples in
    ascending symbol order.
    """

    def __init__(self, counts, cutoff, policy=None, exact=False):
        if cutoff < 1:
            raise ValueError("cutoff must be at least 1")
        if cutoff > counts.max_order:
            raise ValueError("cutoff {} exceeds the table order {}".format(
                cutoff, counts.max_order))
        self._counts = counts
        self._cutoff = cutoff
        self._policy = policy or SourcePolicy.mle()
        self._exact = exact
        self._edges = {}

    def __repr__(self):
        return "ContextGraph(cutoff={}, policy={!r}, materialized={})".format(
            self._cutoff, self._policy, len(self._edges))

    def __contains__(self, state):
        state = tuple(state)
        return (len(state) <= self._cutoff and state in self._counts and
                (bool(state) or bool(self._counts.row(()))))

    @property
    def counts(self):
        return self._counts

    @property
    def cutoff(self):
        """The maximum context length of this graph."""
        return self._cutoff

    @property
    def policy(self):
        return self._policy

    @property
    def exact(self):
        """Whether edge weights are exact fractions."""
        return self._exact

    @property
    def root(self):
        return ()

    @property
    def materialized_state_count(self):
        """How many states have had their outgoing edges computed."""
        return len(self._edges)

    def canon(self, state, symbol):
        """Return the state reached from *state* by emitting *symbol*."""
        return canon(self._counts, self._cutoff, state, symbol)

    def start_state(self, prefix=()):
        """Return the state for a history ending in *prefix*."""
        context = _longest_stored(self._counts, self._cutoff, prefix)
        if context is None:
            raise GraphError("the model is empty")
        return context

    def edges(self, state):
        """Return the outgoing ``(symbol, probability, next)`` edges of *state*."""
        state = tuple(state)
        try:
            return self._edges[state]
        except KeyError:
            pass
        if state not in self:
            raise GraphError("{} is not a state of this graph".format(list(state)))
        row = self._policy.row(self._counts, state, self._exact)
        row = {y: p for y, p in row.items() if p > 0}
        if row:
            total = sum(row.values())
            if abs(total - 1) > NORMALIZATION_TOLERANCE:
                raise GraphError("row of {} sums to {!r}".format(list(state), total))
        edges = tuple((y, row[y], self.canon(state, y)) for y in sorted(row))
        self._edges[state] = edges
        return edges

    def states(self):
        """Return every state of the graph in canonical order."""
        return [c for c in self._counts.contexts(self._cutoff) if c in self]

    def materialize(self):
        """Compute the edges of every state; returns this graph."""
        for state in self.states():
            self.edges(state)
        return self

    def state_count(self):
        return len(self.states())

    def edge_count(self):
        """Return the number of edges of the fully materialized graph."""
        return sum(len(self.edges(state)) for state in self.states())

    def edge_table(self):
        """Return ``{state: edges}`` for the whole graph."""
        return {state: self.edges(state) for state in self.states()}

    def sequence_probability(self, sequence, start=()):
        """Return the probability of emitting *sequence* from state *start*."""
        state = tuple(start)
        prob = Fraction(1) if self._exact else 1.0
        for symbol in sequence:
            for y, p, nxt in self.edges(state):
                if y == symbol:
                    prob *= p
                    state = nxt
                    break
            else:
                return prob * 0
        return prob

    def dump(self):
        """Return the canonical text listing of every edge."""
        lines = []
        for state in self.states():
            for y, p, nxt in self.edges(state):
                lines.append("{} -> {} : {} @ {:.17g}".format(
                    _fmt(state), y, _fmt(nxt), float(p)))
        return "\n".join(lines) + "\n"


def _fmt(state):
    return "(" + ",".join(str(y) for y in state) + ")"

def build_context_graph(counts, cutoff, policy=None, exact=False, lazy=False):
    """Build the :class:`.ContextGraph` of *counts* at order *cutoff*.

    With the augmented *policy*, the counts are wrapped in a
    :class:`.VirtualCountTable` and the inner policy weights its rows. Unless
    *lazy* is true, every state is materialized (and every row checked)
    before returning.
    """
    policy = policy or SourcePolicy.mle()
    if policy.kind == "augmented":
        from .augmentation import VirtualCountTable
        if not isinstance(counts, VirtualCountTable):
            counts = VirtualCountTable(counts, policy.group)
        policy = policy.inner
    graph = ContextGraph(counts, cutoff, policy, exact)
    if not lazy:
        graph.materialize()
        logger.debug("[graph] k=%d: %d states, %d edges", cutoff,
                     graph.materialized_state_count, graph.edge_count())
    return graph

def first_order_project(counts, exact=False):
    """Return the order-1 MLE graph, which merges all histories ending in y."""
    return build_context_graph(counts, 1, SourcePolicy.mle(), exact)

def dense_lift_size(alphabet, order):
    """Return |V|^K, the size of a dense order-K state lift."""
    return len(alphabet) ** order
