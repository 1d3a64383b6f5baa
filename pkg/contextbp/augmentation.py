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
This module implements virtual reversible augmentation.

A :class:`.TransformGroup` is a finite set of invertible symbol maps applied
symbolwise to contexts (for example the pitch transpositions). Instead of
storing a transformed copy of the corpus per map, a
:class:`.VirtualCountTable` answers each row by inverse lookup::

    N_G(s, y) = sum over g of N(g^-1 s, g^-1 y)

Rows are computed on first use and cached. :func:`materialize` builds the
explicit augmented corpus, and :func:`check_equivalence` runs both pipelines
side by side.
"""

import logging
import math
import time
from collections import defaultdict
from types import MappingProxyType

from .constraints import PositionalMask, accept_all
from .context_model import SourcePolicy, build_context_graph
from .corpus import Corpus, count_contexts
from .definitions import DEFAULT_STATE_BUDGET
from .errors import TransformError
from .inference import backward_pass, initial_state, partition_function, product_stats
from .records import EquivalenceReport

__all__ = ["Transform", "TransformGroup", "VirtualCountTable",
           "close_alphabet", "virtual_row", "materialize", "check_equivalence"]

logger = logging.getLogger(__name__)

class Transform(object):
    """An invertible map on symbols.

    Build one with :meth:`shift` (y -> y + amount) or :meth:`explicit`
    (listed pairs; every unlisted symbol is a fixed point, so the empty map
    is the identity).
    """

    def __init__(self, amount=0, pairs=None):
        self._amount = amount
        self._forward = None
        self._backward = None
        if pairs is not None:
            forward = {}
            for src, dst in pairs:
                src, dst = int(src), int(dst)
                if forward.get(src, dst) != dst:
                    raise TransformError("{} is mapped twice".format(src))
                forward[src] = dst
            backward = {}
            for src, dst in forward.items():
                if dst in backward:
                    raise TransformError("{} and {} both map to {}".format(
                        backward[dst], src, dst))
                backward[dst] = src
            self._forward = forward
            self._backward = backward

    def __repr__(self):
        if self._forward is None:
            return "Transform.shift({})".format(self._amount)
        return "Transform.explicit({})".format(sorted(self._forward.items()))

    def __eq__(self, other):
        if not isinstance(other, Transform):
            return NotImplemented
        return (self._amount == other._amount and
                self._forward == other._forward)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        pairs = tuple(sorted(self._forward.items())) if self._forward else None
        return hash((self._amount, pairs))

    @classmethod
    def shift(cls, amount):
        return cls(amount=int(amount))

    @classmethod
    def explicit(cls, pairs):
        return cls(pairs=pairs)

    @property
    def is_identity(self):
        if self._forward is None:
            return self._amount == 0
        return all(src == dst for src, dst in self._forward.items())

    def apply(self, symbol):
        if self._forward is None:
            return symbol + self._amount
        return self._forward.get(symbol, symbol)

    def invert(self, symbol):
        if self._forward is None:
            return symbol - self._amount
        if symbol in self._backward:
            return self._backward[symbol]
        return symbol

    def apply_all(self, sequence):
        return tuple(self.apply(y) for y in sequence)

    def invert_all(self, sequence):
        return tuple(self.invert(y) for y in sequence)

    @property
    def is_shift(self):
        return self._forward is None

    def pairs(self):
        """Return the listed ``[from, to]`` pairs (empty for a shift)."""
        return [list(pair) for pair in sorted((self._forward or {}).items())]


class TransformGroup(object):
    """A finite list of transforms that contains the identity."""

    def __init__(self, transforms):
        unique = []
        for transform in transforms:
            if transform not in unique:
                unique.append(transform)
        if not any(transform.is_identity for transform in unique):
            raise TransformError("a transform group must contain the identity")
        self._transforms = tuple(unique)

    def __repr__(self):
        return "TransformGroup({})".format(list(self._transforms))

    def __iter__(self):
        return iter(self._transforms)

    def __len__(self):
        return len(self._transforms)

    @classmethod
    def identity(cls):
        return cls([Transform.shift(0)])

    @classmethod
    def shifts(cls, amounts):
        return cls([Transform.shift(a) for a in amounts])

    @classmethod
    def from_document(cls, doc):
        """Build a group from ``{"kind": "shift", "amounts": [..]}`` or
        ``{"kind": "explicit", "maps": [[[from, to], ..], ..]}``."""
        try:
            kind = doc["kind"]
            if kind == "shift":
                return cls.shifts(int(a) for a in doc["amounts"])
            if kind == "explicit":
                return cls([Transform.explicit(pairs) for pairs in doc["maps"]])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, TransformError):
                raise
            raise TransformError("malformed group document: {}".format(exc))
        raise TransformError("unknown group kind {!r}".format(kind))

    def to_document(self):
        if all(t.is_shift for t in self._transforms):
            return {"kind": "shift",
                    "amounts": [t.apply(0) for t in self._transforms]}
        if any(t.is_shift and not t.is_identity for t in self._transforms):
            raise TransformError("cannot mix shifts and explicit maps")
        return {"kind": "explicit",
                "maps": [t.pairs() for t in self._transforms]}


def close_alphabet(source, group):
    """Return the closure of an alphabet under *group*.

    *source* is a :class:`.Corpus`, a count table or a set of symbols. Every
    transform must map the base alphabet onto nonnegative symbols, and be
    injective on the closure and invert back exactly there; otherwise
    :exc:`.TransformError` is raised.
    """
    alphabet = sorted(getattr(source, "alphabet", source))
    closure = set()
    for transform in group:
        for y in alphabet:
            image = transform.apply(y)
            if image < 0:
                raise TransformError("{!r} maps {} to negative {}".format(
                    transform, y, image))
            closure.add(image)
    for transform in group:
        seen = {}
        for y in sorted(closure):
            image = transform.apply(y)
            if image in seen:
                raise TransformError(
                    "{!r} maps {} and {} to {} on the closure".format(
                        transform, seen[image], y, image))
            seen[image] = y
            if transform.invert(image) != y:
                raise TransformError("{!r} does not invert at {}".format(
                    transform, y))
    return frozenset(closure)


class VirtualCountTable(object):
    """The count table of the augmented corpus, computed by inverse lookup.

    Behaves like a :class:`.CountTable` (``row``, ``in``, ``contexts``) but
    stores only the base table and a memo of the rows asked for. Concurrent
    requests for one row may compute it twice; the first stored copy wins.
    """

    def __init__(self, base, group):
        self._base = base
        self._group = group
        self._alphabet = close_alphabet(base, group)
        self._rows = {}

    def __repr__(self):
        return "VirtualCountTable(K={}, group_size={}, rows_computed={})".format(
            self.max_order, len(self._group), len(self._rows))

    def __contains__(self, context):
        context = tuple(context)
        if not context:
            return True
        return any(g.invert_all(context) in self._base for g in self._group)

    @property
    def base(self):
        return self._base

    @property
    def group(self):
        return self._group

    @property
    def max_order(self):
        return self._base.max_order

    @property
    def alphabet(self):
        return self._alphabet

    @property
    def rows_computed(self):
        """How many distinct rows have been computed so far."""
        return len(self._rows)

    def row(self, context):
        """Return the read-only augmented row N_G(*context*, .)."""
        context = tuple(context)
        try:
            return self._rows[context]
        except KeyError:
            pass
        out = defaultdict(int)
        for g in self._group:
            for y, n in self._base.row(g.invert_all(context)).items():
                out[g.apply(y)] += n
        return self._rows.setdefault(context, MappingProxyType(dict(out)))

    def total(self, context):
        return sum(self.row(context).values())

    def distinct(self, context):
        return len(self.row(context))

    def contexts(self, max_length=None):
        out = set()
        for context in self._base.contexts(max_length):
            for g in self._group:
                out.add(g.apply_all(context))
        return sorted(out)

    def event_count(self):
        """Events the materialized table would count."""
        return self.total(())

    def stored_events(self):
        """Events actually stored (the base table's)."""
        return self._base.event_count()


def virtual_row(vtable, context):
    """Return the augmented row of *context* as a plain dict."""
    return dict(vtable.row(context))

def materialize(corpus, group):
    """Return the explicit augmented corpus: every g(sequence), for every g."""
    closure = close_alphabet(corpus, group)
    sequences = []
    for g in group:
        for mult, symbols in corpus:
            sequences.append((mult, g.apply_all(symbols)))
    return Corpus(sequences, closure)

def _timed_pass(graph, acceptor, mask, prefix):
    began = time.perf_counter()
    start = initial_state(graph, acceptor, prefix)
    table = backward_pass(graph, acceptor, mask, start=start)
    value, scale = partition_function(table, start)
    return table, start, value, scale, time.perf_counter() - began

def _start_orders(stack, policy):
    from .orderstack import step_distribution
    states = stack.context_states(stack.prefix)
    step, _ = step_distribution(stack, policy, 0, states, stack.start_q())
    orders = defaultdict(float)
    for (_, order), p in step.items():
        orders[order] += p
    return orders

def check_equivalence(corpus, max_order, group, acceptor=None, mask=None,
                      horizon=None, prefix=(), order_policy=None,
                      source_policy=None, tolerance=1e-12,
                      budget=DEFAULT_STATE_BUDGET):
    """Run the virtual and the materialized pipelines and compare them.

    The returned :class:`.EquivalenceReport` holds the largest row difference
    (with the first differing row), the partition-function, success-mass and
    start-order differences, edge mismatches, stored-event counts, and the
    states touched by the lazy virtual run versus the full materialized
    graph. ``passed`` is false on any difference.
    """
    from .orderstack import OrderPolicy, prepare_stack, success_mass

    inner = source_policy or SourcePolicy.mle()
    order_policy = order_policy or OrderPolicy.longest_feasible()
    prefix = tuple(prefix)
    base = count_contexts(corpus, max_order)
    augmented = materialize(corpus, group)
    closure = augmented.alphabet
    if acceptor is None:
        acceptor = accept_all(closure)
    if mask is None:
        if horizon is None:
            raise ValueError("either a mask or a horizon is required")
        mask = PositionalMask(horizon)

    lazy_table = VirtualCountTable(base, group)
    lazy_graph = build_context_graph(lazy_table, max_order, inner, lazy=True)
    _, lazy_start, z_virtual, scale_v, seconds_v = _timed_pass(
        lazy_graph, acceptor, mask, prefix)
    touched = lazy_graph.materialized_state_count
    rows_computed = lazy_table.rows_computed
    reach = product_stats(lazy_graph, acceptor, mask, start=lazy_start)

    full_table = count_contexts(augmented, max_order, closure)
    full_graph = build_context_graph(full_table, max_order, inner)
    _, _, z_materialized, scale_m, seconds_m = _timed_pass(
        full_graph, acceptor, mask, prefix)

    check_table = VirtualCountTable(base, group)
    row_difference = 0
    first_mismatch = None
    virtual_contexts = check_table.contexts()
    for context in sorted(set(virtual_contexts) | set(full_table.contexts())):
        vrow = check_table.row(context)
        mrow = full_table.row(context)
        diff = max([abs(vrow.get(y, 0) - mrow.get(y, 0))
                    for y in set(vrow) | set(mrow)] or [0])
        if diff > row_difference:
            row_difference = diff
        if diff and first_mismatch is None:
            first_mismatch = {"context": list(context), "virtual": dict(vrow),
                              "materialized": dict(mrow)}

    virtual_graph = build_context_graph(check_table, max_order, inner)
    edge_mismatches = 0
    virtual_edges = virtual_graph.edge_table()
    full_edges = full_graph.edge_table()
    for state in set(virtual_edges) | set(full_edges):
        if virtual_edges.get(state) != full_edges.get(state):
            edge_mismatches += 1

    z_difference = abs(z_virtual * math.exp(scale_v) -
                       z_materialized * math.exp(scale_m))

    stack_v = prepare_stack(VirtualCountTable(base, group), max_order, inner,
                            acceptor, mask, prefix=prefix)
    stack_m = prepare_stack(full_table, max_order, inner, acceptor, mask,
                            prefix=prefix)
    mass_v = success_mass(stack_v, order_policy, budget=budget).mass
    mass_m = success_mass(stack_m, order_policy, budget=budget).mass
    orders_v = _start_orders(stack_v, order_policy)
    orders_m = _start_orders(stack_m, order_policy)
    order_difference = max([abs(orders_v.get(k, 0) - orders_m.get(k, 0))
                            for k in set(orders_v) | set(orders_m)] or [0.0])

    report = EquivalenceReport(
        group_size=len(group),
        stored_events_virtual=corpus.token_count,
        stored_events_materialized=augmented.token_count,
        contexts_virtual=len(virtual_contexts),
        contexts_materialized=len(full_table),
        row_difference=row_difference, first_mismatch=first_mismatch,
        edge_mismatches=edge_mismatches,
        z_virtual=float(z_virtual), z_materialized=float(z_materialized),
        z_difference=float(z_difference),
        mass_virtual=float(mass_v), mass_materialized=float(mass_m),
        mass_difference=float(abs(mass_v - mass_m)),
        start_order_difference=float(order_difference),
        full_graph_states=full_graph.state_count(),
        lazy_touched_states=touched, lazy_rows_computed=rows_computed,
        product_edges=reach.reach_edges, product_states=reach.reach_states,
        bp_seconds_virtual=seconds_v, bp_seconds_materialized=seconds_m)
    report.passed = (row_difference == 0 and edge_mismatches == 0 and
                     report.z_difference <= tolerance and
                     report.mass_difference <= tolerance and
                     report.start_order_difference <= tolerance)
    logger.debug("[augment] |G|=%d passed=%s touched=%d/%d", len(group),
                 report.passed, touched, report.full_graph_states)
    return report
