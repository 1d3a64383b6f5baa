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
This module runs exact inference on the product of a :class:`.ContextGraph`
and an :class:`.Acceptor` under a :class:`.PositionalMask`.

Symbol x_t is emitted between layers t and t + 1 and is filtered by the mask
entry of position t. The backward message of product state (s, q) at layer t
is the probability that a walk from (s, q) emits an allowed continuation of
length n - t ending in an accepting state::

    beta_n(s, q) = 1 if q is accepting else 0
    beta_t(s, q) = sum of p * beta_{t+1}(canon(s, y), delta(q, y))
                   over edges (y, p) of s allowed at t with delta(q, y) defined

Only product states reachable from the start are materialized. Sampling
draws each step with weight p * beta_{t+1}; no forward table is needed.
"""

import logging
import math
from bisect import bisect_right
from fractions import Fraction

from .context_model import first_order_project, predict_longest_suffix
from .definitions import DEFAULT_EDGE_BUDGET, RESCALE_THRESHOLD
from .errors import (BudgetExceededError, GraphError, InfeasibleError,
                     InvariantError)
from .records import ProductStats, SampleResult, StepTrace
from .utils import make_rng

__all__ = ["BackwardTable", "initial_state", "backward_pass",
           "partition_function", "log_partition", "sample_sequence",
           "conditional_distribution", "product_stats", "forward_marginals",
           "first_order_hybrid"]

logger = logging.getLogger(__name__)

def initial_state(graph, acceptor, prefix=(), feed_prefix=False):
    """Return the start product state ``(context, q)`` for *prefix*.

    The context is the longest stored suffix of *prefix*. The acceptor starts
    in its start state unless *feed_prefix* is true, in which case it reads
    the prefix first; ``q`` is ``None`` when the acceptor rejects it.
    """
    context = graph.start_state(prefix)
    state = acceptor.run(prefix) if feed_prefix else acceptor.start
    return (context, state)

def _successors(graph, acceptor, mask, t, state):
    s, q = state
    out = []
    for y, p, nxt in graph.edges(s):
        if not mask.allows(t, y):
            continue
        r = acceptor.step(q, y)
        if r is not None:
            out.append((y, p, (nxt, r)))
    return out

def _forward_layers(graph, acceptor, mask, horizon, starts, known=None):
    layers = [set() for _ in range(horizon + 1)]
    edges = set()
    frontier = set(st for st in starts if st[1] is not None)
    if known is not None:
        frontier -= known[0]
    layers[0] = frontier
    for t in range(horizon):
        nxt = set()
        for state in layers[t]:
            for y, _, target in _successors(graph, acceptor, mask, t, state):
                edges.add((state, y))
                nxt.add(target)
        if known is not None:
            nxt -= known[t + 1]
        layers[t + 1] = nxt
    return layers, edges


class BackwardTable(object):
    """Backward messages over the lazily reached product.

    Call :meth:`prepare` with the start states of interest; it sweeps forward
    to find the reachable product states and then fills the layers from the
    horizon back to 0. Layers whose maximum falls below *threshold* are
    multiplied by a power of two; :meth:`log_scale` returns the accumulated
    factor, so ``value(t, st) * exp(log_scale(t))`` is the true message.
    States outside the prepared region are evaluated on demand with the same
    layer factors.

    With an exact graph (fraction weights) no rescaling is done and all
    messages are exact.
    """

    def __init__(self, graph, acceptor, mask, horizon=None, rescale=True,
                 threshold=RESCALE_THRESHOLD):
        if horizon is None:
            horizon = mask.horizon
        if horizon < 1:
            raise ValueError("horizon must be at least 1, got {}".format(horizon))
        if horizon != mask.horizon:
            raise ValueError("horizon {} differs from the mask horizon {}".format(
                horizon, mask.horizon))
        self._graph = graph
        self._acceptor = acceptor
        self._mask = mask
        self._horizon = horizon
        self._exact = graph.exact
        self._rescale = rescale and not graph.exact
        self._threshold = threshold
        self._values = [{} for _ in range(horizon + 1)]
        self._shifts = [None] * horizon + [0]
        self._candidates = {}
        self._reach_edges = set()
        self.edge_visits = 0
        self.rescale_events = 0

    def __repr__(self):
        return "BackwardTable(horizon={}, states={})".format(
            self._horizon, self.state_count)

    @property
    def graph(self):
        return self._graph

    @property
    def acceptor(self):
        return self._acceptor

    @property
    def mask(self):
        return self._mask

    @property
    def horizon(self):
        return self._horizon

    @property
    def exact(self):
        return self._exact

    @property
    def state_count(self):
        """The number of time-indexed product states holding a value."""
        return sum(len(layer) for layer in self._values)

    @property
    def reach_edges(self):
        """The distinct product edges found by :meth:`prepare` sweeps."""
        return len(self._reach_edges)

    def layer(self, t):
        """Return a copy of the stored messages of layer *t*."""
        return dict(self._values[t])

    def log_scale(self, t):
        """Return the natural log of the factor undoing layer *t*'s rescaling."""
        total = 0
        for shift in self._shifts[t:]:
            total += shift or 0
        return -total * math.log(2)

    def _terminal(self, state):
        one = Fraction(1) if self._exact else 1.0
        return one if self._acceptor.is_accepting(state[1]) else one * 0

    def _raw(self, t, state):
        succ = _successors(self._graph, self._acceptor, self._mask, t, state)
        below = self._values[t + 1]
        total = Fraction(0) if self._exact else 0.0
        for _, p, target in succ:
            total += p * below[target]
        self.edge_visits += len(succ)
        return total

    def _shifted(self, t, value):
        shift = self._shifts[t]
        if shift is None:
            self._shifts[t] = shift = 0
        return math.ldexp(value, shift) if shift else value

    def prepare(self, starts):
        """Fill the messages of every state reachable from *starts*."""
        if isinstance(starts, tuple) and len(starts) == 2 and \
                isinstance(starts[0], tuple):
            starts = [starts]
        known = [set(layer) for layer in self._values]
        layers, edges = _forward_layers(self._graph, self._acceptor,
                                        self._mask, self._horizon, starts, known)
        self._reach_edges |= edges
        n = self._horizon
        for state in layers[n]:
            self._values[n][state] = self._terminal(state)
        for t in range(n - 1, -1, -1):
            fresh = {state: self._raw(t, state) for state in layers[t]}
            if self._shifts[t] is None:
                shift = 0
                peak = max(fresh.values()) if fresh else 0
                if self._rescale and 0 < peak < self._threshold:
                    shift = -math.frexp(peak)[1]
                    self.rescale_events += 1
                    logger.debug("[backward] layer %d rescaled by 2^%d", t, shift)
                self._shifts[t] = shift
            for state, value in fresh.items():
                self._values[t][state] = self._shifted(t, value)
        logger.debug("[backward] %d time-indexed states, %d product edges",
                     self.state_count, len(self._reach_edges))
        return self

    def value(self, t, state):
        """Return the (scaled) message of *state* at layer *t*."""
        if state[1] is None:
            return Fraction(0) if self._exact else 0.0
        try:
            return self._values[t][state]
        except KeyError:
            pass
        n = self._horizon
        stack = [(t, state, False)]
        while stack:
            t0, st, expanded = stack.pop()
            if st in self._values[t0]:
                continue
            if t0 == n:
                self._values[n][st] = self._terminal(st)
            elif expanded:
                self._values[t0][st] = self._shifted(t0, self._raw(t0, st))
            else:
                stack.append((t0, st, True))
                below = self._values[t0 + 1]
                for _, _, target in _successors(self._graph, self._acceptor,
                                                self._mask, t0, st):
                    if target not in below:
                        stack.append((t0 + 1, target, False))
        return self._values[t][state]

    def candidates(self, t, state, lookahead=True):
        """Return the cached candidate set of *state* at step *t*.

        The result is ``(items, cumulative, total)``: *items* lists the
        feasible ``(symbol, probability, next_state)`` edges in ascending
        symbol order, *cumulative* their running weight sums and *total* the
        last sum. With *lookahead*, the weight is ``p * beta_{t+1}(next)``
        and zero-weight edges are dropped; without it, the weight is ``p``,
        except that the final step keeps only edges into accepting states.
        """
        key = (t, state, lookahead)
        try:
            return self._candidates[key]
        except KeyError:
            pass
        items = []
        cumulative = []
        total = Fraction(0) if self._exact else 0.0
        if state[1] is not None:
            for y, p, target in _successors(self._graph, self._acceptor,
                                            self._mask, t, state):
                if lookahead:
                    weight = p * self.value(t + 1, target)
                elif t + 1 == self._horizon:
                    weight = p * self._terminal(target)
                else:
                    weight = p
                if weight > 0:
                    total += weight
                    items.append((y, p, target))
                    cumulative.append(total)
        result = (tuple(items), tuple(cumulative), total)
        self._candidates[key] = result
        return result

    def draw(self, t, state, rng, lookahead=True):
        """Draw one candidate of *state* at step *t*, or ``None`` if empty."""
        items, cumulative, total = self.candidates(t, state, lookahead)
        if not items:
            return None
        index = bisect_right(cumulative, rng.random() * total)
        return items[min(index, len(items) - 1)]


def backward_pass(graph, acceptor, mask, horizon=None, start=None,
                  rescale=True, prefix=(), feed_prefix=False):
    """Return a prepared :class:`.BackwardTable`.

    *start* is a product state ``(context, q)``; by default it is derived
    from *prefix* with :func:`initial_state`. An infeasible problem gives a
    table whose start message is zero; no error is raised.
    """
    if start is None:
        start = initial_state(graph, acceptor, prefix, feed_prefix)
    table = BackwardTable(graph, acceptor, mask, horizon, rescale)
    return table.prepare([start])

def partition_function(table, start):
    """Return ``(value, log_scale)``: Z is ``value * exp(log_scale)``.

    A zero value means no sequence satisfies the constraints.
    """
    context, state = start
    if context not in table.graph:
        raise GraphError("{} is not a state of the graph".format(list(context)))
    if state is None:
        return table.value(0, start), 0.0
    return table.value(0, start), table.log_scale(0)

def log_partition(table, start):
    """Return the natural log of Z, or ``-inf`` when Z is zero."""
    value, scale = partition_function(table, start)
    if value == 0:
        return float("-inf")
    return math.log(value) + scale

def _resolve(graph, acceptor, mask, table, start, rescale=True):
    if table is None:
        table = backward_pass(graph, acceptor, mask, start=start,
                              rescale=rescale)
    elif table.graph is not graph or table.acceptor is not acceptor:
        raise ValueError("the backward table was built for another problem")
    if start is None:
        start = initial_state(graph, acceptor)
    return table, start

def sample_sequence(graph, acceptor, mask, table=None, start=None, seed=None,
                    trace=False):
    """Draw one sequence exactly from the constrained distribution.

    *seed* is an integer seed or a :class:`numpy.random.Generator` (pass the
    same generator to draw many samples from one stream). Raises
    :exc:`.InfeasibleError` when Z is zero.
    """
    table, start = _resolve(graph, acceptor, mask, table, start)
    if table.value(0, start) == 0:
        raise InfeasibleError("Z = 0: no sequence satisfies the constraints")
    rng = make_rng(seed)
    state = start
    sequence = []
    orders = []
    steps = [] if trace else None
    for t in range(table.horizon):
        choice = table.draw(t, state, rng)
        if choice is None:
            raise InvariantError("zero total weight at step {} from {}".format(
                t, state))
        symbol, p, target = choice
        sequence.append(symbol)
        orders.append(len(state[0]))
        if trace:
            steps.append(StepTrace(t=t, state=list(state[0]), q=state[1],
                                   symbol=symbol, probability=float(p),
                                   next_state=list(target[0]), next_q=target[1],
                                   order=len(state[0])))
        state = target
    return SampleResult(sequence=sequence, orders=orders, trace=steps)

def conditional_distribution(graph, acceptor, mask, table=None, start=None,
                             budget=DEFAULT_EDGE_BUDGET):
    """Return ``{sequence: probability}`` for the conditioned distribution.

    Paths through the product are enumerated with the sampler's step
    probabilities; raises :exc:`.BudgetExceededError` when more than *budget*
    candidate edges would have to be expanded.
    """
    table, start = _resolve(graph, acceptor, mask, table, start)
    out = {}
    if table.value(0, start) == 0:
        return out
    one = Fraction(1) if table.exact else 1.0
    expanded = 0
    stack = [(0, start, (), one)]
    while stack:
        t, state, prefix, prob = stack.pop()
        if t == table.horizon:
            out[prefix] = out.get(prefix, 0) + prob
            continue
        items, _, total = table.candidates(t, state)
        expanded += len(items)
        if expanded > budget:
            raise BudgetExceededError("conditional enumeration", budget, expanded)
        for y, p, target in items:
            weight = p * table.value(t + 1, target)
            stack.append((t + 1, target, prefix + (y,), prob * weight / total))
    return out

def product_stats(graph, acceptor, mask, horizon=None, start=None):
    """Return a :class:`.ProductStats` record of the reachable product.

    Fields: ``reach_states`` (distinct product states), ``time_states``
    (time-indexed states, terminal layer included), ``reach_edges``
    (distinct product edges), ``time_edges``, ``full_bound`` (the dense
    bound |Q| * |E|), plus the graph and acceptor sizes.
    """
    if horizon is None:
        horizon = mask.horizon
    if start is None:
        start = initial_state(graph, acceptor)
    layers, edges = _forward_layers(graph, acceptor, mask, horizon, [start])
    time_edges = 0
    for t in range(horizon):
        for state in layers[t]:
            time_edges += len(_successors(graph, acceptor, mask, t, state))
    touched = graph.materialized_state_count
    context_edges = graph.edge_count()
    distinct = set()
    for layer in layers:
        distinct |= layer
    return ProductStats(contexts=graph.state_count(),
                        context_edges=context_edges,
                        acceptor_states=acceptor.state_count,
                        reach_states=len(distinct),
                        time_states=sum(len(layer) for layer in layers),
                        reach_edges=len(edges), time_edges=time_edges,
                        full_bound=acceptor.state_count * context_edges,
                        touched_contexts=touched)

def forward_marginals(graph, acceptor, mask, table=None, start=None):
    """Return per-position ``{symbol: probability}`` marginals.

    This is a diagnostic: it pushes the conditioned step probabilities
    forward through the product and is never used for sampling.
    """
    table, start = _resolve(graph, acceptor, mask, table, start)
    marginals = []
    if table.value(0, start) == 0:
        return marginals
    one = Fraction(1) if table.exact else 1.0
    current = {start: one}
    for t in range(table.horizon):
        nxt = {}
        row = {}
        for state, mass in current.items():
            items, _, total = table.candidates(t, state)
            for y, p, target in items:
                share = mass * p * table.value(t + 1, target) / total
                row[y] = row.get(y, 0) + share
                nxt[target] = nxt.get(target, 0) + share
        marginals.append(row)
        current = nxt
    return marginals

def first_order_hybrid(counts, cutoff, mask, prefix, acceptor=None,
                       mode="weighted", exact=False):
    """Return the first-step scores of a first-order look-ahead hybrid.

    The first step uses the variable-order prediction after *prefix*; the
    future mass comes from the order-1 projection. ``mode="weighted"`` scores
    ``P(y | prefix) * psi_0(y) * beta1(y)``; ``mode="support"`` replaces the
    future mass by its indicator. The scores are normalized. This is a
    diagnostic showing how merging histories distorts the conditional.
    """
    from .constraints import accept_all
    if mode not in ("weighted", "support"):
        raise ValueError("unknown hybrid mode {!r}".format(mode))
    projected = first_order_project(counts, exact)
    if acceptor is None:
        acceptor = accept_all(counts.alphabet)
    table = BackwardTable(projected, acceptor, mask)
    _, dist = predict_longest_suffix(counts, cutoff, prefix, exact)
    scores = {}
    for y in sorted(dist):
        if not mask.allows(0, y):
            continue
        q = acceptor.step(acceptor.start, y)
        if q is None:
            continue
        future = table.value(1, (projected.canon((), y), q))
        if mode == "support":
            future = 1 if future > 0 else 0
        if future > 0:
            scores[y] = dist[y] * future
    total = sum(scores.values())
    return {y: s / total for y, s in scores.items()} if total else {}
