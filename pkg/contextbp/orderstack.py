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
This module contains the sequential generation policies.

:func:`vanilla_step` is the unconstrained backoff step: it scans context
lengths from K down to the root and samples from the first context that has
continuations and is accepted by the :class:`.OrderPolicy`. The constrained
version works on an :class:`.OrderStack`, which holds one context graph and
one backward table per maximum order k = 1..K; at each step the highest order
whose feasible candidate set is nonempty (and accepted) is sampled with
weights ``p * beta^(k)_{t+1}``.

A policy run is a sequential kernel, not the posterior of one fixed source;
:func:`success_mass` gives the probability that it reaches the horizon.
"""

import logging
import math
from bisect import bisect_right
from fractions import Fraction

from scipy import stats

from .context_model import SourcePolicy, build_context_graph
from .definitions import DEFAULT_ENUMERATION_BUDGET, DEFAULT_STATE_BUDGET
from .errors import BudgetExceededError
from .inference import BackwardTable
from .records import PolicyFailure, SampleResult, StepResult, StepTrace, SuccessMass
from .utils import make_rng, suffix

__all__ = ["OrderPolicy", "OrderStack", "vanilla_step",
           "vanilla_step_distribution", "vanilla_distribution",
           "prepare_stack", "constrained_backoff_step", "step_distribution",
           "run_policy", "policy_distribution", "success_mass"]

logger = logging.getLogger(__name__)

def _inverse_order(k):
    return Fraction(1, k + 1)

class OrderPolicy(object):
    """Decides which order of a backoff scan is used.

    ``longest_feasible`` takes the first nonempty order. ``singleton_avoiding``
    accepts an order k >= 2 whose candidate set has exactly one element only
    with probability *accept_prob* (k), by default 1/(k+1), provided some
    lower order still has candidates; otherwise it accepts.

    With *lookahead* false, candidate sets are filtered by the mask and the
    acceptor only, ignoring future mass; the last step still has to land in
    an accepting state. Such a kernel can dead-end.
    """

    KINDS = ("longest_feasible", "singleton_avoiding")

    def __init__(self, kind="longest_feasible", accept_prob=None,
                 lookahead=True):
        if kind not in self.KINDS:
            raise ValueError("unknown order policy {!r}".format(kind))
        self._kind = kind
        self._accept_prob = accept_prob or _inverse_order
        self._lookahead = lookahead

    def __repr__(self):
        return "OrderPolicy({!r}, lookahead={})".format(self._kind,
                                                         self._lookahead)

    @classmethod
    def longest_feasible(cls, lookahead=True):
        return cls("longest_feasible", lookahead=lookahead)

    @classmethod
    def singleton_avoiding(cls, accept_prob=None, lookahead=True):
        return cls("singleton_avoiding", accept_prob, lookahead)

    @property
    def kind(self):
        return self._kind

    @property
    def lookahead(self):
        return self._lookahead

    def acceptance(self, order, size, has_lower):
        """Return the probability of accepting a candidate set."""
        if (self._kind == "singleton_avoiding" and order >= 2 and size == 1
                and has_lower):
            prob = self._accept_prob(order)
            if not 0 <= prob <= 1:
                raise ValueError("acceptance probability {} outside [0, 1]".format(
                    prob))
            return prob
        return 1

    def accepts(self, order, size, has_lower, rng):
        prob = self.acceptance(order, size, has_lower)
        return prob == 1 or rng.random() < prob


def _as(value, exact):
    return Fraction(value) if exact else float(value)

def _vanilla_levels(counts, max_order, history):
    levels = []
    for k in range(min(max_order, len(history)), -1, -1):
        row = counts.row(suffix(history, k))
        if row:
            levels.append((k, row))
    return levels

def vanilla_step(counts, max_order, policy, history, rng):
    """Return ``(symbol, order)`` for one unconstrained backoff step.

    Context lengths K..1 and then the root are scanned; contexts without
    continuations are skipped and the policy may reject the others. Returns
    ``None`` when every level is rejected.
    """
    rng = make_rng(rng)
    levels = _vanilla_levels(counts, max_order, tuple(history))
    for i, (k, row) in enumerate(levels):
        if not policy.accepts(k, len(row), i + 1 < len(levels), rng):
            continue
        symbols = sorted(row)
        cumulative = []
        running = 0
        for y in symbols:
            running += row[y]
            cumulative.append(running)
        index = bisect_right(cumulative, rng.random() * running)
        return symbols[min(index, len(symbols) - 1)], k
    return None

def vanilla_step_distribution(counts, max_order, policy, history):
    """Return ``({(symbol, order): probability}, failure)`` exactly."""
    levels = _vanilla_levels(counts, max_order, tuple(history))
    out = {}
    reach = Fraction(1)
    for i, (k, row) in enumerate(levels):
        if not reach:
            break
        accept = Fraction(policy.acceptance(k, len(row), i + 1 < len(levels)))
        total = sum(row.values())
        for y, n in row.items():
            key = (y, k)
            out[key] = out.get(key, 0) + reach * accept * Fraction(n, total)
        reach *= 1 - accept
    return out, reach

def vanilla_distribution(counts, max_order, policy, prefix, horizon,
                         budget=DEFAULT_ENUMERATION_BUDGET):
    """Return ``({sequence: probability}, failure)`` of vanilla rollouts."""
    prefix = tuple(prefix)
    out = {}
    failure = Fraction(0)
    expanded = 0
    stack = [((), Fraction(1))]
    while stack:
        emitted, prob = stack.pop()
        if len(emitted) == horizon:
            out[emitted] = out.get(emitted, 0) + prob
            continue
        step, fail = vanilla_step_distribution(counts, max_order, policy,
                                               prefix + emitted)
        failure += prob * fail
        merged = {}
        for (y, _), p in step.items():
            merged[y] = merged.get(y, 0) + p
        expanded += len(merged)
        if expanded > budget:
            raise BudgetExceededError("vanilla enumeration", budget, expanded)
        for y in sorted(merged):
            stack.append((emitted + (y,), prob * merged[y]))
    return out, failure


class OrderStack(object):
    """Per-order context graphs and backward tables for one problem.

    Built by :func:`prepare_stack`; read-only afterwards apart from the
    memoized messages and candidate levels, so many policy runs can share it.
    """

    def __init__(self, graphs, tables, acceptor, mask, prefix=(),
                 feed_prefix=False):
        self._graphs = tuple(graphs)
        self._tables = tuple(tables)
        self._acceptor = acceptor
        self._mask = mask
        self._prefix = tuple(prefix)
        self._feed_prefix = feed_prefix
        self._levels = {}

    def __repr__(self):
        return "OrderStack(K={}, horizon={})".format(self.max_order,
                                                     self.horizon)

    @property
    def max_order(self):
        return len(self._graphs)

    @property
    def graphs(self):
        """The graphs G_1 .. G_K."""
        return self._graphs

    @property
    def tables(self):
        """The backward tables beta^(1) .. beta^(K)."""
        return self._tables

    @property
    def acceptor(self):
        return self._acceptor

    @property
    def mask(self):
        return self._mask

    @property
    def horizon(self):
        return self._mask.horizon

    @property
    def prefix(self):
        return self._prefix

    @property
    def exact(self):
        return self._graphs[0].exact

    def graph(self, order):
        return self._graphs[order - 1]

    def table(self, order):
        return self._tables[order - 1]

    def start_q(self, prefix=None):
        """Return the acceptor state generation starts from."""
        prefix = self._prefix if prefix is None else tuple(prefix)
        if self._feed_prefix:
            return self._acceptor.run(prefix)
        return self._acceptor.start

    def context_states(self, history):
        """Return ``(s_1, .., s_K)`` for the full *history*."""
        history = tuple(history)
        return tuple(graph.start_state(history) for graph in self._graphs)

    def advance(self, states, symbol):
        """Return the context states after emitting *symbol*."""
        return tuple(graph.canon(state, symbol)
                     for graph, state in zip(self._graphs, states))

    def levels(self, t, states, q, lookahead=True):
        """Return the candidate sets of every order, highest first.

        Each entry is ``(order, items, cumulative, total)`` as returned by
        :meth:`.BackwardTable.candidates`. Results are cached by
        ``(t, states, q, lookahead)``.
        """
        key = (t, states, q, lookahead)
        try:
            return self._levels[key]
        except KeyError:
            pass
        out = []
        for k in range(self.max_order, 0, -1):
            items, cumulative, total = self.table(k).candidates(
                t, (states[k - 1], q), lookahead)
            out.append((k, items, cumulative, total))
        out = tuple(out)
        self._levels[key] = out
        return out


def prepare_stack(counts, max_order, source_policy=None, acceptor=None,
                  mask=None, horizon=None, prefix=(), feed_prefix=False,
                  exact=False, rescale=True):
    """Build G_1..G_K and their backward tables for the given constraints.

    Each table is prepared from its graph's start state for *prefix*; other
    states are evaluated lazily when a policy run reaches them.
    """
    from .augmentation import VirtualCountTable
    from .constraints import PositionalMask, accept_all
    from .inference import initial_state

    if max_order < 1:
        raise ValueError("K must be at least 1, got {}".format(max_order))
    source_policy = source_policy or SourcePolicy.mle()
    if source_policy.kind == "augmented" and \
            not isinstance(counts, VirtualCountTable):
        counts = VirtualCountTable(counts, source_policy.group)
    if mask is None:
        if horizon is None:
            raise ValueError("either a mask or a horizon is required")
        mask = PositionalMask(horizon)
    if acceptor is None:
        acceptor = accept_all(counts.alphabet)
    graphs = []
    tables = []
    for k in range(1, max_order + 1):
        graph = build_context_graph(counts, k, source_policy, exact, lazy=True)
        table = BackwardTable(graph, acceptor, mask, horizon, rescale)
        table.prepare([initial_state(graph, acceptor, prefix, feed_prefix)])
        graphs.append(graph)
        tables.append(table)
    logger.debug("[stack] prepared K=%d, %d time-indexed states in total",
                 max_order, sum(table.state_count for table in tables))
    return OrderStack(graphs, tables, acceptor, mask, prefix, feed_prefix)

def constrained_backoff_step(stack, policy, history, t, q, rng, states=None):
    """Run one policy-guided backoff step at position *t*.

    *history* is the full history (prefix included) and *q* the current
    acceptor state. Orders K..1 are scanned; the first nonempty candidate set
    the policy accepts is sampled proportionally to its weights. Returns a
    :class:`.StepResult` or ``None`` when every order is empty or rejected.
    """
    if not 0 <= t < stack.horizon:
        raise ValueError("step {} outside horizon {}".format(t, stack.horizon))
    rng = make_rng(rng)
    if states is None:
        states = stack.context_states(history)
    if q is None:
        return None
    levels = stack.levels(t, states, q, policy.lookahead)
    for i, (k, items, cumulative, total) in enumerate(levels):
        if not items:
            continue
        has_lower = any(level[1] for level in levels[i + 1:])
        if not policy.accepts(k, len(items), has_lower, rng):
            continue
        index = bisect_right(cumulative, rng.random() * total)
        symbol, p, (_, q2) = items[min(index, len(items) - 1)]
        return StepResult(symbol=symbol, order=k, probability=float(p),
                          context=list(states[k - 1]),
                          states=stack.advance(states, symbol), q=q2)
    return None

def step_distribution(stack, policy, t, states, q):
    """Return ``({(symbol, order): probability}, failure)`` for one step."""
    exact = stack.exact
    out = {}
    reach = _as(1, exact)
    if q is None:
        return out, reach
    levels = stack.levels(t, states, q, policy.lookahead)
    for i, (k, items, cumulative, total) in enumerate(levels):
        if not reach:
            break
        if not items:
            continue
        has_lower = any(level[1] for level in levels[i + 1:])
        accept = _as(policy.acceptance(k, len(items), has_lower), exact)
        previous = 0
        for (y, _, _), running in zip(items, cumulative):
            key = (y, k)
            out[key] = out.get(key, 0) + reach * accept * (running - previous) / total
            previous = running
        reach *= 1 - accept
    return out, reach

def run_policy(stack, policy, prefix=None, seed=None, trace=False):
    """Roll the policy out from *prefix* to the horizon.

    Returns a :class:`.SampleResult` (with the order used at every step) or a
    :class:`.PolicyFailure` naming the position at which no order could be
    used. Failure is a value; nothing is retried.
    """
    rng = make_rng(seed)
    prefix = stack.prefix if prefix is None else tuple(prefix)
    history = prefix
    states = stack.context_states(history)
    q = stack.start_q(prefix)
    sequence = []
    orders = []
    steps = [] if trace else None
    for t in range(stack.horizon):
        result = constrained_backoff_step(stack, policy, history, t, q, rng,
                                          states)
        if result is None:
            return PolicyFailure(position=t, sequence=sequence, orders=orders,
                                 trace=steps)
        if trace:
            steps.append(StepTrace(t=t, q=q, symbol=result.symbol,
                                   order=result.order, context=result.context,
                                   probability=result.probability,
                                   next_q=result.q))
        sequence.append(result.symbol)
        orders.append(result.order)
        history += (result.symbol,)
        states = result.states
        q = result.q
    return SampleResult(sequence=sequence, orders=orders, trace=steps)

def policy_distribution(stack, policy, prefix=None,
                        budget=DEFAULT_ENUMERATION_BUDGET):
    """Return ``({sequence: probability}, failure)`` of the policy kernel."""
    prefix = stack.prefix if prefix is None else tuple(prefix)
    exact = stack.exact
    out = {}
    failure = _as(0, exact)
    expanded = 0
    pending = [(0, stack.context_states(prefix), stack.start_q(prefix), (),
               _as(1, exact))]
    while pending:
        t, states, q, emitted, prob = pending.pop()
        if t == stack.horizon:
            out[emitted] = out.get(emitted, 0) + prob
            continue
        step, fail = step_distribution(stack, policy, t, states, q)
        failure += prob * fail
        merged = {}
        for (y, _), p in step.items():
            merged[y] = merged.get(y, 0) + p
        expanded += len(merged)
        if expanded > budget:
            raise BudgetExceededError("policy enumeration", budget, expanded)
        for y in sorted(merged):
            q2 = stack.acceptor.step(q, y)
            pending.append((t + 1, stack.advance(states, y), q2, emitted + (y,),
                           prob * merged[y]))
    return out, failure

def _exact_mass(stack, policy, prefix, budget):
    exact = stack.exact
    order = stack.max_order
    current = {(suffix(prefix, order), stack.start_q(prefix)): _as(1, exact)}
    visited = len(current)
    for t in range(stack.horizon):
        nxt = {}
        for (raw, q), mass in current.items():
            states = stack.context_states(raw)
            step, _ = step_distribution(stack, policy, t, states, q)
            for (y, _), p in step.items():
                key = ((raw + (y,))[-order:], stack.acceptor.step(q, y))
                nxt[key] = nxt.get(key, 0) + mass * p
        visited += len(nxt)
        if visited > budget:
            raise BudgetExceededError("success-mass DP", budget, visited)
        current = nxt
    return sum(current.values()), visited

def success_mass(stack, policy, prefix=None, mode="exact", trials=10000,
                 seed=None, confidence=0.99, budget=DEFAULT_STATE_BUDGET):
    """Return the probability that a policy run reaches the horizon.

    ``mode="exact"`` runs a DP over (last K symbols, acceptor state) per
    position, which determines every context state and candidate set.
    ``mode="monte_carlo"`` counts non-failing rollouts and reports a
    Clopper-Pearson interval at *confidence* and the standard error.
    """
    prefix = stack.prefix if prefix is None else tuple(prefix)
    if mode == "exact":
        mass, visited = _exact_mass(stack, policy, prefix, budget)
        return SuccessMass(mass=mass, mode="exact", states=visited)
    if mode != "monte_carlo":
        raise ValueError("unknown success-mass mode {!r}".format(mode))
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = make_rng(seed)
    successes = 0
    for _ in range(trials):
        if isinstance(run_policy(stack, policy, prefix, rng), SampleResult):
            successes += 1
    mass = successes / trials
    interval = stats.binomtest(successes, trials).proportion_ci(
        confidence_level=confidence)
    return SuccessMass(mass=mass, mode="monte_carlo",
                       ci=[float(interval.low), float(interval.high)],
                       stderr=math.sqrt(mass * (1 - mass) / trials),
                       trials=trials, failures=trials - successes)
