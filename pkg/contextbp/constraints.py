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
This module contains the constraint side of a generation problem.

Regular constraints are :class:`.Acceptor`\\ s: deterministic automata with
partial transitions, where an undefined transition rejects. Forbidden
substrings (and MAXORDER constraints, which forbid every M-gram of the
training corpus) are compiled with a goto/failure-link construction into an
acceptor with one explicit dead state that has no outgoing transitions.
Purely positional constraints (anchors and the allowed final symbols) are kept
out of the automaton as a :class:`.PositionalMask`.
"""

import json
import logging
from collections import deque

from .errors import ConstraintError
from .utils import parse_symbols

__all__ = ["Acceptor", "NondeterministicAcceptor", "PositionalMask",
           "ConstraintSpec", "accept_all", "accept_nothing", "intersect",
           "compile_forbidden", "compile_maxorder", "determinize",
           "build_masks", "compile_spec", "mask_to_acceptor",
           "validate_sequence"]

logger = logging.getLogger(__name__)

class Acceptor(object):
    """A deterministic finite acceptor with partial transitions.

    States are the integers ``0 .. state_count - 1``. *transitions* is either
    a mapping ``{(q, symbol): q2}`` or an iterable of ``(q, symbol, q2)``
    triples; at most one target per ``(q, symbol)`` is allowed.
    """

    def __init__(self, state_count, start, accepting, transitions=()):
        if state_count < 1:
            raise ConstraintError("an acceptor needs at least one state")
        if not 0 <= start < state_count:
            raise ConstraintError("start state {} out of range".format(start))
        accepting = frozenset(accepting)
        for q in accepting:
            if not 0 <= q < state_count:
                raise ConstraintError("accepting state {} out of range".format(q))
        if hasattr(transitions, "items"):
            transitions = [(q, y, r) for (q, y), r in transitions.items()]
        delta = [{} for _ in range(state_count)]
        for q, y, r in transitions:
            if not (0 <= q < state_count and 0 <= r < state_count):
                raise ConstraintError("transition {} -{}-> {} out of range".format(
                    q, y, r))
            if delta[q].get(y, r) != r:
                raise ConstraintError("two targets for ({}, {})".format(q, y))
            delta[q][y] = r
        self._state_count = state_count
        self._start = start
        self._accepting = accepting
        self._delta = tuple(delta)

    def __repr__(self):
        return "Acceptor(states={}, start={}, accepting={}, transitions={})".format(
            self._state_count, self._start, sorted(self._accepting),
            self.transition_count)

    def __eq__(self, other):
        if not isinstance(other, Acceptor):
            return NotImplemented
        return (self._state_count == other._state_count and
                self._start == other._start and
                self._accepting == other._accepting and
                self._delta == other._delta)

    def __ne__(self, other):
        return not self == other

    @property
    def state_count(self):
        return self._state_count

    @property
    def start(self):
        return self._start

    @property
    def accepting(self):
        return self._accepting

    @property
    def transition_count(self):
        return sum(len(row) for row in self._delta)

    def is_accepting(self, state):
        return state in self._accepting

    def step(self, state, symbol):
        """Return the successor of *state* on *symbol*, or ``None`` to reject."""
        return self._delta[state].get(symbol)

    def outgoing(self, state):
        """Return a copy of the ``{symbol: target}`` row of *state*."""
        return dict(self._delta[state])

    def symbols(self):
        """Return the set of symbols labelling any transition."""
        out = set()
        for row in self._delta:
            out.update(row)
        return out

    def run(self, sequence, state=None):
        """Return the state after reading *sequence*, or ``None`` if rejected."""
        state = self._start if state is None else state
        for symbol in sequence:
            state = self._delta[state].get(symbol)
            if state is None:
                return None
        return state

    def accepts(self, sequence):
        state = self.run(sequence)
        return state is not None and state in self._accepting

    def transitions(self):
        """Yield ``(q, symbol, q2)`` triples in canonical order."""
        for q, row in enumerate(self._delta):
            for y in sorted(row):
                yield q, y, row[y]

    def trim(self):
        """Return an equivalent acceptor without unreachable states.

        Surviving states are renumbered in breadth-first order from the start.
        """
        order = {self._start: 0}
        queue = deque([self._start])
        while queue:
            q = queue.popleft()
            for y in sorted(self._delta[q]):
                r = self._delta[q][y]
                if r not in order:
                    order[r] = len(order)
                    queue.append(r)
        triples = [(order[q], y, order[r]) for q, y, r in self.transitions()
                   if q in order]
        accepting = [order[q] for q in self._accepting if q in order]
        return Acceptor(len(order), 0, accepting, triples)

    def complete(self, alphabet):
        """Return an acceptor with a rejecting sink filling every gap."""
        sink = self._state_count
        triples = list(self.transitions())
        for q in range(self._state_count + 1):
            row = self._delta[q] if q < sink else {}
            for y in sorted(alphabet):
                if y not in row:
                    triples.append((q, y, sink))
        return Acceptor(sink + 1, self._start, self._accepting, triples)

    def complement(self, alphabet):
        """Return the acceptor of the complement language over *alphabet*."""
        full = self.complete(alphabet)
        rejecting = set(range(full.state_count)) - full.accepting
        return Acceptor(full.state_count, full.start, rejecting,
                        full.transitions())

    def to_document(self):
        return {"states": self._state_count, "start": self._start,
                "accepting": sorted(self._accepting),
                "transitions": [list(t) for t in self.transitions()]}

    @classmethod
    def from_document(cls, doc):
        try:
            return cls(int(doc["states"]), int(doc["start"]),
                       [int(q) for q in doc["accepting"]],
                       [(int(q), int(y), int(r)) for q, y, r in
                        doc["transitions"]])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConstraintError):
                raise
            raise ConstraintError("malformed acceptor document: {}".format(exc))


class NondeterministicAcceptor(object):
    """An epsilon-free nondeterministic acceptor.

    *transitions* is an iterable of ``(q, symbol, q2)`` triples; several
    targets for the same ``(q, symbol)`` are allowed. Use :func:`determinize`
    before building a product with it.
    """

    def __init__(self, state_count, starts, accepting, transitions):
        self.state_count = state_count
        self.starts = frozenset(starts)
        self.accepting = frozenset(accepting)
        self._delta = [{} for _ in range(state_count)]
        for q, y, r in transitions:
            if not (0 <= q < state_count and 0 <= r < state_count):
                raise ConstraintError("transition {} -{}-> {} out of range".format(
                    q, y, r))
            self._delta[q].setdefault(y, set()).add(r)
        if not self.starts <= set(range(state_count)):
            raise ConstraintError("start states out of range")

    def targets(self, states, symbol):
        out = set()
        for q in states:
            out.update(self._delta[q].get(symbol, ()))
        return frozenset(out)

    def symbols(self, states):
        out = set()
        for q in states:
            out.update(self._delta[q])
        return out

    def accepts(self, sequence):
        current = self.starts
        for symbol in sequence:
            current = self.targets(current, symbol)
            if not current:
                return False
        return bool(current & self.accepting)


def determinize(nfa):
    """Return the :class:`.Acceptor` built from *nfa* by subset construction.

    Only subsets reachable from the start set are created; an empty target
    subset becomes an undefined (rejecting) transition.
    """
    if isinstance(nfa, Acceptor):
        return nfa.trim()
    start = nfa.starts
    ids = {start: 0}
    subsets = [start]
    triples = []
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        for y in sorted(nfa.symbols(subset)):
            target = nfa.targets(subset, y)
            if not target:
                continue
            if target not in ids:
                ids[target] = len(subsets)
                subsets.append(target)
                queue.append(target)
            triples.append((ids[subset], y, ids[target]))
    accepting = [i for i, subset in enumerate(subsets)
                 if subset & nfa.accepting]
    logger.debug("[determinize] %d NFA states -> %d DFA states",
                 nfa.state_count, len(subsets))
    return Acceptor(len(subsets), 0, accepting, triples)

def accept_all(alphabet):
    """Return the one-state acceptor of every sequence over *alphabet*."""
    return Acceptor(1, 0, [0], [(0, y, 0) for y in sorted(alphabet)])

def accept_nothing():
    """Return an acceptor with an empty language."""
    return Acceptor(1, 0, [])

def intersect(first, *others):
    """Return the reachable product of one or more acceptors."""
    result = first
    for other in others:
        result = _product(result, other)
    return result

def _product(a, b):
    start = (a.start, b.start)
    ids = {start: 0}
    queue = deque([start])
    triples = []
    while queue:
        pair = queue.popleft()
        p, q = pair
        row_a = a.outgoing(p)
        for y in sorted(row_a):
            r = b.step(q, y)
            if r is None:
                continue
            target = (row_a[y], r)
            if target not in ids:
                ids[target] = len(ids)
                queue.append(target)
            triples.append((ids[pair], y, ids[target]))
    accepting = [i for (p, q), i in ids.items()
                 if a.is_accepting(p) and b.is_accepting(q)]
    return Acceptor(len(ids), 0, accepting, triples)

def _patterns(patterns):
    out = []
    for pattern in patterns:
        pattern = parse_symbols(pattern)
        if not pattern:
            raise ConstraintError("forbidden substrings must be nonempty")
        out.append(pattern)
    return out

def compile_forbidden(patterns, alphabet):
    """Return the acceptor of sequences avoiding every pattern in *patterns*.

    States are the nodes of the pattern trie that do not complete a pattern,
    plus one dead state; a transition that completes any pattern (directly or
    through a failure link) goes to the dead state, which has no outgoing
    transitions. Every live state is accepting.
    """
    patterns = _patterns(patterns)
    alphabet = sorted(set(alphabet))
    if not patterns:
        return accept_all(alphabet)

    goto = [{}]
    terminal = [False]
    for pattern in patterns:
        node = 0
        for y in pattern:
            if y not in goto[node]:
                goto[node][y] = len(goto)
                goto.append({})
                terminal.append(False)
            node = goto[node][y]
        terminal[node] = True

    fail = [0] * len(goto)
    order = []
    queue = deque(goto[0].values())
    while queue:
        node = queue.popleft()
        order.append(node)
        for y, child in goto[node].items():
            failure = fail[node]
            while failure and y not in goto[failure]:
                failure = fail[failure]
            if y in goto[failure]:
                fail[child] = goto[failure][y]
            terminal[child] = terminal[child] or terminal[fail[child]]
            queue.append(child)

    delta = {0: {y: goto[0].get(y, 0) for y in alphabet}}
    for node in order:
        delta[node] = {}
        for y in alphabet:
            if y in goto[node]:
                delta[node][y] = goto[node][y]
            else:
                delta[node][y] = delta[fail[node]][y]

    live = [0] + [node for node in order if not terminal[node]]
    ids = {node: i for i, node in enumerate(live)}
    dead = len(live)
    triples = []
    for node in live:
        for y in alphabet:
            target = delta[node][y]
            triples.append((ids[node], y, dead if terminal[target] else ids[target]))
    acceptor = Acceptor(dead + 1, 0, range(dead), triples).trim()
    logger.debug("[forbidden] %d patterns -> %d states", len(patterns),
                 acceptor.state_count)
    return acceptor

def compile_maxorder(corpus, order, alphabet=None):
    """Return the acceptor forbidding every *order*-gram of *corpus*."""
    if order < 1:
        raise ValueError("MAXORDER must be at least 1, got {}".format(order))
    grams = set()
    for _, symbols in corpus:
        for i in range(len(symbols) - order + 1):
            grams.add(symbols[i:i + order])
    if alphabet is None:
        alphabet = corpus.alphabet
    logger.debug("[maxorder] M=%d forbids %d distinct grams", order, len(grams))
    return compile_forbidden(sorted(grams), alphabet)


class PositionalMask(object):
    """Per-position allowed-symbol sets psi_t for a horizon of *horizon*.

    *masks* maps a position to its allowed symbols; positions that are absent
    allow every symbol.
    """

    def __init__(self, horizon, masks=None):
        if horizon < 1:
            raise ValueError("horizon must be at least 1, got {}".format(horizon))
        clean = {}
        for t, allowed in (masks or {}).items():
            if not 0 <= t < horizon:
                raise ConstraintError("position {} outside horizon {}".format(
                    t, horizon))
            allowed = frozenset(allowed)
            if not allowed:
                raise ConstraintError("position {} allows no symbol".format(t))
            clean[t] = allowed
        self._horizon = horizon
        self._masks = clean

    def __repr__(self):
        items = ", ".join("{}: {}".format(t, sorted(self._masks[t]))
                          for t in sorted(self._masks))
        return "PositionalMask({}, {{{}}})".format(self._horizon, items)

    def __eq__(self, other):
        if not isinstance(other, PositionalMask):
            return NotImplemented
        return self._horizon == other._horizon and self._masks == other._masks

    def __ne__(self, other):
        return not self == other

    @property
    def horizon(self):
        return self._horizon

    @property
    def is_permissive(self):
        return not self._masks

    def allowed(self, t):
        """Return the allowed set at position *t*, or ``None`` for "any"."""
        return self._masks.get(t)

    def allows(self, t, symbol):
        allowed = self._masks.get(t)
        return allowed is None or symbol in allowed

    def positions(self):
        return sorted(self._masks)

    def intersect(self, other):
        """Return the mask allowing what both masks allow."""
        if other.horizon != self._horizon:
            raise ConstraintError("masks have different horizons")
        merged = dict(self._masks)
        for t in other.positions():
            allowed = other.allowed(t)
            merged[t] = merged[t] & allowed if t in merged else allowed
            if not merged[t]:
                raise ConstraintError("position {} allows no symbol".format(t))
        return PositionalMask(self._horizon, merged)


class ConstraintSpec(object):
    """A generation problem's constraints, as read from a spec document.

    Anchors and *final_allowed* are positional; *forbidden_substrings*,
    *maxorder* and an inline *dfa* are regular and end up in one acceptor.
    """

    def __init__(self, horizon, anchors=(), final_allowed=None,
                 forbidden_substrings=(), maxorder=None, dfa=None):
        if horizon < 1:
            raise ConstraintError("horizon must be at least 1")
        anchors = [(int(t), frozenset(allowed)) for t, allowed in anchors]
        for t, _ in anchors:
            if not 0 <= t < horizon:
                raise ConstraintError("anchor position {} outside horizon {}".format(
                    t, horizon))
        if maxorder is not None and maxorder < 1:
            raise ConstraintError("maxorder must be at least 1")
        self.horizon = horizon
        self.anchors = anchors
        self.final_allowed = (frozenset(final_allowed)
                              if final_allowed is not None else None)
        self.forbidden_substrings = _patterns(forbidden_substrings)
        self.maxorder = maxorder
        self.dfa = dfa

    def __repr__(self):
        return ("ConstraintSpec(horizon={}, anchors={}, final_allowed={}, "
                "forbidden={}, maxorder={}, dfa={})").format(
                    self.horizon, len(self.anchors), self.final_allowed,
                    len(self.forbidden_substrings), self.maxorder,
                    self.dfa is not None)

    @classmethod
    def from_document(cls, doc):
        """Build a spec from its JSON document."""
        try:
            anchors = [(a["pos"], [int(y) for y in a["allowed"]])
                       for a in doc.get("anchors", ())]
            final = doc.get("final_allowed")
            dfa = doc.get("dfa")
            return cls(int(doc["horizon"]), anchors,
                       [int(y) for y in final] if final is not None else None,
                       [[int(y) for y in p]
                        for p in doc.get("forbidden_substrings", ())],
                       doc.get("maxorder"),
                       Acceptor.from_document(dfa) if dfa is not None else None)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            if isinstance(exc, ConstraintError):
                raise
            raise ConstraintError("malformed constraint spec: {}".format(exc))

    @classmethod
    def loads(cls, text):
        try:
            doc = json.loads(text)
        except ValueError as exc:
            raise ConstraintError("constraint spec is not valid JSON: {}".format(exc))
        return cls.from_document(doc)

    def to_document(self):
        doc = {"horizon": self.horizon,
               "anchors": [{"pos": t, "allowed": sorted(a)}
                           for t, a in self.anchors]}
        if self.final_allowed is not None:
            doc["final_allowed"] = sorted(self.final_allowed)
        if self.forbidden_substrings:
            doc["forbidden_substrings"] = [list(p) for p in
                                           self.forbidden_substrings]
        if self.maxorder is not None:
            doc["maxorder"] = self.maxorder
        if self.dfa is not None:
            doc["dfa"] = self.dfa.to_document()
        return doc

    def merge(self, other):
        """Combine two specs: masks intersect and regular parts multiply."""
        if other.horizon != self.horizon:
            raise ConstraintError("cannot merge specs with different horizons")
        if self.final_allowed is None:
            final = other.final_allowed
        elif other.final_allowed is None:
            final = self.final_allowed
        else:
            final = self.final_allowed & other.final_allowed
        orders = [m for m in (self.maxorder, other.maxorder) if m is not None]
        dfas = [d for d in (self.dfa, other.dfa) if d is not None]
        return ConstraintSpec(
            self.horizon, self.anchors + other.anchors, final,
            self.forbidden_substrings + other.forbidden_substrings,
            min(orders) if orders else None,
            intersect(*dfas) if dfas else None)


def build_masks(spec, alphabet=None):
    """Return the :class:`.PositionalMask` of *spec*'s anchors and final set.

    Anchors at the same position intersect. An empty allowed set raises
    :exc:`.ConstraintError`; symbols outside *alphabet* are legal but can
    never be emitted, so they only produce a warning.
    """
    masks = {}
    entries = list(spec.anchors)
    if spec.final_allowed is not None:
        entries.append((spec.horizon - 1, spec.final_allowed))
    for t, allowed in entries:
        if not allowed:
            raise ConstraintError("position {} allows no symbol; the spec is "
                                  "infeasible".format(t))
        if alphabet is not None and not allowed <= set(alphabet):
            logger.warning("[masks] position %d names symbols %s outside the "
                           "alphabet", t, sorted(allowed - set(alphabet)))
        masks[t] = masks[t] & allowed if t in masks else allowed
        if not masks[t]:
            raise ConstraintError("anchors at position {} are disjoint; the "
                                  "spec is infeasible".format(t))
    return PositionalMask(spec.horizon, masks)

def compile_spec(spec, alphabet, corpus=None):
    """Return ``(acceptor, mask)`` for *spec* over *alphabet*.

    *corpus* is required when the spec has a MAXORDER constraint.
    """
    parts = []
    if spec.forbidden_substrings:
        parts.append(compile_forbidden(spec.forbidden_substrings, alphabet))
    if spec.maxorder is not None:
        if corpus is None:
            raise ConstraintError("a MAXORDER constraint needs the corpus")
        parts.append(compile_maxorder(corpus, spec.maxorder, alphabet))
    if spec.dfa is not None:
        parts.append(spec.dfa)
    acceptor = intersect(*parts) if parts else accept_all(alphabet)
    return acceptor, build_masks(spec, alphabet)

def mask_to_acceptor(mask, alphabet):
    """Return the position automaton accepting exactly the sequences of
    length ``mask.horizon`` that *mask* allows."""
    n = mask.horizon
    triples = []
    for t in range(n):
        for y in sorted(alphabet):
            if mask.allows(t, y):
                triples.append((t, y, t + 1))
    return Acceptor(n + 1, 0, [n], triples)

def validate_sequence(sequence, acceptor, mask, state=None):
    """Return whether *sequence* satisfies *mask* and *acceptor*.

    *state* overrides the acceptor's start state (used when a prefix was fed
    through the acceptor).
    """
    sequence = tuple(sequence)
    if len(sequence) != mask.horizon:
        raise ValueError("sequence length {} differs from horizon {}".format(
            len(sequence), mask.horizon))
    for t, symbol in enumerate(sequence):
        if not mask.allows(t, symbol):
            return False
    final = acceptor.run(sequence, state)
    return final is not None and acceptor.is_accepting(final)
