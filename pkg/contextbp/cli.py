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
This module contains the ``contextbp`` command-line front end.

Each subcommand is a handler registered in a lookup table with
:func:`_add_command`; :func:`main` parses the arguments, runs the handler and
turns library exceptions into the exit codes listed in
:mod:`.definitions`. Every output file is written atomically.
"""

import argparse
import csv
import io
import json
import logging
import math
import os
import statistics
import sys
import tempfile
import time

from . import __version__
from .augmentation import TransformGroup, check_equivalence, close_alphabet
from .constraints import (ConstraintSpec, PositionalMask, accept_all,
                          compile_maxorder, compile_spec, validate_sequence)
from .context_model import build_context_graph, dense_lift_size
from .corpus import Corpus, CountTable, count_contexts, parse_corpus
from .definitions import (BENCH_HEADER, DEFAULT_ENUMERATION_BUDGET,
                          EXIT_CODES, RNG_ALGORITHM)
from .errors import (BudgetExceededError, ConstraintError, ContextBPError,
                     InfeasibleError, InvariantError)
from .inference import (backward_pass, conditional_distribution,
                        initial_state, partition_function, product_stats,
                        sample_sequence)
from .oracle import (empirical_distribution, enumerate_conditional,
                     random_instance, tv_distance)
from .orderstack import OrderPolicy, prepare_stack, run_policy, success_mass
from .records import BenchRow, ExactnessReport, RunConfig
from .utils import make_rng, parse_symbols

__all__ = ["main", "build_parser", "synthetic_corpus"]

logger = logging.getLogger(__name__)

_COMMANDS = {}

def _add_command(name, help):
    """Create a decorator that adds a command handler to the lookup table."""
    def decorator(func):
        """Add a command handler to the lookup table."""
        _COMMANDS[name] = (func, help)
        return func
    return decorator


class CheckFailed(ContextBPError):
    """Raised by a command whose report did not pass its checks."""


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1, got {}".format(value))
    return value

def _budget_default():
    env = os.environ.get("CONTEXTBP_BUDGET")
    return int(env) if env else DEFAULT_ENUMERATION_BUDGET

def synthetic_corpus(tokens=600, alphabet_size=25, seed=0, branching=3,
                     length=50):
    """Return a seeded random-walk corpus.

    Every symbol gets *branching* random successors; a walk of *tokens*
    symbols over them is cut into sequences of *length* symbols.
    """
    rng = make_rng(seed)
    branching = min(branching, alphabet_size)
    successors = [rng.choice(alphabet_size, branching, replace=False)
                  for _ in range(alphabet_size)]
    walk = [int(rng.integers(0, alphabet_size))]
    while len(walk) < tokens:
        walk.append(int(rng.choice(successors[walk[-1]])))
    sequences = [(1, tuple(walk[i:i + length]))
                 for i in range(0, len(walk), length)]
    return Corpus(sequences)

def _write_output(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    handle, temp = tempfile.mkstemp(dir=directory, prefix=".contextbp-")
    try:
        with os.fdopen(handle, "w", encoding="utf8", newline="") as fp:
            fp.write(text)
        os.replace(temp, path)
    except BaseException:
        if os.path.exists(temp):
            os.unlink(temp)
        raise

def _read(path):
    with open(path, encoding="utf8") as fp:
        return fp.read()

def _json(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"

def _config(args):
    return RunConfig(command=args.command, corpus=args.corpus,
                     model=args.model, constraints=args.constraints,
                     K=args.K, horizon=args.horizon,
                     prefix=list(parse_symbols(args.prefix)),
                     policy=getattr(args, "policy", None),
                     samples=getattr(args, "samples", None), seed=args.seed,
                     format=getattr(args, "format", None), budget=args.budget)


class _Problem(object):
    """The model, constraints and prefix a command works on."""

    def __init__(self, args):
        self.corpus = None
        if args.corpus:
            self.corpus = parse_corpus(_read(args.corpus), args.K)
        if args.model:
            self.counts = CountTable.loads(_read(args.model))
        elif self.corpus is not None:
            if args.K is None:
                raise ValueError("-K is required when training from a corpus")
            self.counts = count_contexts(self.corpus, args.K)
        else:
            raise ValueError("either --model or --corpus is required")
        self.max_order = args.K or self.counts.max_order
        if self.max_order > self.counts.max_order:
            raise ValueError("-K {} exceeds the model order {}".format(
                self.max_order, self.counts.max_order))
        self.prefix = parse_symbols(args.prefix)
        self.feed_prefix = getattr(args, "feed_prefix", False)
        alphabet = self.counts.alphabet
        if args.constraints:
            spec = ConstraintSpec.loads(_read(args.constraints))
            if args.horizon is not None and args.horizon != spec.horizon:
                raise ValueError("--horizon {} disagrees with the spec's {}".format(
                    args.horizon, spec.horizon))
            self.acceptor, self.mask = compile_spec(spec, alphabet, self.corpus)
        elif args.horizon is None:
            raise ValueError("either --constraints or --horizon is required")
        else:
            self.acceptor = accept_all(alphabet)
            if getattr(args, "maxorder", None):
                if self.corpus is None:
                    raise ConstraintError("a MAXORDER constraint needs the corpus")
                self.acceptor = compile_maxorder(self.corpus, args.maxorder,
                                                 alphabet)
            self.mask = PositionalMask(args.horizon)
        self.horizon = self.mask.horizon

    def graph(self, exact=False, lazy=False):
        return build_context_graph(self.counts, self.max_order, None, exact,
                                   lazy)

    def start(self, graph):
        return initial_state(graph, self.acceptor, self.prefix,
                             self.feed_prefix)


def _order_policy(name, lookahead=True):
    if name == "stack-singleton":
        return OrderPolicy.singleton_avoiding(lookahead=lookahead)
    return OrderPolicy.longest_feasible(lookahead=lookahead)

@_add_command("train", "count a corpus and write the model document")
def cmd_train(args):
    if args.corpus is None or args.K is None:
        raise ValueError("train needs --corpus and -K")
    corpus = parse_corpus(_read(args.corpus), args.K)
    counts = count_contexts(corpus, args.K)
    _write_output(args.output, counts.dumps())
    return EXIT_CODES["ok"]

@_add_command("compile", "compile a constraint spec into an acceptor and masks")
def cmd_compile(args):
    problem = _Problem(args)
    doc = {"acceptor": problem.acceptor.to_document(),
           "horizon": problem.horizon,
           "masks": {str(t): sorted(problem.mask.allowed(t))
                     for t in problem.mask.positions()}}
    _write_output(args.output, _json(doc))
    return EXIT_CODES["ok"]

@_add_command("sample", "draw constrained samples")
def cmd_sample(args):
    problem = _Problem(args)
    rng = make_rng(args.seed)
    results = []
    if args.policy == "fixed":
        graph = problem.graph(lazy=True)
        start = problem.start(graph)
        table = backward_pass(graph, problem.acceptor, problem.mask,
                              start=start)
        value, _ = partition_function(table, start)
        if value == 0:
            raise InfeasibleError("Z = 0: the constraints admit no sequence")
        state = start[1]
        for _ in range(args.samples):
            results.append(sample_sequence(graph, problem.acceptor,
                                           problem.mask, table, start, rng))
    else:
        stack = prepare_stack(problem.counts, problem.max_order, None,
                              problem.acceptor, problem.mask,
                              prefix=problem.prefix,
                              feed_prefix=problem.feed_prefix)
        policy = _order_policy(args.policy)
        state = stack.start_q()
        for _ in range(args.samples):
            result = run_policy(stack, policy, seed=rng)
            if result.position is not None:
                raise InfeasibleError("the policy failed at position {}".format(
                    result.position))
            results.append(result)
    for result in results:
        if not validate_sequence(result.sequence, problem.acceptor,
                                 problem.mask, state):
            raise InvariantError("sample {} violates the constraints".format(
                result.sequence))
    lines = []
    for index, result in enumerate(results):
        if args.format == "jsonl":
            lines.append(json.dumps({"seq": result.sequence,
                                     "orders": result.orders,
                                     "seed": args.seed, "rng": RNG_ALGORITHM,
                                     "index": index}))
        else:
            lines.append(" ".join(str(y) for y in result.sequence))
    _write_output(args.output, "\n".join(lines) + "\n")
    return EXIT_CODES["ok"]

def _exactness(counts, max_order, acceptor, mask, prefix, samples, rng,
               budget, tolerance, feed_prefix=False):
    exact = enumerate_conditional(counts, max_order, acceptor, mask,
                                  prefix=prefix, budget=budget,
                                  feed_prefix=feed_prefix)
    graph = build_context_graph(counts, max_order, lazy=True)
    start = initial_state(graph, acceptor, prefix, feed_prefix)
    table = backward_pass(graph, acceptor, mask, start=start)
    value, scale = partition_function(table, start)
    z_bp = float(value) * math.exp(scale)
    bp = conditional_distribution(graph, acceptor, mask, table, start,
                                  budget=budget)
    z_brute = float(exact.z)
    violations = 0
    tv_empirical = None
    if value > 0 and samples:
        drawn = []
        for _ in range(samples):
            sequence = sample_sequence(graph, acceptor, mask, table, start,
                                       rng).sequence
            if not validate_sequence(sequence, acceptor, mask, start[1]):
                violations += 1
            drawn.append(sequence)
        tv_empirical = tv_distance(exact.as_floats(),
                                   empirical_distribution(drawn))
    stats = product_stats(graph, acceptor, mask, start=start)
    delta = abs(z_brute - z_bp)
    tv_bp = tv_distance(exact.as_floats(), bp)
    passed = (delta <= tolerance * z_brute and tv_bp <= tolerance
              and violations == 0)
    return ExactnessReport(
        z_brute=z_brute, z_brute_exact=str(exact.z), z_bp=z_bp,
        delta_z=delta, tv_exact_bp=tv_bp, tv_exact_empirical=tv_empirical,
        samples=samples if value > 0 else 0, violations=violations,
        contexts=stats.contexts, context_edges=stats.context_edges,
        reach_states=stats.reach_states, time_states=stats.time_states,
        reach_edges=stats.reach_edges, passed=passed)

@_add_command("exactness", "compare inference with brute-force enumeration")
def cmd_exactness(args):
    rng = make_rng(args.seed)
    if args.random:
        reports = []
        for i in range(args.random):
            inst = random_instance(rng)
            report = _exactness(inst.counts, inst.max_order, inst.acceptor,
                                inst.mask, inst.prefix,
                                args.samples if args.samples is not None else 200,
                                rng, args.budget, args.tolerance)
            report.instance = i
            reports.append(report)
        failed = [r.instance for r in reports if not r.passed]
        doc = {"instances": len(reports), "failed": failed,
               "max_delta_z": max(r.delta_z for r in reports),
               "max_tv_exact_bp": max(r.tv_exact_bp for r in reports),
               "violations": sum(r.violations for r in reports),
               "passed": not failed}
    else:
        problem = _Problem(args)
        samples = args.samples if args.samples is not None else 20000
        doc = _exactness(problem.counts, problem.max_order, problem.acceptor,
                         problem.mask, problem.prefix, samples, rng,
                         args.budget, args.tolerance,
                         problem.feed_prefix).to_document()
    _write_output(args.output, _json(doc))
    if not doc["passed"]:
        raise CheckFailed("exactness check failed")
    return EXIT_CODES["ok"]

def _median_seconds(func, repeats, warmup):
    for _ in range(warmup):
        func()
    timings = []
    for _ in range(repeats):
        began = time.perf_counter()
        func()
        timings.append(time.perf_counter() - began)
    return statistics.median(timings)

@_add_command("bench", "measure product sizes and timings per order")
def cmd_bench(args):
    if args.corpus:
        corpus = parse_corpus(_read(args.corpus))
    else:
        corpus = synthetic_corpus(args.tokens, args.alphabet_size, args.seed)
    max_order = args.K or 6
    horizon = args.horizon or 16
    alphabet = corpus.alphabet
    if args.maxorder > 0:
        acceptor = compile_maxorder(corpus, args.maxorder, alphabet)
    else:
        acceptor = accept_all(alphabet)
    mask = PositionalMask(horizon)
    prefix = parse_symbols(args.prefix)
    rng = make_rng(args.seed)
    rows = []
    policy = OrderPolicy.longest_feasible()
    for k in range(1, max_order + 1):
        counts = count_contexts(corpus, k)
        graph = build_context_graph(counts, k)
        start = initial_state(graph, acceptor, prefix)
        seconds = _median_seconds(
            lambda: backward_pass(graph, acceptor, mask, start=start),
            args.repeats, args.warmup)
        stats = product_stats(graph, acceptor, mask, start=start)
        violations = 0
        failures = 0
        sample_ms = float("nan")
        if args.samples:
            # samples come from the stack G_1..G_k, which backs off to the
            # orders where the constraints stay satisfiable
            stack = prepare_stack(counts, k, acceptor=acceptor, mask=mask,
                                  prefix=prefix)
            began = time.perf_counter()
            for _ in range(args.samples):
                result = run_policy(stack, policy, seed=rng)
                if result.position is not None:
                    failures += 1
                elif not validate_sequence(result.sequence, acceptor, mask):
                    violations += 1
            sample_ms = (time.perf_counter() - began) * 1000 / args.samples
        if failures:
            logger.warning("[bench] K=%d: the policy failed on %d of %d runs",
                           k, failures, args.samples)
        rows.append(BenchRow(K=k, contexts=stats.contexts,
                             context_edges=stats.context_edges,
                             acceptor_states=acceptor.state_count,
                             reach_states=stats.reach_states,
                             reach_edges=stats.reach_edges,
                             full_bound=stats.full_bound,
                             dense_lift=dense_lift_size(alphabet, k),
                             bp_seconds="{:.6f}".format(seconds),
                             sample_ms="{:.4f}".format(sample_ms),
                             violations=violations))
    buff = io.StringIO()
    writer = csv.DictWriter(buff, fieldnames=BENCH_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    _write_output(args.output, buff.getvalue())
    if any(row.violations for row in rows):
        raise InvariantError("bench samples violated the constraints")
    return EXIT_CODES["ok"]

@_add_command("augment-check", "compare virtual and materialized augmentation")
def cmd_augment_check(args):
    if not args.corpus or args.K is None:
        raise ValueError("augment-check needs --corpus and -K")
    corpus = parse_corpus(_read(args.corpus), args.K)
    if args.group:
        group = TransformGroup.from_document(json.loads(_read(args.group)))
    else:
        group = TransformGroup.identity()
    closure = close_alphabet(corpus, group)
    acceptor, mask = accept_all(closure), None
    if args.constraints:
        spec = ConstraintSpec.loads(_read(args.constraints))
        acceptor, mask = compile_spec(spec, closure, corpus)
    report = check_equivalence(
        corpus, args.K, group, acceptor, mask, args.horizon or 1,
        parse_symbols(args.prefix), _order_policy(args.policy),
        budget=args.budget)
    _write_output(args.output, _json(report.to_document()))
    if not report.passed:
        raise CheckFailed("virtual and materialized pipelines differ")
    return EXIT_CODES["ok"]

@_add_command("mass", "compute the success mass of an order-stack policy")
def cmd_mass(args):
    problem = _Problem(args)
    stack = prepare_stack(problem.counts, problem.max_order, None,
                          problem.acceptor, problem.mask,
                          prefix=problem.prefix,
                          feed_prefix=problem.feed_prefix)
    policy = _order_policy(args.policy, lookahead=not args.no_lookahead)
    result = success_mass(stack, policy, mode=args.mode, trials=args.trials,
                          seed=args.seed, budget=args.budget)
    doc = {"mass": float(result.mass), "mode": result.mode}
    if result.ci is not None:
        doc["ci"] = result.ci
        doc["stderr"] = result.stderr
    _write_output(args.output, _json(doc))
    return EXIT_CODES["ok"]


def build_parser():
    """Return the :class:`argparse.ArgumentParser` of the command line."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--corpus", help="corpus text file")
    common.add_argument("--model", help="model document written by train")
    common.add_argument("--constraints", help="constraint spec document")
    common.add_argument("-K", type=_positive, help="maximum context order")
    common.add_argument("--horizon", type=_positive,
                        help="sequence length when no spec gives one")
    common.add_argument("--prefix", default="",
                        help='conditioning prefix, such as "0 1"')
    common.add_argument("--feed-prefix", action="store_true",
                        help="run the prefix through the acceptor first")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=_positive, default=_budget_default(),
                        help="enumeration and DP budget")
    common.add_argument("--output", "-o", help="output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="contextbp",
        description="Exact constrained generation for variable-order "
                    "Markov models.")
    parser.add_argument("--version", action="version",
                        version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    parsers = {}
    for name in _COMMANDS:
        parsers[name] = sub.add_parser(name, parents=[common],
                                       help=_COMMANDS[name][1])
    for name in ("sample", "augment-check", "mass"):
        choices = ("fixed", "stack", "stack-singleton")
        if name != "sample":
            choices = choices[1:]
        parsers[name].add_argument("--policy", choices=choices,
                                   default=choices[0])
    parsers["sample"].add_argument("--samples", type=_positive, default=1)
    parsers["sample"].add_argument("--format", choices=("text", "jsonl"),
                                   default="text")
    parsers["exactness"].add_argument("--samples", type=int, default=None)
    parsers["exactness"].add_argument("--random", type=int, default=0,
                                      help="run N random tiny instances")
    parsers["exactness"].add_argument("--tolerance", type=float, default=1e-9)
    parsers["bench"].add_argument("--samples", type=int, default=100)
    parsers["bench"].add_argument("--repeats", type=_positive, default=5)
    parsers["bench"].add_argument("--warmup", type=int, default=1)
    parsers["bench"].add_argument("--tokens", type=_positive, default=600)
    parsers["bench"].add_argument("--alphabet-size", type=_positive, default=25)
    parsers["bench"].add_argument("--maxorder", type=int, default=5,
                                  help="MAXORDER M; 0 accepts everything")
    parsers["mass"].add_argument("--mode", choices=("exact", "monte_carlo"),
                                 default="exact")
    parsers["mass"].add_argument("--trials", type=_positive, default=10000)
    parsers["mass"].add_argument("--no-lookahead", action="store_true",
                                 help="filter candidates by the mask only")
    for name in ("compile", "sample", "exactness", "mass"):
        parsers[name].add_argument("--maxorder", type=_positive, default=None)
    parsers["augment-check"].add_argument("--group",
                                          help="transform group document")
    return parser

_ERRORS = [
    (CheckFailed, "check_failed"),
    (InfeasibleError, "infeasible"),
    (BudgetExceededError, "budget"),
    (InvariantError, "invariant"),
    (ContextBPError, "parse_error"),
    (OSError, "io_error"),
    (ValueError, "usage"),
]

def main(argv=None):
    """Run the command line; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    handler = _COMMANDS[args.command][0]
    try:
        logger.debug("[cli] %r", _config(args))
        return handler(args)
    except Exception as exc:
        for kind, name in _ERRORS:
            if isinstance(exc, kind):
                sys.stderr.write("contextbp {}: {}\n".format(args.command, exc))
                return EXIT_CODES[name]
        raise

if __name__ == "__main__":
    sys.exit(main())
