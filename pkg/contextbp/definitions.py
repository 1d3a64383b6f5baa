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
Contains numeric thresholds, default budgets and exit codes shared by the
rest of the package.

Everything here is a plain module constant; functions that use one of these
values also accept a keyword argument overriding it.
"""

__all__ = ["is_exit_code", "exit_code_name"]

# Layer maxima below this are rescaled by a power of two.
RESCALE_THRESHOLD = 1e-280

# Largest allowed |sum - 1| for a freshly built outgoing row.
NORMALIZATION_TOLERANCE = 1e-9

# Reported row-sum tolerance for MLE rows (sum of a normalized integer row).
ROW_SUM_TOLERANCE = 1e-12

DEFAULT_ENUMERATION_BUDGET = 10 ** 6
DEFAULT_EDGE_BUDGET = 10 ** 6
DEFAULT_STATE_BUDGET = 10 ** 6

DEFAULT_SINGLETON_RULE = "1/(k+1)"

RNG_ALGORITHM = "numpy.PCG64"

BENCH_HEADER = ["K", "contexts", "context_edges", "acceptor_states",
                "reach_states", "reach_edges", "full_bound", "dense_lift",
                "bp_seconds", "sample_ms", "violations"]

EXIT_CODES = {
    "ok": 0,
    "io_error": 1,
    "usage": 2,
    "parse_error": 3,
    "infeasible": 4,
    "budget": 5,
    "invariant": 6,
    "check_failed": 7,
}

def is_exit_code(code):
    """Return whether the given integer is one of our documented exit codes."""
    return code in EXIT_CODES.values()

def exit_code_name(code):
    """Return the symbolic name of an exit code, or ``None``."""
    for name, value in EXIT_CODES.items():
        if value == code:
            return name
    return None
