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
This module contains the exceptions raised by contextbp. All of them derive
from :exc:`.ContextBPError`; the ones signalling bad input also derive from
:exc:`ValueError`, so callers that only care about "bad value" can catch that.
"""

__all__ = ["ContextBPError", "CorpusError", "ConstraintError", "GraphError",
           "TransformError", "BudgetExceededError", "InfeasibleError",
           "InvariantError"]

class ContextBPError(Exception):
    """Base class for every error raised by this package."""


class CorpusError(ContextBPError, ValueError):
    """Raised for malformed corpus text or model documents.

    *lineno*, when known, is the 1-based line on which parsing failed; it is
    prefixed to the message.
    """
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = "line {}: {}".format(lineno, message)
        super(CorpusError, self).__init__(message)
        self.lineno = lineno


class ConstraintError(ContextBPError, ValueError):
    """Raised for malformed or infeasible constraint specifications."""


class GraphError(ContextBPError, ValueError):
    """Raised when a context graph cannot be built or queried."""


class TransformError(ContextBPError, ValueError):
    """Raised when a transform group is not a group of bijections."""


class BudgetExceededError(ContextBPError):
    """Raised when an enumeration or exact DP would exceed its budget."""
    def __init__(self, what, budget, required):
        msg = "{} needs {} units, over the budget of {}".format(
            what, required, budget)
        super(BudgetExceededError, self).__init__(msg)
        self.budget = budget
        self.required = required


class InfeasibleError(ContextBPError):
    """Raised when sampling is requested from a zero-mass problem."""


class InvariantError(ContextBPError):
    """Exception raised when an internal invariant is violated.

    This does not mean that the input was bad; bad input raises one of the
    other errors. It means the library caught itself in an impossible state
    (for example, a zero total weight while sampling a problem whose partition
    function is positive). Its appearance indicates a bug.
    """
    def __init__(self, extra):
        msg = "This is a bug and should be reported. Info: {}.".format(extra)
        super(InvariantError, self).__init__(msg)
