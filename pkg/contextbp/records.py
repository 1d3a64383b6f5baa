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
This module contains the record types returned by the inference, policy and
checking functions. A record is a dict with attribute access, so it prints
readably and serializes directly to JSON with :func:`json.dumps`.
"""

__all__ = ["Record"]

class Record(dict):
    """A record stores the named fields of one result."""

    def __repr__(self):
        args = []
        for key, value in self.items():
            if isinstance(value, (list, tuple)) and len(value) > 20:
                args.append(key + "=" + repr(list(value[:17])) + "...")
            else:
                args.append(key + "=" + repr(value))
        return "{}({})".format(type(self).__name__, ", ".join(args))

    def __eq__(self, other):
        return isinstance(other, type(self)) and dict.__eq__(self, other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __getattr__(self, key):
        return self.get(key)

    def __setattr__(self, key, value):
        self[key] = value

    def __delattr__(self, key):
        del self[key]

    def to_document(self):
        """Return a plain JSON-compatible dict copy of this record."""
        return _plain(self)


def _plain(value):
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def make(name):
    """Create a new Record class using ``type()`` and add it to ``__all__``."""
    __all__.append(name)
    return type(name, (Record,), {})

SampleResult = make("SampleResult")             # sequence, orders, trace
PolicyFailure = make("PolicyFailure")           # position, sequence, orders
StepTrace = make("StepTrace")                   # t, state, q, symbol, ...
StepResult = make("StepResult")                 # symbol, order, states, q
ProductStats = make("ProductStats")
ExactnessReport = make("ExactnessReport")
EquivalenceReport = make("EquivalenceReport")
SuccessMass = make("SuccessMass")               # mass, mode, ci
BenchRow = make("BenchRow")
RunConfig = make("RunConfig")
Instance = make("Instance")

del make
