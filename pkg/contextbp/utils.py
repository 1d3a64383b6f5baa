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
This module contains accessory functions for other parts of the library. Most
users won't need stuff from here.
"""

import numpy as np

from .definitions import RNG_ALGORITHM

__all__ = ["parse_symbols", "make_rng", "rng_metadata", "suffix"]

def parse_symbols(value):
    """Return a tuple of integer symbols for *value*, allowing multiple types.

    Strings (whitespace-separated decimal integers, such as ``"0 1"``), bytes
    (decoded as UTF-8), single integers, ``None`` (the empty sequence), file
    objects and iterables of integers or numeric strings are supported. This
    is how prefixes, anchors and patterns are accepted throughout the library
    and the command line.
    """
    if isinstance(value, tuple) and all(type(x) is int for x in value):
        symbols = value
    elif isinstance(value, str):
        try:
            symbols = tuple(int(tok) for tok in value.split())
        except ValueError:
            raise ValueError("Not a symbol sequence: {!r}".format(value))
    elif isinstance(value, bytes):
        return parse_symbols(value.decode("utf8"))
    elif isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        symbols = (int(value),)
    elif value is None:
        return ()
    elif hasattr(value, "read"):
        return parse_symbols(value.read())
    else:
        try:
            symbols = tuple(_to_symbol(item) for item in value)
        except TypeError:
            error = "Needs string, bytes, int, file, None, or iterable of ints, but got {0}: {1}"
            raise ValueError(error.format(type(value).__name__, value))
    for symbol in symbols:
        if symbol < 0:
            raise ValueError("Symbols must be nonnegative, got {}".format(symbol))
    return symbols

def _to_symbol(item):
    if isinstance(item, bool):
        raise TypeError(item)
    if isinstance(item, (int, np.integer)):
        return int(item)
    if isinstance(item, str):
        try:
            return int(item)
        except ValueError:
            raise ValueError("Not a symbol: {!r}".format(item))
    raise TypeError(item)

def make_rng(seed=None):
    """Return a :class:`numpy.random.Generator` built from *seed*.

    *seed* may be ``None`` (fresh entropy), an integer, or an existing
    generator, which is returned unchanged so that several calls can share
    one stream.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))

def rng_metadata(seed):
    """Return the metadata dict stored next to sampled output."""
    return {"seed": seed, "rng": RNG_ALGORITHM}

def suffix(sequence, length):
    """Return the last *length* items of *sequence* as a tuple."""
    if length <= 0:
        return ()
    return tuple(sequence[-length:])
