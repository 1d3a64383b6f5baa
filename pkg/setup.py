#! /usr/bin/env python
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


import re
import sys

if sys.version_info < (3, 7):
    raise RuntimeError("contextbp needs Python 3.7+")

from setuptools import setup, find_packages

# read without importing the package
with open("contextbp/__init__.py", encoding="utf-8") as fp:
    __version__ = re.search(r'^__version__ = "(.*)"', fp.read(), re.M).group(1)

with open("README.rst", encoding="utf-8") as fp:
    long_docs = fp.read()

setup(
    name = "contextbp",
    packages = find_packages(exclude=("tests",)),
    install_requires = ["numpy>=1.17", "scipy>=1.7"],
    entry_points = {"console_scripts": ["contextbp = contextbp.cli:main"]},
    test_suite = "tests",
    version = __version__,
    author = "The contextbp developers",
    description = "Exact constrained generation for variable-order Markov models.",
    long_description = long_docs,
    keywords = "markov backoff variable-order constrained sampling belief propagation automata",
    license = "MIT License",
    python_requires = ">=3.7",
    classifiers = [
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics"
    ],
)
