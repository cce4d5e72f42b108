"""
PyGTaylor: generalized Taylor expansions built from the Cauchy kernel of a
linear differential operator.
"""

from .cli import main

__version__ = "0.1.0"
