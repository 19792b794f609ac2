"""Exact combinatorial Hodge theory and local Euler cocycles of PL sphere bundles."""

__version__ = "0.1.0"
