"""Exact q-series workbench for Appell-Lerch sums, theta products and their dissections."""

__version__ = "0.1.0"
