"""Disjoint pairs of S-permutation matrices: exact counts and brute-force oracles."""

__version__ = "0.1.0"
