"""Quasi-entropies, monotone metrics and randomized certification of their inequalities."""

__version__ = "0.1.0"
