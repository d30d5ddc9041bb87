"""Finite models of covering games on ideals and their tactic reductions."""

__version__ = "0.1.0"
