"""Tactic builders and reductions between game variants."""
