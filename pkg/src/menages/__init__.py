"""Automatic enumeration of permutations with restricted positions."""
