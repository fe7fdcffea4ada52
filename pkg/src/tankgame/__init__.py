"""Deterministic tank-combat simulation with alpha-beta path planning."""
__version__ = "0.1.0"
