"""Existential first-order logic on sparse random graphs: exact tools and experiments."""

__version__ = "0.1.0"
