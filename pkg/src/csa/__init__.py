"""Exact computations with central simple algebras, armatures and crossed products."""

__version__ = "0.1.0"
