"""Finite-level models of p-adic principal series of GL2 and GL3."""

__version__ = "0.1.0"
