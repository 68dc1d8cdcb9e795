"""Minimal separability structure, potentials and decompositions of finite games."""

__version__ = "0.1.0"
