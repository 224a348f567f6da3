"""Exact toolkit for reflexive pairs, regular subdivisions and their dual models."""

__version__ = "0.1.0"
