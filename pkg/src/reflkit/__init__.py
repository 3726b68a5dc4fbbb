"""Reflective interpreter kit: universal interpretation, specialization,
self-reference and belief assignments over a small object language."""

__version__ = "0.1.0"
