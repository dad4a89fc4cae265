"""Unipotent classes of Sp(2l, 2) and their Jordan types on irreducible modules."""

__version__ = "0.1.0"
