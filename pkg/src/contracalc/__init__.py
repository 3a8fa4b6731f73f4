"""Exact comodules and contramodules over coalgebras and adic rings."""

__version__ = "0.1.0"
