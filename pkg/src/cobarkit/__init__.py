"""Exact bar/cobar computations for operadic coalgebras over Q and F_p."""

__version__ = "0.1.0"
