"""Decide whether a graph manifold given as a tree of Seifert pieces is an L-space."""
__version__ = "0.1.0"
