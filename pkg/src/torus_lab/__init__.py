"""Torus Lab.

Strings, bands, g-vectors, component graphs, Markov numbers, Farey points
and snake graphs for the Jacobian algebras of the once-punctured torus,
with a verification graph that cross-checks them.
"""

from torus_lab.graph import graph

__all__ = ["graph"]
