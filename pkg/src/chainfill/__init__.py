"""Graph-manifold notation, moves, homology and Dehn-filling bookkeeping
for the minimally twisted chain-link complements."""

__version__ = "0.1.0"
