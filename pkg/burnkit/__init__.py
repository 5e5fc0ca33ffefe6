"""Graph burning: exact and heuristic solvers, the CMCP reduction and ILP export."""

__version__ = "0.1.0"
