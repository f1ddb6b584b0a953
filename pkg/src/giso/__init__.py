"""Exact string and graph isomorphism through permutation-group reductions."""
from .coset import IsoCoset
from .graphs import Graph, encode_gi_as_si, parse_graph, solve_gi
from .perm import PermGroup, Permutation, TrackedHom
from .solver import BudgetExceeded, Solver, SolverConfig, solve_iso

__all__ = [
    "BudgetExceeded", "Graph", "IsoCoset", "PermGroup", "Permutation", "Solver", "SolverConfig", "TrackedHom",
    "encode_gi_as_si", "parse_graph", "solve_gi", "solve_iso",
]
__version__ = "0.1.0"
