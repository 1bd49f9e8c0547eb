"""Greedy search over Markov equivalence classes with the inclusion boundary neighbourhood."""
from .essential import (
    EssentialGraph,
    class_members,
    consistent_extension,
    essentialize,
    remove_line_fast,
    same_class,
    validate_essential,
)
from .graph import MixedGraph, VStructure, format_graph, parse_graph, skeleton, v_structures
from .neighbourhood import EnumerationLimits, Neighbour, inclusion_boundary
from .scoring import BDeu, BIC, Dataset, Scorer, local_score, read_csv
from .search import SearchConfig, hill_climb

__all__ = [
    "BDeu", "BIC", "Dataset", "EnumerationLimits", "EssentialGraph", "MixedGraph",
    "Neighbour", "Scorer", "SearchConfig", "VStructure", "class_members",
    "consistent_extension", "essentialize", "format_graph", "hill_climb",
    "inclusion_boundary", "local_score", "parse_graph", "read_csv", "remove_line_fast",
    "same_class", "skeleton", "v_structures", "validate_essential",
]
