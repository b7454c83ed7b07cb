"""Rewriting codes for cells whose levels only go up between erasures."""

__version__ = "0.1.0"

from .cells import CellState, new_state
from .codes import BaseRepCode, ModularCode, RewritingCode, SplitCode, complete_graph_code
from .graphs import DataGraph, bidirected_tree, complete_graph, debruijn_graph, hypercube_graph
from .robust import ParametricCode, RobustCode, sample_robust_code
from .trajectory import TrajectoryCode, plan_layout

__all__ = [
    "CellState", "new_state", "RewritingCode", "ModularCode", "BaseRepCode", "SplitCode",
    "complete_graph_code", "DataGraph", "complete_graph", "hypercube_graph", "debruijn_graph",
    "bidirected_tree", "ParametricCode", "RobustCode", "sample_robust_code", "TrajectoryCode",
    "plan_layout",
]
