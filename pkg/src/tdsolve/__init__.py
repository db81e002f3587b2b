"""Exact Dominating Set, Vertex Cover and 3-Coloring on treedepth decompositions."""

from .baseline import (ClassicDP, color3_branch, domset_classic_dp, oracle_3col, oracle_domset,
                       oracle_vc, vc_branch)
from .branch import (BranchSolver, domset_rec, enumerate_partitions, find_min_solution,
                     solve_branch)
from .graph import (BoundariedGraph, Graph, GraphFormatError, closed_neighborhood, glue,
                    glue_all, parse_graph, read_graph, write_graph)
from .hybrid import HybridSolver, domset_table, solve_hybrid
from .stats import INF, SolveStats
from .tables import CostTable, convolve, convolve_fast, convolve_naive
from .treedepth import (DecompositionError, PathIndex, TreedepthDecomposition,
                        chain_decomposition, dfs_decomposition, exact_treedepth_small,
                        parse_decomposition, read_decomposition, validate, write_decomposition)

__version__ = "0.1.0"
