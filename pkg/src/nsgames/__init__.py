"""Non-signalling games: construction, classification, and perfect-strategy
solvers across the deterministic / local / quantum-relaxation /
non-signalling hierarchy."""

from .bcs import (LinearBCS, OperatorSolution, Presentation, bcs_game,
                  classical_satisfiable, correlation_from_rep, magic_square,
                  solution_group_presentation, strategy_from_operator_solution,
                  verify_operator_solution, verify_representation)
from .errors import (CapacityError, FormatError, InvalidSolutionError,
                     NoPerfectStrategyError, NsGamesError, ShapeError)
from .game import (ClassificationReport, Correlation, Game, classify,
                   harder_than, is_nonsignalling, is_perfect_strategy,
                   support_zeros)
from .graphs import (EquitablePartition, Graph, chromatic_cover,
                     chromatic_number, coarsest_equitable_partition,
                     coloring_game, common_cep, complete_graph, cycle_graph,
                     disjoint_union, empty_graph, homomorphism_game,
                     isomorphism_game, path_graph, synchronicity_game,
                     walk_implied_zeros)
from .lp import LinearProgram, LpOutcome, lp_solve
from .npa import (MomentProblem, RelaxationOutcome, build_moment_problem,
                  dual_infeasibility_certificate, npa_feasible)
from .polytope import max_entry, ns_perfect_feasible, reflexive_cover_ns
from .strategies import (DeterministicStrategy, enumerate_deterministic_perfect,
                         has_deterministic_perfect, is_local,
                         local_decomposition, reflexive_cover_det)

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "ClassificationReport", "Correlation",
    "DeterministicStrategy", "EquitablePartition", "FormatError", "Game",
    "Graph", "InvalidSolutionError", "LinearBCS", "LinearProgram",
    "LpOutcome", "MomentProblem", "NoPerfectStrategyError", "NsGamesError",
    "OperatorSolution", "Presentation", "RelaxationOutcome", "ShapeError",
    "bcs_game", "build_moment_problem", "chromatic_cover", "chromatic_number",
    "classical_satisfiable", "classify", "coarsest_equitable_partition",
    "coloring_game", "common_cep", "complete_graph", "correlation_from_rep",
    "cycle_graph", "disjoint_union", "dual_infeasibility_certificate",
    "empty_graph", "enumerate_deterministic_perfect", "harder_than",
    "has_deterministic_perfect", "homomorphism_game", "is_local",
    "is_nonsignalling", "is_perfect_strategy", "isomorphism_game",
    "local_decomposition", "lp_solve", "magic_square", "max_entry",
    "npa_feasible", "ns_perfect_feasible", "path_graph",
    "reflexive_cover_det", "reflexive_cover_ns", "solution_group_presentation",
    "strategy_from_operator_solution", "support_zeros", "synchronicity_game",
    "verify_operator_solution", "verify_representation", "walk_implied_zeros",
]
