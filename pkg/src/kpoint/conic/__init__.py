from .program import (DIAG, PSD, Block, ConicError, ConicProgram, ProgramBuilder,
                      MAX_CONSTRAINTS, MAX_PSD_BLOCK)
from .solution import (INFEASIBLE, ITERATION_LIMIT, NUMERICAL_TROUBLE, OPTIMAL, UNBOUNDED,
                       ResidualReport, Solution, check_solution)
from .ipm import SolverOptions, solve_conic
from .simplex import RationalSolution, simplex_standard, solve_lp_exact
from .sdpa import export_sdpa, import_sdpa

__all__ = ["DIAG", "PSD", "Block", "ConicError", "ConicProgram", "ProgramBuilder", "MAX_CONSTRAINTS",
           "MAX_PSD_BLOCK", "INFEASIBLE", "ITERATION_LIMIT", "NUMERICAL_TROUBLE", "OPTIMAL", "UNBOUNDED",
           "ResidualReport", "Solution", "check_solution", "SolverOptions", "solve_conic", "RationalSolution",
           "simplex_standard", "solve_lp_exact", "export_sdpa", "import_sdpa"]
