"""Online weighted tree augmentation: solvers, oracles, and harness."""

from .decomposition import (DecompPath, ProjectedLink,
                            RootedPathDecomposition, decompose,
                            default_width_bound, project, width)
from .errors import (BadInputError, InfeasibleInstanceError,
                     InvariantViolationError, OracleSizeError, WtapError)
from .fractional import FractionalPathSolver, band_cap, phase_of
from .instance import (Link, Request, TreeInstance, TreePath,
                       format_instance, load_instance, parse_instance,
                       round_costs)
from .oracles import (OracleResult, opt_path_dp, opt_path_enum,
                      opt_tree_enum, verify_dual_feasible, verify_nice)
from .path_online import PathSolver, ServeRecord, run_sequence
from .pruning import (MinimalPathInstance, PathLink, PruneRecord,
                      build_minimal_instance, check_minimal,
                      path_instance_from_tree, replacement_cover)
from .tree_online import PairReport, TreeSolver

__version__ = "0.1.0"

__all__ = [
    "BadInputError",
    "DecompPath",
    "FractionalPathSolver",
    "InfeasibleInstanceError",
    "InvariantViolationError",
    "Link",
    "MinimalPathInstance",
    "OracleResult",
    "OracleSizeError",
    "PairReport",
    "PathLink",
    "PathSolver",
    "ProjectedLink",
    "PruneRecord",
    "Request",
    "RootedPathDecomposition",
    "ServeRecord",
    "TreeInstance",
    "TreePath",
    "TreeSolver",
    "WtapError",
    "band_cap",
    "build_minimal_instance",
    "check_minimal",
    "decompose",
    "default_width_bound",
    "format_instance",
    "load_instance",
    "opt_path_dp",
    "opt_path_enum",
    "opt_tree_enum",
    "parse_instance",
    "path_instance_from_tree",
    "phase_of",
    "project",
    "replacement_cover",
    "round_costs",
    "run_sequence",
    "verify_dual_feasible",
    "verify_nice",
    "width",
]
