"""commtile: communication lower bounds and optimal tilings for
dependence-free loop nests with linear array accesses.

Given the integer access maps of a loop nest, the library computes the
communication exponent via an exact rational LP over subgroup rank
constraints, turns an optimal dual solution into a parallelepiped tile that
tiles the computation lattice, and certifies every claim with brute-force
enumeration at desk scale.
"""

from .constraints import (
    Completeness,
    ConstraintSet,
    Method,
    generate_constraints,
    is_coordinate_projection,
)
from .flagify import Flag, extremeness, flagify_dual
from .intlinalg import (
    IntMatrix,
    SnfResult,
    Subgroup,
    hnf,
    image_rank,
    kernel_basis,
    snf,
    subgroup_intersect,
    subgroup_sum,
)
from .lp import (
    DualVector,
    GammaResult,
    InfeasiblePrimalError,
    PrimalSolution,
    compute_gamma,
    eval_dual,
    optimal_split,
    simplex_solve,
    solve_dual,
    solve_primal,
)
from .nestdsl import parse_loop_nest
from .problem import HblProblem, ProblemDocument, document_from_json
from .tiler import (
    Analysis,
    FlagDecomposition,
    TileGroup,
    TileSpec,
    TilingResult,
    analyze,
    build_tiling,
    enumerate_tile,
    flag_decompose,
    plan_tiling,
    rank_d_minus_one_tiling,
    rank_one_tiling,
)
from .verifier import (
    VerificationReport,
    check_cover,
    check_exact_optimality,
    check_hbl_bound,
    count_images,
    fit_exponent,
    run_verification,
)

__version__ = "0.1.0"
