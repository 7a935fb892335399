"""Tile construction: product parallelepipeds, their tiling translations, the
flag decomposition feeding them, the two exactly-optimal special cases, and
the end-to-end planner.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .constraints import Completeness, ConstraintSet, generate_constraints, DEFAULT_MAX_CLOSURE
from .flagify import Flag, flagify_dual
from .intlinalg import IntMatrix, Subgroup, kernel_basis, snf, subgroup_intersect, subgroup_sum
from .lp import (
    DualVector,
    GammaResult,
    InfeasiblePrimalError,
    OPTIMAL,
    PrimalSolution,
    compute_gamma,
    eval_dual,
    solve_dual,
    solve_primal,
)
from .problem import HblProblem

DEFAULT_BUDGET = 10_000_000


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured point budget."""


class DependentElementsError(ValueError):
    """Tile elements are linearly dependent."""


class NotRankOneError(ValueError):
    pass


class NotRankDMinusOneError(ValueError):
    pass


class KernelsIntersectError(InfeasiblePrimalError):
    """All-maps kernel intersection is nontrivial: unbounded data reuse."""


class FewerMapsThanDimError(ValueError):
    """Fewer rank-one maps than lattice dimensions (their kernels must then
    intersect, so no finite-reuse tiling exists)."""


# paths a tiling can come from
EXACT_RANK_ONE = "exact-rank-one"
EXACT_RANK_DM1 = "exact-rank-d-minus-1"
ASYMPTOTIC_CUBE = "asymptotic-cube"
ASYMPTOTIC_KERNEL_SPAN = "asymptotic-kernel-span"
ASYMPTOTIC_FLAG = "asymptotic-flag"

EXACT_PATHS = (EXACT_RANK_ONE, EXACT_RANK_DM1)


def integer_nth_root(x: int, n: int) -> int:
    """Largest r >= 0 with r**n <= x (exact, Newton on integers)."""
    if x < 0 or n < 1:
        raise ValueError("nth root needs x >= 0, n >= 1")
    if x == 0:
        return 0
    if n == 1:
        return x
    r = 1 << ((x.bit_length() + n - 1) // n)
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def floor_power(m: int, k: Fraction) -> int:
    """floor(m ** k) for integer m >= 0 and positive rational k, computed
    exactly as the q-th integer root of m**p."""
    k = Fraction(k)
    if m < 0 or k <= 0:
        raise ValueError("floor_power needs m >= 0 and k > 0")
    return integer_nth_root(m**k.numerator, k.denominator)


# ---------------------------------------------------------------------------
# Tile specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TileGroup:
    elements: tuple[tuple[int, ...], ...]
    scaling: Fraction


@dataclass(frozen=True)
class TileSpec:
    """Independent generators grouped by memory-scaling exponent.

    The tile is the set of combinations sum a_ij * e_ij with
    0 <= a_ij < floor(memory ** scaling_i); group scalings must be positive
    and non-increasing, and all elements jointly independent.
    """

    dim: int
    groups: tuple[TileGroup, ...]
    memory: int

    def __post_init__(self):
        if self.memory < 1:
            raise ValueError("memory parameter must be a positive integer")
        if not self.groups:
            raise ValueError("at least one generator group is required")
        prev = None
        for g in self.groups:
            if g.scaling <= 0:
                raise ValueError("scalings must be positive")
            if prev is not None and g.scaling > prev:
                raise ValueError("group scalings must be non-increasing")
            prev = g.scaling
            for e in g.elements:
                if len(e) != self.dim:
                    raise ValueError("element length must equal ambient dimension")
        cols = self.element_columns()
        if cols:
            if IntMatrix.from_cols(cols).rank() != len(cols):
                raise DependentElementsError("tile elements must be jointly independent")

    def element_columns(self) -> list[tuple[int, ...]]:
        return [e for g in self.groups for e in g.elements]

    def element_scalings(self) -> list[Fraction]:
        return [g.scaling for g in self.groups for _ in g.elements]

    def counts(self) -> list[int]:
        return [floor_power(self.memory, g.scaling) for g in self.groups for _ in g.elements]

    def point_count(self) -> int:
        total = 1
        for c in self.counts():
            total *= c
        return total

    def with_memory(self, memory: int) -> "TileSpec":
        return TileSpec(self.dim, self.groups, memory)


@dataclass(frozen=True)
class TilingResult:
    """A tile plus the translation set that tiles Z^d.

    Translations are the Minkowski sum of the scaled generator lattice (t1),
    the free cokernel directions (t2), and the finite coset representatives
    (t3)."""

    spec: TileSpec
    t1: tuple[tuple[tuple[int, ...], int], ...]
    t2: tuple[tuple[int, ...], ...]
    t3: tuple[tuple[int, ...], ...]
    path: str
    requested_memory: int


@dataclass(frozen=True)
class FlagDecomposition:
    """Independent subgroups telescoping to a flag, with tail-sum scalings."""

    flag: Flag
    groups: tuple[Subgroup, ...]
    scalings: tuple[Fraction, ...]

    def to_tile_spec(self, memory: int) -> TileSpec:
        dim = self.flag.chain[0].dim
        tgs = tuple(
            TileGroup(tuple(g.generators()), s) for g, s in zip(self.groups, self.scalings)
        )
        return TileSpec(dim, tgs, memory)


def flag_decompose(y_flag: DualVector, flag: Flag) -> FlagDecomposition:
    """Split a flag-supported dual into independent subgroups Y_i with
    Y_1 + ... + Y_i equal to the i-th flag member, carrying tail-sum scalings.

    Complements are grown greedily from the canonical basis columns of each
    flag member, so the construction is deterministic and stays saturated.
    """
    values = y_flag.as_dict()
    if set(values) != set(flag.chain):
        raise ValueError("dual support must equal the flag members")
    dim = flag.chain[0].dim
    tails = []
    acc = Fraction(0)
    for u in reversed(flag.chain):
        acc += values[u]
        tails.append(acc)
    tails.reverse()

    groups = []
    cur_cols: list[tuple[int, ...]] = []
    cur_rank = 0
    for u in flag.chain:
        picked = []
        for c in u.basis.cols():
            cand = cur_cols + [c]
            r = IntMatrix.from_cols(cand).rank()
            if r > cur_rank:
                cur_cols.append(c)
                cur_rank = r
                picked.append(c)
        y_i = Subgroup.span(dim, picked)
        assert y_i.rank == len(picked)
        groups.append(y_i)
    # telescoping check: partial sums reproduce the flag
    partial = Subgroup.zero(dim)
    for y_i, u in zip(groups, flag.chain):
        partial = subgroup_sum(partial, y_i)
        assert partial == u
    return FlagDecomposition(flag, tuple(groups), tuple(tails))


# ---------------------------------------------------------------------------
# Algorithm: tile + translations
# ---------------------------------------------------------------------------


def build_tiling(spec: TileSpec, path: str = ASYMPTOTIC_FLAG, requested_memory: int | None = None) -> TilingResult:
    """Tile and translations from a spec via the Smith form of the element
    matrix: scaled generator lattice, free columns of U, and coset reps from
    the diagonal entries."""
    cols = spec.element_columns()
    d = spec.dim
    e = IntMatrix.from_cols(cols, nrows=d)
    if e.rank() != e.ncols:
        raise DependentElementsError("tile elements must be jointly independent")
    m = e.ncols
    counts = spec.counts()
    res = snf(e)
    diag = [res.d[i, i] for i in range(m)]
    assert all(x > 0 for x in diag)

    t1 = tuple((cols[j], counts[j]) for j in range(m))
    t2 = tuple(res.u.col(j) for j in range(m, d))

    reps: list[tuple[int, ...]] = []
    stack = [()]
    for di in diag:
        stack = [b + (v,) for b in stack for v in range(di)]
    u_head = [res.u.col(j) for j in range(m)]
    for b in stack:
        vec = [0] * d
        for j in range(m):
            for i in range(d):
                vec[i] += u_head[j][i] * b[j]
        reps.append(tuple(vec))
    return TilingResult(
        spec, t1, t2, tuple(reps), path,
        spec.memory if requested_memory is None else requested_memory,
    )


def enumerate_tile(spec: TileSpec, budget: int = DEFAULT_BUDGET):
    """Stream the tile's points (no duplicates by joint independence)."""
    if spec.point_count() > budget:
        raise BudgetExceededError(
            f"tile holds {spec.point_count()} points, over the budget of {budget}"
        )
    cols = spec.element_columns()
    counts = spec.counts()
    d = spec.dim
    if not cols:
        yield (0,) * d
        return
    digits = [0] * len(cols)
    cur = [0] * d
    total = spec.point_count()
    for _ in range(total):
        yield tuple(cur)
        j = len(cols) - 1
        while j >= 0:
            digits[j] += 1
            if digits[j] < counts[j]:
                for i in range(d):
                    cur[i] += cols[j][i]
                break
            back = digits[j] - 1
            digits[j] = 0
            for i in range(d):
                cur[i] -= back * cols[j][i]
            j -= 1
        if j < 0:
            break


# ---------------------------------------------------------------------------
# Exactly optimal constructions
# ---------------------------------------------------------------------------


def _all_map_rows(problem: HblProblem, skip: int) -> IntMatrix:
    rows = []
    for j, phi in enumerate(problem.maps):
        if j == skip:
            continue
        rows.extend(phi.rows())
    return IntMatrix.from_rows(rows)


def rank_one_tiling(problem: HblProblem, memory: int) -> TilingResult:
    """Tiling for all-rank-one access maps.

    With exactly d maps whose kernels intersect trivially the construction is
    exactly optimal: element i is the primitive generator of the intersection
    of all other kernels, with floor(M/d) steps along each.  With more than d
    maps (kernels still trivial) an O(M) cube is emitted, which is only
    asymptotically optimal.
    """
    if memory < 1:
        raise ValueError("memory must be >= 1")
    d = problem.dim
    n = problem.n_maps
    if any(phi.rank() != 1 for phi in problem.maps):
        raise NotRankOneError("every access map must have rank one")
    if n < d:
        raise FewerMapsThanDimError(
            f"{n} rank-one maps in Z^{d}: kernels necessarily intersect, data reuse is unbounded"
        )
    inter = kernel_basis(problem.maps[0])
    for phi in problem.maps[1:]:
        inter = subgroup_intersect(inter, kernel_basis(phi))
    if not inter.is_zero():
        raise KernelsIntersectError(
            "all kernels share a nonzero direction: unbounded data reuse"
        )

    if n > d:
        ident = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        spec = TileSpec(d, (TileGroup(tuple(ident), Fraction(1)),), memory)
        return build_tiling(spec, ASYMPTOTIC_CUBE, memory)

    elements = []
    for i in range(n):
        ker = kernel_basis(_all_map_rows(problem, i))
        assert ker.rank == 1
        elements.append(ker.basis.col(0))
    spec = TileSpec(d, (TileGroup(tuple(elements), Fraction(1)),), max(memory // d, 1))
    return build_tiling(spec, EXACT_RANK_ONE, memory)


def rank_d_minus_one_tiling(problem: HblProblem, memory: int) -> TilingResult:
    """Tiling for all-corank-one access maps (matrix multiply and friends).

    Exact when the number of maps equals the rank of the kernel span: the
    tile grows floor((M/k)^(1/(k-1))) steps along each primitive kernel
    generator.  Otherwise the kernel-span parallelepiped with scaling
    1/(k-1) is emitted, which is asymptotically optimal.
    """
    if memory < 1:
        raise ValueError("memory must be >= 1")
    d = problem.dim
    if d < 2:
        raise NotRankDMinusOneError("corank-one maps need dimension at least 2")
    if any(phi.rank() != d - 1 for phi in problem.maps):
        raise NotRankDMinusOneError("every access map must have rank d-1")
    kernels = [kernel_basis(phi) for phi in problem.maps]
    span = Subgroup.zero(d)
    for k in kernels:
        span = subgroup_sum(span, k)
    k = span.rank
    if k < 2:
        raise InfeasiblePrimalError(
            "all kernels coincide: that direction is collapsed by every map"
        )
    scaling = Fraction(1, k - 1)
    if problem.n_maps == k:
        elements = tuple(kk.basis.col(0) for kk in kernels)
        spec = TileSpec(d, (TileGroup(elements, scaling),), max(memory // k, 1))
        return build_tiling(spec, EXACT_RANK_DM1, memory)
    spec = TileSpec(d, (TileGroup(tuple(span.generators()), scaling),), memory)
    return build_tiling(spec, ASYMPTOTIC_KERNEL_SPAN, memory)


# ---------------------------------------------------------------------------
# End-to-end planning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Analysis:
    """Everything the LP pipeline learned about a problem."""

    problem: HblProblem
    constraints: ConstraintSet
    primal: PrimalSolution
    dual: DualVector
    flag_dual: DualVector
    flag: Flag
    decomposition: FlagDecomposition
    s_hbl: Fraction
    path: str
    gamma: GammaResult | None = None
    warnings: tuple[str, ...] = ()

    def tile_scalings(self) -> tuple[Fraction, ...]:
        out = []
        for g, s in zip(self.decomposition.groups, self.decomposition.scalings):
            out.extend([s] * g.rank)
        return tuple(out)


def _select_path(problem: HblProblem) -> str:
    d = problem.dim
    ranks = [phi.rank() for phi in problem.maps]
    if all(r == 1 for r in ranks) and problem.n_maps >= d:
        return EXACT_RANK_ONE if problem.n_maps == d else ASYMPTOTIC_CUBE
    if d >= 2 and all(r == d - 1 for r in ranks):
        kernels = [kernel_basis(phi) for phi in problem.maps]
        span = Subgroup.zero(d)
        for k in kernels:
            span = subgroup_sum(span, k)
        if span.rank == problem.n_maps:
            return EXACT_RANK_DM1
        if span.rank >= 2:
            return ASYMPTOTIC_KERNEL_SPAN
    return ASYMPTOTIC_FLAG


def analyze(problem: HblProblem, max_closure: int = DEFAULT_MAX_CLOSURE) -> Analysis:
    """Constraint generation, exact primal/dual solve, flag transform and
    decomposition; gamma and the memory split on the exactly-optimal paths."""
    constraints = generate_constraints(problem, max_closure)
    primal = solve_primal(problem, constraints)
    if primal.status != OPTIMAL:
        raise InfeasiblePrimalError(
            "the exponent LP is infeasible: some loop directions are collapsed "
            "by every access map, so data reuse is unbounded"
        )
    dual = solve_dual(problem, constraints)
    val, cs = eval_dual(dual, problem)
    assert val == primal.objective, "strong duality violated"
    assert all(c <= 1 for c in cs)
    y_flag, flag = flagify_dual(dual, problem)
    decomp = flag_decompose(y_flag, flag)

    warnings = []
    if constraints.completeness is Completeness.PARTIAL:
        warnings.append(
            "constraint closure was truncated: the reported exponent is a lower "
            "bound and the tiling is valid but possibly sub-optimal"
        )

    path = _select_path(problem)
    gamma = None
    if path in EXACT_PATHS:
        gamma = compute_gamma(problem, constraints, primal.objective)

    return Analysis(
        problem=problem,
        constraints=constraints,
        primal=primal,
        dual=dual,
        flag_dual=y_flag,
        flag=flag,
        decomposition=decomp,
        s_hbl=primal.objective,
        path=path,
        gamma=gamma,
        warnings=tuple(warnings),
    )


def tiling_for(problem: HblProblem, path: str, memory: int, decomposition: FlagDecomposition | None = None) -> TilingResult:
    """Construct the tiling for a memory size along an already-selected path."""
    if memory < 1:
        raise ValueError("memory must be >= 1")
    if path in (EXACT_RANK_ONE, ASYMPTOTIC_CUBE):
        return rank_one_tiling(problem, memory)
    if path in (EXACT_RANK_DM1, ASYMPTOTIC_KERNEL_SPAN):
        return rank_d_minus_one_tiling(problem, memory)
    if decomposition is None:
        decomposition = analyze(problem).decomposition
    return build_tiling(decomposition.to_tile_spec(memory), ASYMPTOTIC_FLAG, memory)


def plan_tiling(
    problem: HblProblem, memory: int, max_closure: int = DEFAULT_MAX_CLOSURE
) -> tuple[Analysis, TilingResult]:
    """Full pipeline: analyze, then construct the tiling for the given memory
    (dispatching to an exactly-optimal construction when one applies)."""
    analysis = analyze(problem, max_closure)
    tiling = tiling_for(problem, analysis.path, memory, analysis.decomposition)
    return analysis, tiling
