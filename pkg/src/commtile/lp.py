"""Exact rational LP: simplex engine, the rank-constraint primal/dual pair,
memory splits, and the entropy-optimal scaling constant.

Rationals are fractions.Fraction throughout (arbitrary precision, reduced,
positive denominator by construction).  The simplex uses Bland's rule, so it
terminates on every input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .constraints import ConstraintSet
from .intlinalg import Subgroup, image_rank
from .problem import HblProblem

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class InfeasiblePrimalError(RuntimeError):
    """The lower-bound LP admits no feasible exponents: some subgroup is
    collapsed by every access map, so data reuse is unbounded."""


@dataclass(frozen=True)
class LpResult:
    status: str
    x: tuple[Fraction, ...] | None
    objective: Fraction | None


def simplex_solve(c, rows, rhs, sense: str = "min") -> LpResult:
    """Solve min c.x st rows.x >= rhs (or max c.x st rows.x <= rhs), x >= 0.

    Exact two-phase tableau simplex with Bland's anti-cycling rule.
    Infeasible and unbounded outcomes are statuses, not exceptions.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    minimize = sense == "min"
    n = len(c)
    m = len(rows)
    for r in rows:
        if len(r) != n:
            raise ValueError("constraint row length mismatch")
    if len(rhs) != m:
        raise ValueError("rhs length mismatch")

    obj = [Fraction(v) for v in c]
    if not minimize:
        obj = [-v for v in obj]
    slack = Fraction(-1 if minimize else 1)

    # equality form rows: structural | slack, with nonnegative rhs
    ncols = n + m
    tab: list[list[Fraction]] = []
    b: list[Fraction] = []
    for i in range(m):
        row = [Fraction(v) for v in rows[i]] + [Fraction(0)] * m
        row[n + i] = slack
        bi = Fraction(rhs[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        tab.append(row)
        b.append(bi)

    basis: list[int] = []
    art_cols: list[int] = []
    for i in range(m):
        if tab[i][n + i] == 1:
            basis.append(n + i)
        else:
            j = ncols + len(art_cols)
            art_cols.append(j)
            basis.append(j)
    total = ncols + len(art_cols)
    for i in range(m):
        row = tab[i] + [Fraction(0)] * len(art_cols)
        if basis[i] >= ncols:
            row[basis[i]] = Fraction(1)
        tab[i] = row

    def pivot(r: int, col: int):
        pv = tab[r][col]
        tab[r] = [v / pv for v in tab[r]]
        b[r] /= pv
        for i in range(m):
            if i != r and tab[i][col] != 0:
                f = tab[i][col]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
                b[i] -= f * b[r]
        basis[r] = col

    def run(cost: list[Fraction], active: int) -> str:
        while True:
            # reduced costs from the current basis
            dual = [cost[basis[i]] for i in range(m)]
            entering = -1
            for j in range(active):
                if j in basis:
                    continue
                zj = cost[j] - sum(dual[i] * tab[i][j] for i in range(m))
                if zj < 0:
                    entering = j
                    break
            if entering < 0:
                return OPTIMAL
            ratio = None
            leave = -1
            for i in range(m):
                if tab[i][entering] > 0:
                    r = b[i] / tab[i][entering]
                    if ratio is None or r < ratio or (r == ratio and basis[i] < basis[leave]):
                        ratio = r
                        leave = i
            if leave < 0:
                return UNBOUNDED
            pivot(leave, entering)

    if art_cols:
        cost1 = [Fraction(0)] * total
        for j in art_cols:
            cost1[j] = Fraction(1)
        status = run(cost1, total)
        assert status == OPTIMAL  # phase 1 is always bounded
        if sum(b[i] for i in range(m) if basis[i] >= ncols) > 0:
            return LpResult(INFEASIBLE, None, None)
        # pivot remaining artificials out (their value is 0) or drop dead rows
        for i in range(m):
            if basis[i] >= ncols:
                for j in range(ncols):
                    if tab[i][j] != 0:
                        pivot(i, j)
                        break

    live = [i for i in range(m) if basis[i] < ncols]
    tab = [tab[i][:ncols] for i in live]
    b = [b[i] for i in live]
    basis = [basis[i] for i in live]
    m = len(live)

    cost2 = obj + [Fraction(0)] * (ncols - n)
    status = run(cost2, ncols)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, None, None)
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = b[i]
    value = sum(Fraction(ci) * xi for ci, xi in zip(c, x))
    return LpResult(OPTIMAL, tuple(x), value)


# ---------------------------------------------------------------------------
# Rank-constraint primal and dual
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimalSolution:
    status: str
    s: tuple[Fraction, ...] | None
    objective: Fraction | None


@dataclass(frozen=True)
class DualVector:
    """Finite nonnegative weights on subgroups; zero entries are dropped and
    the support is kept in canonical subgroup order."""

    dim: int
    entries: tuple[tuple[Subgroup, Fraction], ...]

    @staticmethod
    def from_dict(dim: int, values: dict[Subgroup, Fraction]) -> "DualVector":
        items = []
        for sub, val in values.items():
            val = Fraction(val)
            if sub.dim != dim:
                raise ValueError("support subgroup has wrong ambient dimension")
            if val < 0:
                raise ValueError("dual values must be nonnegative")
            if val > 0:
                items.append((sub, val))
        items.sort(key=lambda kv: kv[0].key())
        return DualVector(dim, tuple(items))

    def as_dict(self) -> dict[Subgroup, Fraction]:
        return dict(self.entries)

    def support(self) -> tuple[Subgroup, ...]:
        return tuple(s for s, _ in self.entries)

    def total(self) -> Fraction:
        return sum((v for _, v in self.entries), Fraction(0))


def rank_constraint_rows(problem: HblProblem, constraints: ConstraintSet):
    """One LP row per subgroup: coefficients rank(phi_i(H)), rhs rank(H)."""
    rows = []
    rhs = []
    for sub in constraints.subgroups:
        rows.append([Fraction(image_rank(phi, sub)) for phi in problem.maps])
        rhs.append(Fraction(sub.rank))
    return rows, rhs


def solve_primal(problem: HblProblem, constraints: ConstraintSet) -> PrimalSolution:
    """Minimize 1.s subject to the subgroup rank constraints, s >= 0."""
    rows, rhs = rank_constraint_rows(problem, constraints)
    ones = [Fraction(1)] * problem.n_maps
    res = simplex_solve(ones, rows, rhs, "min")
    if res.status == INFEASIBLE:
        return PrimalSolution(INFEASIBLE, None, None)
    assert res.status == OPTIMAL  # objective bounded below by 0
    return PrimalSolution(OPTIMAL, res.x, res.objective)


def solve_dual(problem: HblProblem, constraints: ConstraintSet, extreme: bool = True) -> DualVector:
    """Maximize y.rank(E) subject to per-map weighted image ranks <= 1.

    Solved as its own LP over the given subgroup list; raises when the primal
    is infeasible (the dual is then unbounded).

    With `extreme` (the default), ties between optimal duals are broken by
    lexicographically maximizing the mass placed on high-rank subgroups,
    descending rank by rank.  That selects the reverse-lexicographically most
    extreme optimal dual, the same ordering the flag transformation increases,
    and keeps the downstream tiling shape deterministic.
    """
    subs = constraints.subgroups
    cols = len(subs)
    c = [Fraction(s.rank) for s in subs]
    rows = []
    for phi in problem.maps:
        rows.append([Fraction(image_rank(phi, s)) for s in subs])
    rhs = [Fraction(1)] * len(rows)
    res = simplex_solve(c, rows, rhs, "max")
    if res.status == UNBOUNDED:
        raise InfeasiblePrimalError(
            "unbounded dual: some subgroup has zero image under every map, "
            "so data reuse is unbounded"
        )
    assert res.status == OPTIMAL
    x = res.x

    if extreme:
        pin_rows = [list(r) for r in rows]
        pin_rhs = list(rhs)

        def pin(coef, value):
            pin_rows.append(list(coef))
            pin_rhs.append(value)
            pin_rows.append([-v for v in coef])
            pin_rhs.append(-value)

        pin(c, res.objective)
        for r in range(problem.dim, 0, -1):
            mask = [Fraction(1 if s.rank == r else 0) for s in subs]
            if not any(mask):
                continue
            stage = simplex_solve(mask, pin_rows, pin_rhs, "max")
            assert stage.status == OPTIMAL
            x = stage.x
            pin(mask, stage.objective)

    values = {subs[j]: x[j] for j in range(cols) if x[j] != 0}
    return DualVector.from_dict(problem.dim, values)


def eval_dual(y: DualVector, problem: HblProblem):
    """Objective val(y) and the per-map feasibility values C_i(y)."""
    val = Fraction(0)
    cs = [Fraction(0)] * problem.n_maps
    for sub, v in y.entries:
        val += v * sub.rank
        for i, phi in enumerate(problem.maps):
            cs[i] += v * image_rank(phi, sub)
    return val, tuple(cs)


def optimal_split(s) -> tuple[Fraction, ...]:
    """Memory shares c_i = s_i / sum(s)."""
    s = [Fraction(v) for v in s]
    total = sum(s)
    if total == 0:
        raise ValueError("cannot split memory for an all-zero exponent vector")
    if any(v < 0 for v in s):
        raise ValueError("exponents must be nonnegative")
    return tuple(v / total for v in s)


# ---------------------------------------------------------------------------
# Entropy-optimal scaling constant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaResult:
    """Enclosure for the scaling constant gamma = s_hbl^-s_hbl * min prod s_i^s_i
    over the optimal face, with the minimizing exponents."""

    gamma: float
    lower: float
    upper: float
    log_tolerance: float
    s: tuple[Fraction, ...]

    def split(self) -> tuple[Fraction, ...]:
        return optimal_split(self.s)


def _entropy_term(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log(x)


def _neg_entropy(s) -> float:
    return sum(_entropy_term(float(v)) for v in s)


def compute_gamma(
    problem: HblProblem,
    constraints: ConstraintSet,
    s_hbl: Fraction,
    tol: float = 1e-9,
    max_iters: int = 20000,
) -> GammaResult:
    """Minimize sum s_i*log(s_i) over the optimal face {s feasible, 1.s = s_hbl}.

    The face is a polytope; minimization runs Frank-Wolfe with an exact LP
    oracle and stops at a duality-gap certificate.  When the face is a single
    point (checked exactly) the value is evaluated directly with zero
    optimization tolerance.
    """
    rows, rhs = rank_constraint_rows(problem, constraints)
    n = problem.n_maps
    face_rows = [list(r) for r in rows]
    face_rhs = list(rhs)
    face_rows.append([Fraction(1)] * n)
    face_rhs.append(Fraction(s_hbl))
    face_rows.append([Fraction(-1)] * n)
    face_rhs.append(Fraction(-s_hbl))

    def oracle(gradient) -> tuple[Fraction, ...]:
        res = simplex_solve(gradient, face_rows, face_rhs, "min")
        if res.status != OPTIMAL:
            raise InfeasiblePrimalError("optimal face is empty; solve the primal first")
        return res.x

    # exact singleton-face detection: min and max of every coordinate
    vertices: list[tuple[Fraction, ...]] = []
    singleton = True
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        lo_v = oracle(e)
        e[i] = Fraction(-1)
        hi_v = oracle(e)
        vertices.extend([lo_v, hi_v])
        if lo_v[i] != hi_v[i]:
            singleton = False

    # slack absorbing float-log rounding in the gradient certificate
    arith_slack = 1e-11

    def enclose(s, gap: float) -> GammaResult:
        log_sh = float(s_hbl) * math.log(float(s_hbl))
        log_gamma = _neg_entropy(s) - log_sh
        lower = math.exp(log_gamma - gap - arith_slack)
        upper = math.exp(log_gamma + arith_slack)
        return GammaResult(math.exp(log_gamma), lower, upper, gap + arith_slack, tuple(s))

    if singleton:
        return enclose(vertices[0], 0.0)

    def certified_gap(s_exact) -> float:
        """Duality-gap bound f(s) - f* <= grad(s).(s - argmin) at an exactly
        feasible s; binary floats convert to rationals without error."""
        floor_log = math.log(1e-300)
        grad = [Fraction((math.log(float(si)) if si > 0 else floor_log) + 1.0) for si in s_exact]
        v = oracle(grad)
        g = sum(gi * (a - b) for gi, a, b in zip(grad, s_exact, v))
        return max(float(g), 0.0)

    # Frank-Wolfe over the face, iterate held as vertex weights so the final
    # point can be reconstituted as an exactly feasible convex combination.
    vert_list: list[tuple[Fraction, ...]] = []
    weights: list[float] = []

    def add_vertex(v) -> int:
        for i, u in enumerate(vert_list):
            if u == v:
                return i
        vert_list.append(v)
        weights.append(0.0)
        return len(vert_list) - 1

    for v in vertices:
        add_vertex(v)
    weights = [1.0 / len(vert_list)] * len(vert_list)

    def combo() -> list[float]:
        return [sum(w * float(v[i]) for w, v in zip(weights, vert_list)) for i in range(n)]

    floor_log = math.log(1e-300)
    for _ in range(max_iters):
        s = combo()
        grad = [(math.log(si) if si > 0 else floor_log) + 1.0 for si in s]
        v = oracle([Fraction(g) for g in grad])
        gap = sum(g * (a - float(b)) for g, a, b in zip(grad, s, v))
        if gap <= tol / 2:
            break
        idx = add_vertex(v)
        if len(weights) < len(vert_list):
            weights.append(0.0)
        direction = [float(b) - a for a, b in zip(s, v)]

        def dphi(t: float) -> float:
            val = 0.0
            for si, di in zip(s, direction):
                x = si + t * di
                if x <= 0:
                    x = 1e-300
                val += (math.log(x) + 1.0) * di
            return val

        if dphi(1.0) <= 0:
            t = 1.0
        else:
            lo, hi = 0.0, 1.0
            for _ in range(60):
                mid = (lo + hi) / 2
                if dphi(mid) <= 0:
                    lo = mid
                else:
                    hi = mid
            t = (lo + hi) / 2
        if t <= 0.0:
            break
        weights = [(1.0 - t) * w for w in weights]
        weights[idx] += t

    # exact feasible point from the float weights
    wf = [max(Fraction(w).limit_denominator(10**12), Fraction(0)) for w in weights]
    total = sum(wf)
    if total == 0:
        wf = [Fraction(1, len(vert_list))] * len(vert_list)
        total = Fraction(1)
    wf = [w / total for w in wf]
    s_exact = tuple(sum((w * v[i] for w, v in zip(wf, vert_list)), Fraction(0)) for i in range(n))
    return enclose(s_exact, certified_gap(s_exact))
