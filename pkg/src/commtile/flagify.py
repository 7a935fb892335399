"""Move a feasible dual vector onto a flag (a chain of nested subgroups).

The transformation repeatedly picks an incomparable support pair (V, W) and
shifts the smaller weight onto V+W and V/\\W.  It preserves the objective
exactly, never increases any per-map feasibility value, and strictly
increases a reverse-lexicographic extremeness measure, which bounds the
iteration count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .intlinalg import Subgroup, subgroup_intersect, subgroup_sum
from .lp import DualVector, eval_dual
from .problem import HblProblem


class InfeasibleDualError(ValueError):
    """Input dual vector violates a feasibility constraint."""


@dataclass(frozen=True)
class Flag:
    """Strictly nested chain of subgroups, ascending."""

    chain: tuple[Subgroup, ...]

    def __post_init__(self):
        for a, b in zip(self.chain, self.chain[1:]):
            if not (a.rank < b.rank and b.contains(a)):
                raise ValueError("chain members must be strictly nested")

    def __len__(self) -> int:
        return len(self.chain)


def extremeness(y: DualVector, dim: int | None = None) -> tuple[Fraction, ...]:
    """w_i = total dual mass on rank-i support members, i = 1..d."""
    d = dim if dim is not None else y.dim
    w = [Fraction(0)] * d
    for sub, val in y.entries:
        if sub.rank >= 1:
            w[sub.rank - 1] += val
    return tuple(w)


def reverse_lex_less(a, b) -> bool:
    """a < b comparing coordinates from the last backwards."""
    for x, yv in zip(reversed(a), reversed(b)):
        if x != yv:
            return x < yv
    return False


def _first_incomparable_pair(support: list[Subgroup]):
    for i in range(len(support)):
        for j in range(i + 1, len(support)):
            a, b = support[i], support[j]
            s = subgroup_sum(a, b)
            if s != a and s != b:  # neither contains the other
                return a, b
    return None


def flagify_steps(y: DualVector, problem: HblProblem, require_feasible: bool = True):
    """Generator over intermediate dual vectors, ending on flag support."""
    val, cs = eval_dual(y, problem)
    if require_feasible and any(c > 1 for c in cs):
        raise InfeasibleDualError("dual vector violates a per-map constraint")
    current = dict(y.entries)
    while True:
        support = sorted(current, key=lambda s: s.key())
        pair = _first_incomparable_pair(support)
        if pair is None:
            return
        a, b = pair
        if current[a] <= current[b]:
            v, w = a, b
        else:
            v, w = b, a
        t = current[v]
        del current[v]
        current[w] = current[w] - t
        if current[w] == 0:
            del current[w]
        s = subgroup_sum(v, w)
        current[s] = current.get(s, Fraction(0)) + t
        inter = subgroup_intersect(v, w)
        if not inter.is_zero():
            current[inter] = current.get(inter, Fraction(0)) + t
        yield DualVector.from_dict(y.dim, current)


def flagify_dual(
    y: DualVector, problem: HblProblem, require_feasible: bool = True
) -> tuple[DualVector, Flag]:
    """Feasible dual -> (equal-value feasible dual on a flag, the flag).

    Pair selection is the first incomparable pair in canonical subgroup
    order; on equal weights the canonically smaller member gives up its mass.
    The transformation itself is well defined for any nonnegative dual and
    never increases a C_i, so `require_feasible` may be relaxed to run it on
    mildly infeasible inputs; the default faults on them.
    """
    out = y
    for out in flagify_steps(y, problem, require_feasible):
        pass
    chain = tuple(sorted(out.support(), key=lambda s: s.key()))
    return out, Flag(chain)
