"""Finite subgroup lists that generate the lower-bound LP constraints.

Every emitted subgroup yields a valid rank constraint; completeness of the
list (hence exactness of the LP optimum) is only guaranteed in the tractable
cases and is reported through the `Completeness` flag otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .intlinalg import IntMatrix, Subgroup, kernel_basis, subgroup_intersect, subgroup_sum
from .problem import HblProblem

DEFAULT_MAX_CLOSURE = 256


class Completeness(Enum):
    COMPLETE = "complete"
    PARTIAL = "partial"


class Method(Enum):
    COORDINATE_PROJECTIONS = "coordinate-projections"
    FEW_MAPS = "few-maps"
    KERNEL_CLOSURE = "kernel-closure"
    FULL_SPACE_ONLY = "full-space-only"


@dataclass(frozen=True)
class ConstraintSet:
    subgroups: tuple[Subgroup, ...]
    completeness: Completeness
    method: Method
    max_closure: int

    def __post_init__(self):
        keys = [s.key() for s in self.subgroups]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate subgroups in constraint set")
        if any(s.is_zero() for s in self.subgroups):
            raise ValueError("trivial subgroup is not a valid constraint")
        if not any(s.is_full() for s in self.subgroups):
            raise ValueError("the full lattice must always be present")

    def __len__(self) -> int:
        return len(self.subgroups)


def is_coordinate_projection(phi: IntMatrix) -> bool:
    """True iff every row is a standard basis vector and rows are distinct."""
    if phi.nrows == 0:
        return False
    seen = set()
    for i in range(phi.nrows):
        row = phi.row(i)
        ones = [j for j, v in enumerate(row) if v == 1]
        if len(ones) != 1 or any(v != 0 for j, v in enumerate(row) if j != ones[0]):
            return False
        if ones[0] in seen:
            return False
        seen.add(ones[0])
    return True


def _coordinate_subgroups(dim: int) -> list[Subgroup]:
    out = []
    for r in range(1, dim + 1):
        for idx in combinations(range(dim), r):
            gens = []
            for i in idx:
                e = [0] * dim
                e[i] = 1
                gens.append(tuple(e))
            out.append(Subgroup.span(dim, gens))
    return out


def generate_constraints(problem: HblProblem, max_closure: int = DEFAULT_MAX_CLOSURE) -> ConstraintSet:
    """Subgroup list for the rank-constraint LP.

    Dispatch: all kernels trivial -> the full lattice alone suffices (every
    constraint collapses onto it); all maps coordinate projections -> all
    nonzero coordinate subgroups; otherwise the sum/intersection closure of
    the kernels, truncated (and flagged Partial) past `max_closure`.
    """
    if max_closure < problem.n_maps + 1:
        raise ValueError("max_closure must be at least the number of maps plus one")
    dim = problem.dim
    full = Subgroup.full(dim)

    kernels = []
    for phi in problem.maps:
        k = kernel_basis(phi)
        if not k.is_zero() and k not in kernels:
            kernels.append(k)

    if not kernels:
        return ConstraintSet((full,), Completeness.COMPLETE, Method.FULL_SPACE_ONLY, max_closure)

    if all(is_coordinate_projection(phi) for phi in problem.maps):
        subs = sorted(_coordinate_subgroups(dim), key=lambda s: s.key())
        return ConstraintSet(tuple(subs), Completeness.COMPLETE, Method.COORDINATE_PROJECTIONS, max_closure)

    members: dict = {s.key(): s for s in kernels}
    frontier = sorted(members.values(), key=lambda s: s.key())
    capped = False
    while frontier and not capped:
        existing = sorted(members.values(), key=lambda s: s.key())
        fresh: dict = {}
        for a in frontier:
            for b in existing:
                if a.key() == b.key():
                    continue
                for cand in (subgroup_sum(a, b), subgroup_intersect(a, b)):
                    if cand.is_zero():
                        continue
                    k = cand.key()
                    if k in members or k in fresh:
                        continue
                    fresh[k] = cand
        frontier = []
        for k in sorted(fresh):
            if len(members) >= max_closure:
                capped = True
                break
            members[k] = fresh[k]
            frontier.append(fresh[k])

    if full.key() not in members:
        if len(members) >= max_closure:
            capped = True
            # the full lattice is the one binding constraint we never drop
            members.pop(sorted(members)[-1])
        members[full.key()] = full

    subs = tuple(sorted(members.values(), key=lambda s: s.key()))
    completeness = Completeness.PARTIAL if capped else Completeness.COMPLETE
    method = Method.FEW_MAPS if problem.n_maps <= 3 else Method.KERNEL_CLOSURE
    return ConstraintSet(subs, completeness, method, max_closure)
