"""Exact integer algebra: Smith/Hermite forms, subgroups, ranks."""

import random

from commtile.intlinalg import (
    IntMatrix,
    Subgroup,
    cokernel_map,
    hnf,
    image_rank,
    kernel_basis,
    rational_inverse,
    snf,
    subgroup_intersect,
    subgroup_sum,
)

from conftest import (
    four_map_4d_problem,
    random_matrix,
    random_subgroup,
    random_unimodular,
    three_map_8d_kernels,
)


# ---------------------------------------------------------------------------
# Hermite form
# ---------------------------------------------------------------------------


def test_hnf_identity():
    assert hnf(IntMatrix.identity(3)) == IntMatrix.identity(3)


def test_hnf_single_column_keeps_content():
    # HNF canonicalizes but never divides out content; saturation is separate.
    h = hnf(IntMatrix.from_cols([(4, 6)]))
    assert h.cols() == [(4, 6)]
    assert Subgroup.span(2, [(4, 6)]).generators() == [(2, 3)]


def _lattice_members_in_box(cols, radius, coeff_bound=30):
    """Brute-force span enumeration oracle: all integer combinations of the
    columns with bounded coefficients, filtered to the box."""
    pts = set()
    d = len(cols[0])

    def rec(idx, acc):
        if idx == len(cols):
            if all(abs(x) <= radius for x in acc):
                pts.add(tuple(acc))
            return
        for a in range(-coeff_bound, coeff_bound + 1):
            rec(idx + 1, [x + a * c for x, c in zip(acc, cols[idx])])

    rec(0, [0] * d)
    return pts


def test_hnf_spans_same_lattice():
    cols = [(2, 1), (1, 3)]
    h = hnf(IntMatrix.from_cols(cols))
    hc = [c for c in h.cols() if any(c)]
    # index-5 sublattice of Z^2: memberships agree on the whole window
    want = _lattice_members_in_box(cols, 6)
    got = _lattice_members_in_box(hc, 6)
    assert want == got
    assert len(want) < (2 * 6 + 1) ** 2  # proper sublattice


def test_hnf_canonical_under_rebasing():
    rng = random.Random(7)
    for _ in range(50):
        d = rng.randint(1, 4)
        n = rng.randint(1, 4)
        a = random_matrix(rng, d, n, -5, 5)
        u = random_unimodular(rng, n)
        assert hnf(a) == hnf(a.mul(u))


# ---------------------------------------------------------------------------
# Smith form
# ---------------------------------------------------------------------------


def test_snf_identity():
    res = snf(IntMatrix.identity(2))
    assert res.u == IntMatrix.identity(2)
    assert res.d == IntMatrix.identity(2)
    assert res.v == IntMatrix.identity(2)


def test_snf_one_by_two():
    # rank-1 map 3x - y: single invariant factor 1, kernel spanned by (1, 3)
    a = IntMatrix.from_rows([[3, -1]])
    res = snf(a)
    assert res.diag() == [1]
    j = [j for j in range(2) if j >= 1 or res.d[j, j] == 0]
    ker_cols = [res.v.col(jj) for jj in range(1, 2)]
    assert ker_cols[0] in ((1, 3), (-1, -3))


def test_snf_roundtrip_random():
    rng = random.Random(1)
    for _ in range(250):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        a = random_matrix(rng, m, n)
        res = snf(a)
        # exact reconstruction A = U D V^-1, checked multiplicatively
        assert res.u.mul(res.d) == a.mul(res.v)
        assert abs(res.u.det()) == 1
        assert abs(res.v.det()) == 1
        diag = res.diag()
        nonzero = [x for x in diag if x]
        assert all(x > 0 for x in nonzero)
        assert diag[len(nonzero):] == [0] * (len(diag) - len(nonzero))
        for a_, b_ in zip(nonzero, nonzero[1:]):
            assert b_ % a_ == 0


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------


def test_kernel_examples():
    assert kernel_basis(IntMatrix.from_rows([[1, -2]])).generators() == [(2, 1)]
    assert kernel_basis(IntMatrix.from_rows([[3, -1]])).generators() == [(1, 3)]
    assert kernel_basis(IntMatrix.identity(4)).is_zero()


def test_kernel_of_third_four_map_access():
    phi3 = four_map_4d_problem().maps[2]
    k = kernel_basis(phi3)
    assert k.rank == 1
    for col in k.generators():
        assert all(v == 0 for v in phi3.mul_vec(col))
    # exhaustive: no other membership in a window
    g = k.generators()[0]
    for t in range(-3, 4):
        assert k.contains_vector([t * x for x in g])


def test_kernel_matches_map_rank():
    rng = random.Random(2)
    for _ in range(100):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        a = random_matrix(rng, m, n, -5, 5)
        k = kernel_basis(a)
        assert k.rank == n - a.rank()
        for col in k.generators():
            assert all(v == 0 for v in a.mul_vec(col))


# ---------------------------------------------------------------------------
# Subgroup algebra
# ---------------------------------------------------------------------------


def test_sum_examples():
    e1 = Subgroup.span(2, [(1, 0)])
    e2 = Subgroup.span(2, [(0, 1)])
    s = subgroup_sum(e1, e2)
    assert s.rank == 2 and s.is_full()
    v = Subgroup.span(3, [(1, 2, 0), (0, 0, 1)])
    assert subgroup_sum(v, v) == v
    pair = Subgroup.span(4, [(1, -1, 0, 0), (0, 0, 1, -1)])
    other = Subgroup.span(4, [(1, 0, 0, 0), (0, 0, 1, 0)])
    assert subgroup_sum(pair, other).is_full()


def test_intersect_examples():
    assert subgroup_intersect(Subgroup.span(2, [(1, 0)]), Subgroup.span(2, [(0, 1)])).is_zero()
    v = Subgroup.span(3, [(1, 2, 0), (0, 0, 1)])
    assert subgroup_intersect(v, v) == v


def test_intersect_8d_kernels_against_membership_oracle():
    _, k2, k3 = three_map_8d_kernels()
    inter = subgroup_intersect(k2, k3)
    # membership oracle: combinations of k2's generators with small coeffs
    gens = k2.generators()
    count_checked = 0
    for a in range(-3, 4):
        for b in range(-3, 4):
            for c in range(-3, 4):
                for d in range(-3, 4):
                    x = tuple(
                        a * gens[0][i] + b * gens[1][i] + c * gens[2][i] + d * gens[3][i]
                        for i in range(8)
                    )
                    in_both = k3.contains_vector(x)
                    assert inter.contains_vector(x) == in_both
                    count_checked += 1
    assert count_checked == 7**4


def test_rank_modularity_and_substitution_lemma():
    # rank(V)+rank(W) = rank(V+W)+rank(V/\W), and the mapped version as an
    # inequality: rank(L(V)) >= rank(L(V/\W)) + rank(L(V+W)) - rank(L(W))
    rng = random.Random(3)
    for _ in range(250):
        d = rng.randint(1, 5)
        v = random_subgroup(rng, d)
        w = random_subgroup(rng, d)
        s = subgroup_sum(v, w)
        i = subgroup_intersect(v, w)
        assert v.rank + w.rank == s.rank + i.rank
        rows = rng.randint(1, d)
        l = random_matrix(rng, rows, d, -4, 4)
        lhs = image_rank(l, v)
        rhs = image_rank(l, i) + image_rank(l, s) - image_rank(l, w)
        assert lhs >= rhs


def test_canonicalization_is_representation_free():
    rng = random.Random(4)
    for _ in range(120):
        d = rng.randint(1, 5)
        v = random_subgroup(rng, d)
        if v.rank == 0:
            continue
        u = random_unimodular(rng, v.rank)
        rebased = Subgroup.span(d, v.basis.mul(u).cols())
        assert rebased == v
        w = random_subgroup(rng, d)
        uw = random_unimodular(rng, w.rank) if w.rank else None
        w2 = Subgroup.span(d, w.basis.mul(uw).cols()) if uw is not None else w
        assert subgroup_sum(v, w) == subgroup_sum(rebased, w2)
        assert subgroup_intersect(v, w) == subgroup_intersect(rebased, w2)


def test_image_rank_examples():
    ident = IntMatrix.identity(3)
    v = Subgroup.span(3, [(1, 0, 0), (3, 4, 5)])
    assert image_rank(ident, v) == v.rank
    phi1 = IntMatrix.from_rows([[3, -1]])
    assert image_rank(phi1, Subgroup.span(2, [(1, 3)])) == 0
    assert image_rank(phi1, Subgroup.span(2, [(2, 1)])) == 1


def test_cokernel_map_roundtrip():
    rng = random.Random(5)
    for _ in range(80):
        d = rng.randint(1, 5)
        h = random_subgroup(rng, d)
        phi = cokernel_map(h)
        assert kernel_basis(phi) == h


def test_rational_inverse_unimodular_is_integral():
    rng = random.Random(6)
    for _ in range(40):
        n = rng.randint(1, 5)
        u = random_unimodular(rng, n)
        inv = rational_inverse(u)
        assert all(f.denominator == 1 for row in inv for f in row)
        recon = u.mul(IntMatrix.from_rows([[int(f) for f in row] for row in inv]))
        assert recon == IntMatrix.identity(n)
