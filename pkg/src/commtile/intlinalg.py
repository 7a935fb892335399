"""Exact integer-matrix algebra and subgroups of Z^d.

Everything here runs on Python's arbitrary-precision integers (entries of
Hermite/Smith intermediates can grow well past machine words) and exact
Fractions for the few places rank computations need division.  All values are
immutable; operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major flat storage."""

    nrows: int
    ncols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.data) != self.nrows * self.ncols:
            raise ValueError("data length does not match shape")

    @staticmethod
    def from_rows(rows) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("from_rows needs at least one row; use zeros()")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        flat = tuple(int(v) for r in rows for v in r)
        return IntMatrix(len(rows), ncols, flat)

    @staticmethod
    def from_cols(cols, nrows: int | None = None) -> "IntMatrix":
        cols = [list(c) for c in cols]
        if not cols:
            if nrows is None:
                raise ValueError("empty column list needs explicit nrows")
            return IntMatrix(nrows, 0, ())
        d = len(cols[0])
        if any(len(c) != d for c in cols):
            raise ValueError("ragged columns")
        flat = tuple(int(cols[j][i]) for i in range(d) for j in range(len(cols)))
        return IntMatrix(d, len(cols), flat)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "IntMatrix":
        return IntMatrix(nrows, ncols, (0,) * (nrows * ncols))

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.data[i * self.ncols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i * self.ncols : (i + 1) * self.ncols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.data[i * self.ncols + j] for i in range(self.nrows))

    def rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.nrows)]

    def cols(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.ncols,
            self.nrows,
            tuple(self.data[i * self.ncols + j] for j in range(self.ncols) for i in range(self.nrows)),
        )

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        a, b = self, other
        out = []
        for i in range(a.nrows):
            arow = a.row(i)
            for j in range(b.ncols):
                out.append(sum(arow[k] * b.data[k * b.ncols + j] for k in range(a.ncols)))
        return IntMatrix(a.nrows, b.ncols, tuple(out))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return self.mul(other)

    def mul_vec(self, v) -> tuple[int, ...]:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(self.row(i)[k] * v[k] for k in range(self.ncols)) for i in range(self.nrows))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch in hstack")
        rows = [list(self.row(i)) + list(other.row(i)) for i in range(self.nrows)]
        flat = tuple(v for r in rows for v in r)
        return IntMatrix(self.nrows, self.ncols + other.ncols, flat)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.data)

    def rank(self) -> int:
        return _rank_fractions([list(self.row(i)) for i in range(self.nrows)])

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        m = [list(self.row(i)) for i in range(n)]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in self.row(i)) for i in range(self.nrows))


def _rank_fractions(rows: list[list[int]]) -> int:
    """Rank over Q by Gaussian elimination on Fraction copies."""
    if not rows or not rows[0]:
        return 0
    m = [[Fraction(v) for v in r] for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        for i in range(rank + 1, nrows):
            if m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def rational_inverse(a: IntMatrix) -> list[list[Fraction]]:
    """Exact inverse of a nonsingular square integer matrix, as Fractions."""
    if a.nrows != a.ncols:
        raise ValueError("inverse of non-square matrix")
    n = a.nrows
    m = [[Fraction(v) for v in a.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise ValueError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [r[n:] for r in m]


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------


def _row_hnf_inplace(m: list[list[int]]) -> list[list[int]]:
    """Canonical row Hermite form: echelon, positive pivots, entries above a
    pivot reduced into [0, pivot).  Zero rows sink to the bottom."""
    if not m:
        return m
    nrows, ncols = len(m), len(m[0])
    pr = 0
    for col in range(ncols):
        if pr >= nrows:
            break
        while True:
            nz = [i for i in range(pr, nrows) if m[i][col] != 0]
            if not nz:
                break
            i_min = min(nz, key=lambda i: (abs(m[i][col]), i))
            m[pr], m[i_min] = m[i_min], m[pr]
            done = True
            for i in range(pr + 1, nrows):
                if m[i][col] != 0:
                    q = m[i][col] // m[pr][col]
                    m[i] = [a - q * b for a, b in zip(m[i], m[pr])]
                    if m[i][col] != 0:
                        done = False
            if done:
                break
        if pr < nrows and m[pr][col] != 0:
            if m[pr][col] < 0:
                m[pr] = [-v for v in m[pr]]
            for i in range(pr):
                q = m[i][col] // m[pr][col]
                if q != 0:
                    m[i] = [a - q * b for a, b in zip(m[i], m[pr])]
            pr += 1
    return m


def row_hnf(a: IntMatrix) -> IntMatrix:
    rows = _row_hnf_inplace([list(a.row(i)) for i in range(a.nrows)])
    return IntMatrix(a.nrows, a.ncols, tuple(v for r in rows for v in r))


def hnf(a: IntMatrix) -> IntMatrix:
    """Column Hermite normal form: same column span over Z, canonical, with
    zero columns trailing.  Computed as the transpose of the row form of a^T."""
    return row_hnf(a.transpose()).transpose()


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    """Factorization A = U * D * V^-1 with U, V unimodular and D diagonal.

    Nonzero diagonal entries are positive, form a divisibility chain
    d_i | d_{i+1}, and precede any zero entries.
    """

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    def diag(self) -> list[int]:
        k = min(self.d.nrows, self.d.ncols)
        return [self.d[i, i] for i in range(k)]


def snf(a: IntMatrix) -> SnfResult:
    """Smith normal form by alternating row/column reduction.

    Row operations on D are mirrored as inverse column operations on U and
    column operations as identical column operations on V, preserving
    A = U D V^-1 throughout.
    """
    m, n = a.nrows, a.ncols
    d = [list(a.row(i)) for i in range(m)]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    def row_addmul(dst, src, k):
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        for r in u:
            r[src] -= k * r[dst]

    def row_neg(i):
        d[i] = [-x for x in d[i]]
        for r in u:
            r[i] = -r[i]

    def col_swap(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def col_addmul(dst, src, k):
        for r in d:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    def diagonalize():
        t = 0
        limit = min(m, n)
        while t < limit:
            # locate a pivot: smallest nonzero magnitude in the working block
            piv = None
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = d[i][j]
                    if x != 0 and (best is None or abs(x) < best):
                        best = abs(x)
                        piv = (i, j)
            if piv is None:
                break
            if piv[0] != t:
                row_swap(t, piv[0])
            if piv[1] != t:
                col_swap(t, piv[1])
            while True:
                # clear column t below the pivot
                for i in range(t + 1, m):
                    if d[i][t] != 0:
                        q = d[i][t] // d[t][t]
                        if q:
                            row_addmul(i, t, -q)
                        if d[i][t] != 0:
                            row_swap(t, i)  # remainder is smaller: continue Euclid
                # clear row t to the right
                col_dirty = False
                for j in range(t + 1, n):
                    if d[t][j] != 0:
                        q = d[t][j] // d[t][t]
                        if q:
                            col_addmul(j, t, -q)
                        if d[t][j] != 0:
                            col_swap(t, j)
                            col_dirty = True
                if col_dirty:
                    continue
                if any(d[i][t] != 0 for i in range(t + 1, m)):
                    continue
                break
            if d[t][t] < 0:
                row_neg(t)
            t += 1
        return t

    guard = 0
    while True:
        r = diagonalize()
        fixed = False
        for i in range(r - 1):
            if d[i + 1][i + 1] % d[i][i] != 0:
                col_addmul(i, i + 1, 1)
                fixed = True
                break
        if not fixed:
            break
        guard += 1
        if guard > 64 * (m + n + 1):
            raise RuntimeError("divisibility normalization failed to converge")

    return SnfResult(
        IntMatrix(m, m, tuple(x for row in u for x in row)),
        IntMatrix(m, n, tuple(x for row in d for x in row)),
        IntMatrix(n, n, tuple(x for row in v for x in row)),
    )


# ---------------------------------------------------------------------------
# Subgroups of Z^d
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """A saturated subgroup of Z^d in canonical column-HNF basis.

    Two subgroups with the same rational span compare equal bit-for-bit; the
    basis always generates span /\\ Z^d, so generators are primitive.
    """

    dim: int
    basis: IntMatrix  # dim x rank, canonical

    def __post_init__(self):
        if self.basis.nrows != self.dim:
            raise ValueError("basis row count must equal ambient dimension")

    @staticmethod
    def span(dim: int, generators) -> "Subgroup":
        """Saturated canonical subgroup spanned by integer generator vectors."""
        gens = [tuple(int(x) for x in g) for g in generators]
        gens = [g for g in gens if any(g)]
        if any(len(g) != dim for g in gens):
            raise ValueError("generator length must equal ambient dimension")
        if not gens:
            return Subgroup(dim, IntMatrix(dim, 0, ()))
        g = IntMatrix.from_cols(gens)
        res = snf(g)
        r = sum(1 for x in res.diag() if x != 0)
        sat_cols = [res.u.col(j) for j in range(r)]
        canon = hnf(IntMatrix.from_cols(sat_cols, nrows=dim))
        keep = [canon.col(j) for j in range(canon.ncols) if any(canon.col(j))]
        return Subgroup(dim, IntMatrix.from_cols(keep, nrows=dim))

    @staticmethod
    def zero(dim: int) -> "Subgroup":
        return Subgroup(dim, IntMatrix(dim, 0, ()))

    @staticmethod
    def full(dim: int) -> "Subgroup":
        return Subgroup(dim, IntMatrix.identity(dim))

    @property
    def rank(self) -> int:
        return self.basis.ncols

    def is_zero(self) -> bool:
        return self.rank == 0

    def is_full(self) -> bool:
        return self.rank == self.dim

    def generators(self) -> list[tuple[int, ...]]:
        return self.basis.cols()

    def contains_vector(self, v) -> bool:
        """Membership of an integer vector (exact rational solve; the basis is
        saturated, so rational-span membership of an integer vector suffices)."""
        v = [int(x) for x in v]
        if len(v) != self.dim:
            raise ValueError("vector length mismatch")
        if all(x == 0 for x in v):
            return True
        if self.rank == 0:
            return False
        aug = [[self.basis[i, j] for j in range(self.rank)] + [v[i]] for i in range(self.dim)]
        return _rank_fractions(aug) == self.rank

    def contains(self, other: "Subgroup") -> bool:
        if self.dim != other.dim:
            raise ValueError("ambient dimension mismatch")
        return subgroup_sum(self, other) == self

    def key(self):
        """Canonical sort key: rank, then basis entries."""
        return (self.rank, self.basis.data)

    def __str__(self) -> str:
        cols = ", ".join("(" + ",".join(str(x) for x in c) + ")" for c in self.generators())
        return f"<{cols}>" if cols else "<0>"


def kernel_basis(a: IntMatrix) -> Subgroup:
    """ker(a) /\\ Z^n as a saturated subgroup of Z^n (n = a.ncols).

    Reads the kernel off the Smith form: columns of V sitting over zero
    diagonal positions (and past the diagonal when n exceeds the row count).
    """
    res = snf(a)
    n = a.ncols
    k = min(a.nrows, n)
    gens = [res.v.col(j) for j in range(k) if res.d[j, j] == 0]
    gens += [res.v.col(j) for j in range(k, n)]
    return Subgroup.span(n, gens)


def subgroup_sum(a: Subgroup, b: Subgroup) -> Subgroup:
    if a.dim != b.dim:
        raise ValueError("ambient dimension mismatch")
    return Subgroup.span(a.dim, a.generators() + b.generators())


def subgroup_intersect(a: Subgroup, b: Subgroup) -> Subgroup:
    """Exact intersection via the kernel of the stacked-basis system."""
    if a.dim != b.dim:
        raise ValueError("ambient dimension mismatch")
    if a.is_zero() or b.is_zero():
        return Subgroup.zero(a.dim)
    stacked = a.basis.hstack(b.basis)
    ker = kernel_basis(stacked)
    gens = []
    for col in ker.generators():
        coeffs = col[: a.rank]
        gens.append(a.basis.mul_vec(coeffs))
    return Subgroup.span(a.dim, gens)


def image_rank(phi: IntMatrix, h: Subgroup) -> int:
    """rank over Q of phi applied to the subgroup."""
    if phi.ncols != h.dim:
        raise ValueError("map column count must equal ambient dimension")
    if h.rank == 0 or phi.nrows == 0:
        return 0
    return phi.mul(h.basis).rank()


def cokernel_map(h: Subgroup) -> IntMatrix:
    """An integer map Z^d -> Z^(d-r) whose kernel is exactly the subgroup.

    Takes the last d-r rows of U^-1 where U's leading columns span the
    subgroup (via its own Smith form); U unimodular keeps the rows integral.
    """
    d, r = h.dim, h.rank
    if r == 0:
        return IntMatrix.identity(d)
    res = snf(h.basis)
    uinv = rational_inverse(res.u)
    rows = []
    for i in range(r, d):
        row = uinv[i]
        assert all(f.denominator == 1 for f in row)
        rows.append([int(f) for f in row])
    if not rows:
        return IntMatrix(0, d, ())
    return IntMatrix.from_rows(rows)
