"""Exact dense linear algebra over Z, Q and prime fields.

Matrices are immutable ``IntMatrix`` values; the algorithms work on plain
lists of Python ints, so there is never any overflow.  Everything here is
deliberately naive-but-careful: dense storage, minimal-absolute-value
pivoting to keep intermediate entries small, and saturated integer kernels
throughout.  Sizes in this package stay in the low hundreds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .abelian import FGAbelianGroup


@dataclass(frozen=True)
class IntMatrix:
    """A dense nrows x ncols matrix with exact integer entries."""

    nrows: int
    ncols: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("negative dimension")
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError("inconsistent matrix shape")

    @staticmethod
    def from_rows(rows, ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        return IntMatrix(len(rows), ncols, rows)

    @staticmethod
    def zero(nrows: int, ncols: int) -> "IntMatrix":
        return IntMatrix(nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(
            n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        )

    @staticmethod
    def diagonal(entries) -> "IntMatrix":
        entries = list(entries)
        n = len(entries)
        return IntMatrix(
            n, n,
            tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)),
        )

    @staticmethod
    def from_columns(cols, nrows: int | None = None) -> "IntMatrix":
        cols = [list(c) for c in cols]
        if nrows is None:
            if not cols:
                raise ValueError("cannot infer row count of an empty matrix")
            nrows = len(cols[0])
        if any(len(c) != nrows for c in cols):
            raise ValueError("ragged columns")
        return IntMatrix(
            nrows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(nrows))
        )

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.ncols, self.nrows,
            tuple(tuple(self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols)),
        )

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} * {other.shape}")
        bt = other.transpose().rows
        return IntMatrix(
            self.nrows, other.ncols,
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
                for row in self.rows
            ),
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            self.nrows, self.ncols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(
            self.nrows, self.ncols, tuple(tuple(-x for x in r) for r in self.rows)
        )

    def apply(self, vec) -> tuple[int, ...]:
        vec = list(vec)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.rows)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return IntMatrix(
            self.nrows, self.ncols + other.ncols,
            tuple(r + s for r, s in zip(self.rows, other.rows)),
        )

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return IntMatrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_zero(self) -> bool:
        return all(all(x == 0 for x in r) for r in self.rows)

    def mod(self, p: int) -> "IntMatrix":
        return IntMatrix(
            self.nrows, self.ncols, tuple(tuple(x % p for x in r) for r in self.rows)
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        m = self.to_lists()
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


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _min_abs_pivot(d, k, n, m):
    """Position of a minimal-|entry| nonzero in the trailing submatrix."""
    best = None
    best_abs = 0
    for i in range(k, n):
        row = d[i]
        for j in range(k, m):
            x = row[j]
            if x:
                a = -x if x < 0 else x
                if best is None or a < best_abs:
                    best, best_abs = (i, j), a
                    if a == 1:
                        return best
    return best


def _smith_inplace(d, u=None, v=None):
    """Diagonalise d by unimodular row/column ops; returns the rank.

    Minimal-absolute-value pivoting bounds entry growth; u and v, when
    supplied, accumulate the row and column operations.
    """
    n = len(d)
    m = len(d[0]) if n else 0
    k = 0
    while k < min(n, m):
        pos = _min_abs_pivot(d, k, n, m)
        if pos is None:
            break
        while True:
            i, j = pos
            if i != k:
                d[k], d[i] = d[i], d[k]
                if u is not None:
                    u[k], u[i] = u[i], u[k]
            if j != k:
                for row in d:
                    row[k], row[j] = row[j], row[k]
                if v is not None:
                    for row in v:
                        row[k], row[j] = row[j], row[k]
            p = d[k][k]
            # Clear column k; a nonzero remainder becomes the next pivot.
            dirty = False
            dk = d[k]
            for i in range(k + 1, n):
                x = d[i][k]
                if x:
                    q = x // p
                    if q:
                        di = d[i]
                        for c in range(k, m):
                            di[c] -= q * dk[c]
                        if u is not None:
                            ui, uk = u[i], u[k]
                            for c in range(len(ui)):
                                ui[c] -= q * uk[c]
                    if d[i][k]:
                        dirty = True
            if dirty:
                pos = _min_abs_pivot(d, k, n, m)
                continue
            # Clear row k by column ops.
            dirty = False
            for j in range(k + 1, m):
                x = dk[j]
                if x:
                    q = x // p
                    if q:
                        for row in d:
                            row[j] -= q * row[k]
                        if v is not None:
                            for row in v:
                                row[j] -= q * row[k]
                    if dk[j]:
                        dirty = True
            if dirty:
                pos = _min_abs_pivot(d, k, n, m)
                continue
            # Pivot must divide the rest of the submatrix for the chain.
            bad = None
            for i in range(k + 1, n):
                di = d[i]
                for j in range(k + 1, m):
                    if di[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            di = d[bad]
            for c in range(k, m):
                dk[c] += di[c]
            if u is not None:
                uk, ub = u[k], u[bad]
                for c in range(len(uk)):
                    uk[c] += ub[c]
            pos = _min_abs_pivot(d, k, n, m)
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            if u is not None:
                u[k] = [-x for x in u[k]]
        k += 1
    return k


def smith_normal_form(a: IntMatrix) -> tuple[list[int], IntMatrix, IntMatrix]:
    """Invariant factors d1 | d2 | ... and unimodular U, V with U*A*V diagonal.

    >>> factors, u, v = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> factors
    [2, 4]
    """
    d = a.to_lists()
    u = IntMatrix.identity(a.nrows).to_lists()
    v = IntMatrix.identity(a.ncols).to_lists()
    rank = _smith_inplace(d, u, v)
    factors = [d[k][k] for k in range(rank)]
    return factors, IntMatrix.from_rows(u, a.nrows), IntMatrix.from_rows(v, a.ncols)


def invariant_factors(a: IntMatrix) -> list[int]:
    """Invariant factors only (no transform bookkeeping)."""
    d = a.to_lists()
    rank = _smith_inplace(d)
    return [d[k][k] for k in range(rank)]


def cokernel(a: IntMatrix) -> "FGAbelianGroup":
    """Z^nrows modulo the column span of a, in canonical form."""
    factors = invariant_factors(a)
    return FGAbelianGroup(a.nrows - len(factors), tuple(d for d in factors if d > 1))


# ---------------------------------------------------------------------------
# Column echelon / Hermite form, kernels, lattices
# ---------------------------------------------------------------------------

def _column_echelon(d, v=None):
    """Reduce d by unimodular column ops to column echelon form.

    Returns the list of (pivot_row, pivot_col) in order.  Column pivots are
    chosen by minimal absolute value to limit growth; after this, every
    column is either zero or has its lowest-index nonzero entry at a pivot
    row distinct from all other columns'.
    """
    n = len(d)
    m = len(d[0]) if n else 0
    active = list(range(m))
    pivots = []
    for r in range(n):
        live = [c for c in active if d[r][c] != 0]
        if not live:
            continue
        while True:
            cstar = min(live, key=lambda c: abs(d[r][c]))
            p = d[r][cstar]
            done = True
            for c in live:
                if c == cstar:
                    continue
                q = d[r][c] // p
                if q:
                    for i in range(r, n):
                        d[i][c] -= q * d[i][cstar]
                    if v is not None:
                        for row in v:
                            row[c] -= q * row[cstar]
            live = [c for c in live if d[r][c] != 0]
            if len(live) <= 1:
                break
        if live:
            c = live[0]
            if d[r][c] < 0:
                for i in range(r, n):
                    d[i][c] = -d[i][c]
                if v is not None:
                    for row in v:
                        row[c] = -row[c]
            pivots.append((r, c))
            active.remove(c)
    return pivots


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a basis of the saturated integer kernel {v : Av = 0}.

    >>> kernel_basis(IntMatrix.from_rows([[2, 4]])).columns()
    [(2, -1)]
    """
    d = a.to_lists()
    v = IntMatrix.identity(a.ncols).to_lists()
    pivots = _column_echelon(d, v)
    pivot_cols = {c for _, c in pivots}
    free = [c for c in range(a.ncols) if c not in pivot_cols]
    cols = [[v[i][c] for i in range(a.ncols)] for c in free]
    return IntMatrix.from_columns(cols, nrows=a.ncols)


def column_hnf(a: IntMatrix) -> IntMatrix:
    """Canonical column Hermite form of the lattice spanned by the columns.

    Zero columns are dropped; pivots are positive and entries to the right
    of each pivot (in the pivot's row) are reduced into [0, pivot).  Two
    column spans are equal as lattices iff their forms are equal.
    """
    d = a.to_lists()
    pivots = _column_echelon(d)
    # Canonicity: entries of earlier pivot columns at a later pivot row are
    # reduced into [0, pivot).  Ascending order keeps prior reductions intact
    # (a pivot column is zero above its own pivot row).
    for idx, (r, c) in enumerate(pivots):
        p = d[r][c]
        for _, c2 in pivots[:idx]:
            q = d[r][c2] // p
            if q:
                for i in range(r, a.nrows):
                    d[i][c2] -= q * d[i][c]
    cols = [[d[i][c] for i in range(a.nrows)] for _, c in pivots]
    return IntMatrix.from_columns(cols, nrows=a.nrows)


def lattices_equal(a: IntMatrix, b: IntMatrix) -> bool:
    """Do the columns of a and b span the same sublattice of Z^n?"""
    if a.nrows != b.nrows:
        return False
    return column_hnf(a) == column_hnf(b)


def lattice_membership(b: IntMatrix, vec) -> tuple[int, ...] | None:
    """Integer coefficients c with B*c = vec, or None if vec is not in the span.

    >>> lattice_membership(IntMatrix.from_rows([[2, 1], [0, 3]]), (3, 3))
    (1, 1)
    >>> lattice_membership(IntMatrix.diagonal([2, 2]), (1, 0)) is None
    True
    """
    solver = LatticeSolver(b)
    return solver.solve(vec)


class LatticeSolver:
    """Repeated exact solves of B*c = v against a fixed column lattice."""

    def __init__(self, b: IntMatrix):
        self.nrows = b.nrows
        self.ncols = b.ncols
        d = b.to_lists()
        v = IntMatrix.identity(b.ncols).to_lists()
        self.pivots = _column_echelon(d, v)
        self.ech = d
        self.trans = v

    def solve(self, vec) -> tuple[int, ...] | None:
        vec = list(vec)
        if len(vec) != self.nrows:
            raise ValueError("vector length mismatch")
        y = [0] * self.ncols
        for r, c in self.pivots:
            p = self.ech[r][c]
            if vec[r] % p:
                return None
            q = vec[r] // p
            y[c] = q
            if q:
                for i in range(r, self.nrows):
                    vec[i] -= q * self.ech[i][c]
        if any(vec):
            return None
        trans = self.trans
        return tuple(
            sum(trans[i][c] * y[c] for c in range(self.ncols))
            for i in range(self.ncols)
        )

    def contains(self, vec) -> bool:
        return self.solve(vec) is not None


def solve_columns(b: IntMatrix, target: IntMatrix) -> IntMatrix | None:
    """Integer X with B*X = target, or None if some column is outside the span."""
    solver = LatticeSolver(b)
    cols = []
    for j in range(target.ncols):
        c = solver.solve(target.column(j))
        if c is None:
            return None
        cols.append(c)
    return IntMatrix.from_columns(cols, nrows=b.ncols)


# ---------------------------------------------------------------------------
# Ranks over Q and over prime fields
# ---------------------------------------------------------------------------

def _clear_denominators(rows) -> list[list[int]]:
    cleared = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        cleared.append([int(x * den) for x in fr])
    return cleared


def rational_rank(a) -> int:
    """Rank over Q; accepts an IntMatrix or rows of ints/Fractions."""
    if isinstance(a, IntMatrix):
        rows = a.to_lists()
    else:
        rows = _clear_denominators(a)
    n = len(rows)
    m = len(rows[0]) if n else 0
    rank = 0
    for j in range(m):
        piv = None
        for i in range(rank, n):
            if rows[i][j]:
                if piv is None or abs(rows[i][j]) < abs(rows[piv][j]):
                    piv = i
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        # Fraction-free elimination of the rest of the column.
        pr = rows[rank]
        p = pr[j]
        for i in range(n):
            if i != rank and rows[i][j]:
                ri = rows[i]
                x = ri[j]
                g = gcd(p, x)
                mp, mx = p // g, x // g
                for c in range(j, m):
                    ri[c] = ri[c] * mp - pr[c] * mx
        rank += 1
        if rank == n:
            break
    return rank


def rational_nullspace_rank(a) -> int:
    """Dimension over Q of the kernel of a (rational entries allowed)."""
    if isinstance(a, IntMatrix):
        ncols = a.ncols
    else:
        a = [list(r) for r in a]
        ncols = len(a[0]) if a else 0
    return ncols - rational_rank(a)


def rank_mod_p(a: IntMatrix, p: int) -> int:
    rows = [[x % p for x in r] for r in a.rows]
    n, m = a.nrows, a.ncols
    rank = 0
    for j in range(m):
        piv = next((i for i in range(rank, n) if rows[i][j]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][j], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        pr = rows[rank]
        for i in range(n):
            if i != rank and rows[i][j]:
                c = rows[i][j]
                rows[i] = [(x - c * y) % p for x, y in zip(rows[i], pr)]
        rank += 1
        if rank == n:
            break
    return rank


def nullspace_mod_p(a: IntMatrix, p: int) -> list[tuple[int, ...]]:
    """Basis of the kernel of a over F_p."""
    rows = [[x % p for x in r] for r in a.rows]
    n, m = a.nrows, a.ncols
    pivots: list[int] = []
    rank = 0
    for j in range(m):
        piv = next((i for i in range(rank, n) if rows[i][j]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][j], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        pr = rows[rank]
        for i in range(n):
            if i != rank and rows[i][j]:
                c = rows[i][j]
                rows[i] = [(x - c * y) % p for x, y in zip(rows[i], pr)]
        pivots.append(j)
        rank += 1
        if rank == n:
            break
    basis = []
    pivot_set = set(pivots)
    for j in range(m):
        if j in pivot_set:
            continue
        vec = [0] * m
        vec[j] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-rows[r][j]) % p
        basis.append(tuple(vec))
    return basis


# ---------------------------------------------------------------------------
# Cochain complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntChainComplex:
    """A cochain complex 0 -> C^0 -> C^1 -> ... given by its differentials.

    ``differentials[i]`` is the map C^i -> C^{i+1}, stored as an IntMatrix
    whose column count is dim C^i and row count is dim C^{i+1}.  The ring
    tag is "Z" or "Fp" for a prime p.
    """

    differentials: tuple[IntMatrix, ...]
    ring: str = "Z"

    def __post_init__(self):
        ds = self.differentials
        for a, b in zip(ds, ds[1:]):
            if b.ncols != a.nrows:
                raise ValueError("differentials have incompatible dimensions")
            comp = b * a
            if self.ring != "Z":
                comp = comp.mod(self._p)
            if not comp.is_zero:
                raise ValueError("composite of consecutive differentials is nonzero")

    @property
    def _p(self) -> int:
        return int(self.ring[1:])

    def dimension(self, n: int) -> int:
        ds = self.differentials
        if n < len(ds):
            return ds[n].ncols
        if n == len(ds):
            return ds[-1].nrows if ds else 0
        raise IndexError(n)

    @property
    def top_degree(self) -> int:
        return len(self.differentials)


def complex_cohomology(cx: IntChainComplex):
    """H^n = ker d^n / im d^{n-1} for n = 0..top.

    Over Z the result is a list of FGAbelianGroup; over F_p a list of
    dimensions.
    """
    ds = cx.differentials
    top = cx.top_degree
    if cx.ring != "Z":
        p = cx._p
        out = []
        for n in range(top + 1):
            null = cx.dimension(n) - (rank_mod_p(ds[n], p) if n < top else 0)
            prev = rank_mod_p(ds[n - 1], p) if n > 0 else 0
            out.append(null - prev)
        return out
    out = []
    for n in range(top + 1):
        if n == top:
            ker: IntMatrix | None = None  # whole module
        else:
            ker = kernel_basis(ds[n])
        if n == 0:
            img = None
        else:
            img = ds[n - 1]
        if ker is None:
            group = cokernel(img) if img is not None else FGAbelianGroup(cx.dimension(n))
        elif img is None or img.ncols == 0 or img.is_zero:
            group = FGAbelianGroup(ker.ncols)
        else:
            x = solve_columns(ker, img)
            if x is None:
                raise ValueError("image does not lie in the kernel")
            group = cokernel(x)
        out.append(group)
    return out


def homology_pair(d_in: IntMatrix, d_out: IntMatrix) -> "FGAbelianGroup":
    """ker(d_out) / im(d_in) for maps ... -> B --d_in--> C --d_out--> ...

    d_in may be None (no incoming map); d_out may be None (kernel = all of C).
    """
    if d_out is None:
        if d_in is None:
            raise ValueError("need at least one map")
        return cokernel(d_in)
    ker = kernel_basis(d_out)
    if d_in is None or d_in.ncols == 0 or d_in.is_zero:
        return FGAbelianGroup(ker.ncols)
    x = solve_columns(ker, d_in)
    if x is None:
        raise ValueError("image does not lie in the kernel")
    return cokernel(x)
