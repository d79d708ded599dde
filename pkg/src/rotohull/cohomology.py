"""Twisted group cohomology H^n(G; M) and space-form cohomology H^n(S^3/Q; M).

Group cohomology is the cohomology of Hom_G(C_*, M) for a certified free
resolution C_* of Z over ZG.  A group-ring entry lambda = sum n_g g of a
boundary matrix contributes the block sum n_g rho(g) to the corresponding
cochain differential.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import FGAbelianGroup
from .groups import FiniteGroup
from .intlinalg import IntMatrix, homology_pair, rank_mod_p, rational_rank
from .modules import GModule, coinvariants, invariants, reduce_mod_p, ring_prime
from .resolution import FreeResolution, get_resolution


@dataclass
class CohomologyColumn:
    group: FiniteGroup
    module: GModule
    ring: str
    values: dict[int, FGAbelianGroup | int]

    def __getitem__(self, degree: int):
        return self.values[degree]


def cochain_differential(resolution: FreeResolution, module: GModule,
                         i: int) -> IntMatrix:
    """delta^i : M^{r_i} -> M^{r_{i+1}}, built from boundary i+1."""
    boundary = resolution.boundaries[i]  # C_{i+1} -> C_i
    r_in, r_out = boundary.nrows, boundary.ncols  # r_i, r_{i+1}
    rank = module.rank
    rows = [[0] * (r_in * rank) for _ in range(r_out * rank)]
    for (mp, m), lam in boundary.entries.items():
        # entry at (row mp, col m) of the boundary feeds block (m, mp)
        block = None
        for h, c in lam.items():
            mat = module.matrix(h)
            if block is None:
                block = [[c * x for x in row] for row in mat.rows]
            else:
                for a, row in enumerate(mat.rows):
                    ba = block[a]
                    for b, x in enumerate(row):
                        ba[b] += c * x
        if block is None:
            continue
        for a in range(rank):
            target = rows[m * rank + a]
            base = mp * rank
            for b in range(rank):
                target[base + b] += block[a][b]
    return IntMatrix.from_rows(rows, ncols=r_in * rank)


_COLUMN_CACHE: dict[tuple, CohomologyColumn] = {}


def group_cohomology(group: FiniteGroup, module: GModule, degrees,
                     ring: str | None = None,
                     cache_dir: str | None = None) -> CohomologyColumn:
    """H^n(G; M) for the requested degrees (a resolution is built on demand)."""
    if module.group is not group:
        raise ValueError("module is not over the requested group")
    degrees = sorted(set(degrees))
    if degrees and degrees[0] < 0:
        raise ValueError("negative degree")
    ring = ring or module.ring
    p = ring_prime(ring)

    key = (module.cache_key(), ring, tuple(degrees))
    if group.name and key in _COLUMN_CACHE:
        return _COLUMN_CACHE[key]

    values: dict[int, FGAbelianGroup | int] = {}
    if group.order == 1:
        for n in degrees:
            if p is not None:
                values[n] = module.rank if n == 0 else 0
            else:
                values[n] = FGAbelianGroup(module.rank) if n == 0 else FGAbelianGroup(0)
        column = CohomologyColumn(group, module, ring, values)
        if group.name:
            _COLUMN_CACHE[key] = column
        return column

    depth = max(degrees) + 1
    res = get_resolution(group, depth, cache_dir)
    column = column_from_resolution(res, module, degrees, ring)
    if group.name:
        _COLUMN_CACHE[key] = column
    return column


def column_from_resolution(res: FreeResolution, module: GModule, degrees,
                           ring: str | None = None) -> CohomologyColumn:
    """Cohomology of Hom_G(C_*, M) for an explicitly supplied resolution."""
    degrees = sorted(set(degrees))
    ring = ring or module.ring
    p = ring_prime(ring)
    if max(degrees) + 1 > res.depth:
        raise ValueError("resolution is too shallow for the requested degrees")
    mod_p = reduce_mod_p(module, p) if (p is not None and module.ring == "Z") else module
    deltas = {
        i: cochain_differential(res, mod_p, i) for i in range(max(degrees) + 1)
    }
    values: dict[int, FGAbelianGroup | int] = {}
    for n in degrees:
        d_out = deltas.get(n)
        d_in = deltas.get(n - 1) if n > 0 else None
        if p is not None:
            dim = res.ranks[n] * module.rank
            r_out = rank_mod_p(d_out, p) if d_out is not None else 0
            r_in = rank_mod_p(d_in, p) if d_in is not None else 0
            values[n] = dim - r_out - r_in
        elif ring == "Q":
            dim = res.ranks[n] * module.rank
            r_out = rational_rank(d_out) if d_out is not None else 0
            r_in = rational_rank(d_in) if d_in is not None else 0
            values[n] = FGAbelianGroup(dim - r_out - r_in)
        else:
            values[n] = homology_pair(d_in, d_out)
    return CohomologyColumn(res.group, module, ring, values)


def spaceform_cohomology(group: FiniteGroup, module: GModule,
                         ring: str | None = None,
                         cache_dir: str | None = None) -> CohomologyColumn:
    """H^n(S^3/Q; M) for n = 0..3, Q acting freely on S^3.

    Degrees 0-2 agree with group cohomology; degree 3 is the coinvariants
    M_Q (Poincare duality with local coefficients on the closed orientable
    quotient).  For the trivial group the answer is H^*(S^3; M).
    """
    ring = ring or module.ring
    p = ring_prime(ring)
    if group.order == 1:
        if p is not None:
            values = {0: module.rank, 1: 0, 2: 0, 3: module.rank}
        else:
            values = {
                0: FGAbelianGroup(module.rank),
                1: FGAbelianGroup(0),
                2: FGAbelianGroup(0),
                3: FGAbelianGroup(module.rank),
            }
        return CohomologyColumn(group, module, ring, values)

    base = group_cohomology(group, module, range(3), ring, cache_dir)
    values = dict(base.values)
    values[3] = coinvariants(module, ring)
    if p is None and ring == "Z":
        # Rank-level consistency with the 4-term comparison sequence:
        # H^3(BQ; M) is finite, H^4(BQ; M) is finite, so the free rank of
        # H^3(S^3/Q; M) must equal the free rank of H^0 = M^Q.
        inv_rank, _ = invariants(module)
        if values[3].free_rank != inv_rank:
            raise AssertionError(
                "degree-3 duality value is inconsistent with the invariants rank"
            )
    return CohomologyColumn(group, module, ring, values)
