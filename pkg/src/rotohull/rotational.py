"""Assembly of H*(Omega_r) from coefficient data.

Three pipelines: the 3-dimensional spectral pipeline over the space form
S^3/G~ (collapse asserted for models with an invariant skeleton, extensions
certified by F_p dimension counting), the planar closed form, and the
rational closed form.  Ambiguity is a first-class outcome, never an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import FGAbelianGroup
from .cohomology import group_cohomology, spaceform_cohomology
from .models import TilingModel
from .modules import coinvariants, invariants

CERTIFIED = "certified-trivial-extensions"
AMBIGUOUS = "ambiguous"

SO_BETTI = {2: [1, 1], 3: [1, 0, 0, 1]}


@dataclass
class E2Page:
    model_name: str
    ring: str
    fibration: str  # "spaceform" or "borel"
    n_max: int
    k_max: int
    cells: dict[tuple[int, int], FGAbelianGroup | int]

    def cell(self, n: int, k: int):
        return self.cells[(n, k)]

    def diagonal(self, total: int):
        return [
            self.cells[(n, total - n)]
            for n in range(self.n_max + 1)
            if 0 <= total - n <= self.k_max
        ]


@dataclass
class CohomologyTable:
    model_name: str
    ring: str
    by_degree: dict[int, FGAbelianGroup | int]
    status: str = CERTIFIED
    ambiguous_degrees: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    fp_dims: dict[int, list[int]] = field(default_factory=dict)

    @property
    def top_degree(self) -> int:
        return max(self.by_degree)

    def degree(self, n: int):
        return self.by_degree.get(n, FGAbelianGroup(0))


def e2_page_3d(model: TilingModel, ring: str = "Z",
               cache_dir: str | None = None) -> E2Page:
    """E_2 of the fibration over the space form: entry (n,k) = H^n(S^3/G~; H^k)."""
    if model.dimension != 3:
        raise ValueError("the space-form pipeline needs a 3-dimensional model")
    cells = {}
    for k in sorted(model.graded):
        col = spaceform_cohomology(model.group, model.graded[k], ring, cache_dir)
        for n in range(4):
            cells[(n, k)] = col[n]
    return E2Page(model.name, ring, "spaceform", 3, model.top_degree, cells)


def borel_e2_page(model: TilingModel, n_max: int = 4, ring: str = "Z",
                  cache_dir: str | None = None) -> E2Page:
    """The unbounded page H^n(G~; H^k) up to column n_max (no assembly)."""
    cells = {}
    for k in sorted(model.graded):
        col = group_cohomology(model.group, model.graded[k], range(n_max + 1),
                               ring, cache_dir)
        for n in range(n_max + 1):
            cells[(n, k)] = col[n]
    return E2Page(model.name, ring, "borel", n_max, model.top_degree, cells)


def _diagonal_sum(page: E2Page, total: int) -> FGAbelianGroup:
    groups = [g for g in page.diagonal(total)]
    out = FGAbelianGroup(0)
    for g in groups:
        out = out.direct_sum(g)
    return out


def assemble_3d(model: TilingModel, force: bool = False,
                cache_dir: str | None = None) -> CohomologyTable:
    """H^*(Omega_r; Z) with extension certification by F_p dimension counts.

    The candidate in degree n is the direct sum over the E_2 diagonal
    (all-trivial extensions).  For every prime p dividing some torsion
    order on the page, the F_p page's diagonal dimensions are compared
    against the universal-coefficient dimensions of the candidate; the
    result is certified only when every degree matches.
    """
    if not model.has_invariant_skeleton and not force:
        raise ValueError(
            "model does not declare an invariant skeleton; the collapse "
            "assumption is unavailable (pass force=True to override)"
        )
    page = e2_page_3d(model, "Z", cache_dir)
    top = 3 + model.top_degree
    candidate = {n: _diagonal_sum(page, n) for n in range(top + 1)}

    primes: set[int] = set()
    for cell in page.cells.values():
        primes |= cell.torsion_primes()

    notes = []
    if not model.has_invariant_skeleton:
        notes.append("collapse forced without an invariant skeleton; unsound")
    ambiguous: list[int] = []
    fp_dims: dict[int, list[int]] = {}
    for p in sorted(primes):
        fp_page = e2_page_3d(model, f"F{p}", cache_dir)
        dims = [sum(fp_page.diagonal(n)) for n in range(top + 1)]
        fp_dims[p] = dims
        for n in range(top + 1):
            expected = (
                candidate[n].dim_mod_p(p)
                + (candidate[n + 1].p_torsion_count(p) if n + 1 <= top else 0)
            )
            if dims[n] != expected:
                ambiguous.append(n)
                notes.append(
                    f"F_{p} dimension {dims[n]} in degree {n} is incompatible "
                    f"with the trivial-extension candidate ({expected})"
                )
        notes.append(f"F_{p} diagonal dimensions checked")

    status = CERTIFIED if not ambiguous else AMBIGUOUS
    return CohomologyTable(model.name, "Z", candidate, status,
                           sorted(set(ambiguous)), notes, fp_dims)


def planar_cohomology(model: TilingModel) -> CohomologyTable:
    """H^*(Omega_r; Z) for a planar model with cyclic point group.

    Degree n is an extension of the invariants of H^n(Omega_t) by the
    coinvariants of H^{n-1}(Omega_t); it splits whenever the invariant part
    is free, which holds for every model whose coefficient modules are
    free lattices.
    """
    if model.dimension != 2:
        raise ValueError("the planar closed form needs a 2-dimensional model")
    if not _is_cyclic(model):
        raise ValueError("the planar closed form needs a cyclic point group")
    top = model.top_degree
    by_degree: dict[int, FGAbelianGroup] = {}
    notes = []
    ambiguous: list[int] = []
    for n in range(top + 2):
        inv_part = FGAbelianGroup(0)
        if n in model.graded:
            rank, _ = invariants(model.graded[n])
            inv_part = FGAbelianGroup(rank)
        coin_part = FGAbelianGroup(0)
        if n - 1 in model.graded:
            coin_part = coinvariants(model.graded[n - 1])
        # Extension coin_part -> H^n -> inv_part; inv_part free => split.
        by_degree[n] = coin_part.direct_sum(inv_part)
        if n in model.graded and not inv_part.torsion:
            continue
        if n in model.graded:
            ambiguous.append(n)
            notes.append(f"invariant part in degree {n} has torsion; extension unresolved")
    status = CERTIFIED if not ambiguous else AMBIGUOUS
    if status == CERTIFIED:
        notes.append("all extensions split: invariant parts are free")
    return CohomologyTable(model.name, "Z", by_degree, status, ambiguous, notes)


def _is_cyclic(model: TilingModel) -> bool:
    group = model.group
    return any(group.element_order(i) == group.order for i in range(group.order))


def rational_cohomology(model: TilingModel, d: int | None = None) -> list[int]:
    """Ranks of H^n(Omega_r; Q): invariant ranks convolved with SO(d) Betti numbers."""
    d = model.dimension if d is None else d
    if d not in SO_BETTI:
        raise ValueError(f"unsupported dimension {d}")
    so = SO_BETTI[d]
    inv_ranks = []
    for k in range(model.top_degree + 1):
        rank, _ = invariants(model.graded[k], ring="Q")
        inv_ranks.append(rank)
    out = [0] * (model.top_degree + len(so))
    for a, ra in enumerate(inv_ranks):
        for b, rb in enumerate(so):
            out[a + b] += ra * rb
    return out
