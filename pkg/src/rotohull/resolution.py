"""Free resolutions of Z over the integral group ring of a finite group.

The builder is fully algorithmic: each boundary's saturated integer kernel
is computed exactly, and group-ring generators for it are chosen greedily
(smallest support first, a candidate is kept only when it lies outside the
lattice spanned by the orbits of the generators already chosen).  The
emitted ranks carry no minimality guarantee; exactness does not depend on
them and is certified machine-checkably on the expanded integer complex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .abelian import FGAbelianGroup
from .groups import FiniteGroup
from .intlinalg import (
    IntMatrix,
    LatticeSolver,
    cokernel,
    column_hnf,
    homology_pair,
    kernel_basis,
    lattices_equal,
    rank_mod_p,
)

GroupRingEntry = dict[int, int]  # element index -> integer coefficient


@dataclass
class GroupRingMatrix:
    """An r_out x r_in matrix over ZG, stored sparsely."""

    group: FiniteGroup
    nrows: int
    ncols: int
    entries: dict[tuple[int, int], GroupRingEntry] = field(default_factory=dict)

    def set_entry(self, row: int, col: int, value: GroupRingEntry) -> None:
        value = {g: c for g, c in value.items() if c}
        if value:
            self.entries[(row, col)] = value

    def expanded(self) -> IntMatrix:
        """Integer matrix on the Z-basis (module index, group element).

        Column (m, g) is the image of g * e_m, i.e. the g-translate of the
        column entries: a term c*h in entry (m', m) contributes c at row
        (m', g*h).
        """
        n = self.group.order
        table = self.group.table
        rows = [[0] * (self.ncols * n) for _ in range(self.nrows * n)]
        for (mp, m), lam in self.entries.items():
            for h, c in lam.items():
                row_base = mp * n
                for g in range(n):
                    rows[row_base + table[g][h]][m * n + g] += c
        return IntMatrix.from_rows(rows, ncols=self.ncols * n)


@dataclass
class FreeResolution:
    """C_0 <- C_1 <- ... <- C_N over ZG with C_0 = ZG and augmentation to Z."""

    group: FiniteGroup
    ranks: list[int]
    boundaries: list[GroupRingMatrix]  # boundaries[i]: C_{i+1} -> C_i
    certificate: "CertificationReport | None" = None

    def __post_init__(self):
        self._expanded: dict[int, IntMatrix] = {}

    @property
    def depth(self) -> int:
        return len(self.boundaries)

    def expanded(self, i: int) -> IntMatrix:
        """Expanded integer matrix of boundary i (1-based, like the maths)."""
        if i not in self._expanded:
            self._expanded[i] = self.boundaries[i - 1].expanded()
        return self._expanded[i]

    def augmentation(self) -> IntMatrix:
        return IntMatrix.from_rows([[1] * self.group.order])


@dataclass
class CertificationReport:
    ok: bool
    depth: int
    checked_homology_through: int
    failures: list[str]

    def __str__(self):
        if self.ok:
            return (
                f"certificate OK: d.d = 0, H_0 = Z, H_i = 0 for "
                f"1 <= i <= {self.checked_homology_through}"
            )
        return "certificate FAILED: " + "; ".join(self.failures)


def _orbit_columns(group: FiniteGroup, rank: int, vec) -> list[tuple[int, ...]]:
    """All translates g*v of a vector in the expanded basis of (ZG)^rank."""
    n = group.order
    table = group.table
    cols = []
    for g in range(n):
        row = table[g]
        out = [0] * (rank * n)
        for m in range(rank):
            base = m * n
            for h in range(n):
                c = vec[base + h]
                if c:
                    out[base + row[h]] = c
        cols.append(tuple(out))
    return cols


def _vector_to_entries(group: FiniteGroup, rank: int, vec) -> list[GroupRingEntry]:
    n = group.order
    return [
        {h: vec[m * n + h] for h in range(n) if vec[m * n + h]} for m in range(rank)
    ]


def _candidate_order(vec) -> tuple:
    support = sum(1 for x in vec if x)
    return (support, max((abs(x) for x in vec), default=0), sum(abs(x) for x in vec), vec)


_RANK_PRIME = 10007


def _orbit_rank(group: FiniteGroup, rank: int, vec) -> int:
    cols = _orbit_columns(group, rank, vec)
    return rank_mod_p(IntMatrix.from_columns(cols, nrows=rank * group.order),
                      _RANK_PRIME)


def _choose_generators(group: FiniteGroup, rank: int, kernel: IntMatrix):
    """Greedy ZG-generators of a G-stable lattice given by a kernel basis.

    A forward pass adds basis vectors (smallest support first) that the
    orbit span of the current picks misses; a backward prune then drops any
    pick whose orbit the others cover.  Pruning matters: without it, one
    oversized level inflates every kernel below it.
    """
    dim = rank * group.order
    # Small-support candidates first; among ties, prefer the vector whose
    # group-ring orbit spans the most (difference vectors g - h cover more
    # when g^-1 h has higher order).
    candidates = sorted(
        (kernel.column(j) for j in range(kernel.ncols)),
        key=lambda v: _candidate_order(v)[:3] + (-_orbit_rank(group, rank, v), v),
    )
    target_hnf = column_hnf(kernel)

    chosen: list[tuple[int, ...]] = []
    span_cols: list[tuple[int, ...]] = []
    solver: LatticeSolver | None = None
    for vec in candidates:
        if solver is not None and solver.contains(vec):
            continue
        chosen.append(vec)
        span_cols.extend(_orbit_columns(group, rank, vec))
        solver = LatticeSolver(IntMatrix.from_columns(span_cols, nrows=dim))

    def spans_kernel(vectors) -> bool:
        cols = [c for v in vectors for c in _orbit_columns(group, rank, v)]
        return column_hnf(IntMatrix.from_columns(cols, nrows=dim)) == target_hnf

    changed = True
    while changed and len(chosen) > 1:
        changed = False
        for idx in range(len(chosen) - 1, -1, -1):
            trimmed = chosen[:idx] + chosen[idx + 1:]
            if spans_kernel(trimmed):
                chosen = trimmed
                changed = True
                break

    if not spans_kernel(chosen):
        raise AssertionError("orbit span of chosen generators misses the kernel")
    return chosen


def build_resolution(group: FiniteGroup, max_degree: int) -> FreeResolution:
    """Free resolution of the trivial ZG-module Z to the given depth.

    Degree 1 uses the generators g - 1 for the designated group generators;
    deeper boundaries map a free basis onto greedily chosen generators of
    the previous kernel lattice.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    n = group.order
    if n > 48:
        raise ValueError("groups beyond order 48 are outside this builder's remit")

    ranks = [1]
    boundaries: list[GroupRingMatrix] = []

    if n == 1:
        # Z <- Z <- 0 <- 0 <- ...
        ranks.append(0)
        boundaries.append(GroupRingMatrix(group, 1, 0))
        for _ in range(2, max_degree + 1):
            ranks.append(0)
            boundaries.append(GroupRingMatrix(group, 0, 0))
        return FreeResolution(group, ranks, boundaries)

    d1 = GroupRingMatrix(group, 1, len(group.generators))
    for col, s in enumerate(group.generators):
        d1.set_entry(0, col, {s: 1, group.identity: -1})
    aug_kernel = kernel_basis(IntMatrix.from_rows([[1] * n]))
    if not lattices_equal(d1.expanded(), aug_kernel):
        raise AssertionError(
            "g - 1 for the designated generators misses the augmentation ideal"
        )
    ranks.append(d1.ncols)
    boundaries.append(d1)

    for i in range(2, max_degree + 1):
        prev = boundaries[-1]
        kernel = kernel_basis(prev.expanded())
        chosen = _choose_generators(group, prev.ncols, kernel)
        d = GroupRingMatrix(group, prev.ncols, len(chosen))
        for col, vec in enumerate(chosen):
            for row, lam in enumerate(_vector_to_entries(group, prev.ncols, vec)):
                d.set_entry(row, col, lam)
        ranks.append(len(chosen))
        boundaries.append(d)

    return FreeResolution(group, ranks, boundaries)


def certify_resolution(resolution: FreeResolution) -> CertificationReport:
    """Machine-check exactness on the expanded integer complex.

    Verifies d_i . d_{i+1} = 0, H_0 = Z via the augmentation, and H_i = 0
    for 1 <= i <= depth - 1; reports the first failing degree.
    """
    failures: list[str] = []
    depth = resolution.depth
    group = resolution.group

    if group.order == 1:
        report = CertificationReport(True, depth, depth - 1, [])
        resolution.certificate = report
        return report

    aug = resolution.augmentation()
    d1 = resolution.expanded(1)
    if d1.ncols and not (aug * d1).is_zero:
        failures.append("augmentation does not kill the image of d_1")
    h0 = cokernel(d1)
    if h0 != FGAbelianGroup(1):
        failures.append(f"H_0 = {h0}, expected Z")

    for i in range(1, depth):
        di = resolution.expanded(i)
        dnext = resolution.expanded(i + 1)
        if dnext.ncols and not (di * dnext).is_zero:
            failures.append(f"d_{i} . d_{i + 1} != 0")
            break
        hi = homology_pair(dnext, di)
        if not hi.is_trivial:
            failures.append(f"H_{i} = {hi}, expected 0")
            break

    report = CertificationReport(not failures, depth, depth - 1, failures)
    resolution.certificate = report
    return report


def standard_c2_resolution(group: FiniteGroup, max_degree: int) -> FreeResolution:
    """The textbook period-2 resolution of C_2: boundaries t-1, t+1, t-1, ...

    Used as an independent comparison point for the algorithmic builder.
    """
    if group.order != 2:
        raise ValueError("this resolution is for the order-2 group")
    t = 1 if group.identity == 0 else 0
    ranks = [1] * (max_degree + 1)
    boundaries = []
    for i in range(1, max_degree + 1):
        d = GroupRingMatrix(group, 1, 1)
        sign = -1 if i % 2 == 1 else 1
        d.set_entry(0, 0, {t: 1, group.identity: sign})
        boundaries.append(d)
    return FreeResolution(group, ranks, boundaries)


def bar_resolution(group: FiniteGroup, max_degree: int) -> FreeResolution:
    """The normalised bar resolution; exponential, for small-group oracles."""
    n = group.order
    if n ** max_degree > 100000:
        raise ValueError("bar resolution would be too large; use the builder")
    nontrivial = [g for g in range(n) if g != group.identity]

    def tuples(k):
        if k == 0:
            return [()]
        out = []
        for prefix in tuples(k - 1):
            for g in nontrivial:
                out.append(prefix + (g,))
        return out

    ranks = []
    boundaries = []
    basis_by_degree = [tuples(k) for k in range(max_degree + 1)]
    ranks = [len(b) for b in basis_by_degree]
    for k in range(1, max_degree + 1):
        src = basis_by_degree[k]
        dst_index = {t: i for i, t in enumerate(basis_by_degree[k - 1])}
        d = GroupRingMatrix(group, ranks[k - 1], ranks[k])
        for col, tup in enumerate(src):
            acc: dict[int, GroupRingEntry] = {}

            def add(row_tuple, g, c):
                if any(x == group.identity for x in row_tuple):
                    return
                row = dst_index[row_tuple]
                cell = acc.setdefault(row, {})
                cell[g] = cell.get(g, 0) + c

            add(tup[1:], tup[0], 1)
            sign = -1
            for i in range(k - 1):
                merged = tup[:i] + (group.mul(tup[i], tup[i + 1]),) + tup[i + 2:]
                add(merged, group.identity, sign)
                sign = -sign
            add(tup[:-1], group.identity, sign)
            for row, lam in acc.items():
                d.set_entry(row, col, lam)
        boundaries.append(d)
    return FreeResolution(group, ranks, boundaries)


# -- caching and serialisation ------------------------------------------------

_RESOLUTION_CACHE: dict[tuple[str, int], FreeResolution] = {}


def get_resolution(group: FiniteGroup, depth: int,
                   cache_dir: str | None = None) -> FreeResolution:
    """Certified resolution of at least the requested depth, cached by name.

    Anonymous groups (empty name) are rebuilt on every call.
    """
    key = (group.name, group.order)
    cached = _RESOLUTION_CACHE.get(key)
    if cached is not None and cached.depth >= depth:
        return cached
    if group.name and cache_dir:
        loaded = _load_from_disk(group, depth, cache_dir)
        if loaded is not None:
            _RESOLUTION_CACHE[key] = loaded
            return loaded
    res = build_resolution(group, depth)
    report = certify_resolution(res)
    if not report.ok:
        raise AssertionError(f"freshly built resolution failed certification: {report}")
    if group.name:
        _RESOLUTION_CACHE[key] = res
        if cache_dir:
            _save_to_disk(res, cache_dir)
    return res


def resolution_to_json(res: FreeResolution) -> dict:
    return {
        "format": 1,
        "group": res.group.name,
        "order": res.group.order,
        "ranks": list(res.ranks),
        "boundaries": [
            {
                "rows": b.nrows,
                "cols": b.ncols,
                "entries": [
                    [row, col, sorted((g, c) for g, c in lam.items())]
                    for (row, col), lam in sorted(b.entries.items())
                ],
            }
            for b in res.boundaries
        ],
    }


def resolution_from_json(data: dict, group: FiniteGroup) -> FreeResolution:
    if data.get("order") != group.order or data.get("group") != group.name:
        raise ValueError("resolution file does not match the group")
    boundaries = []
    for payload in data["boundaries"]:
        d = GroupRingMatrix(group, payload["rows"], payload["cols"])
        for row, col, items in payload["entries"]:
            d.set_entry(row, col, {g: c for g, c in items})
        boundaries.append(d)
    return FreeResolution(group, list(data["ranks"]), boundaries)


def _cache_path(group: FiniteGroup, depth: int, cache_dir: str):
    import os

    from . import __version__

    fname = f"resolution-{group.name}-d{depth}-v{__version__}.json"
    return os.path.join(cache_dir, fname)


def _save_to_disk(res: FreeResolution, cache_dir: str) -> None:
    import os

    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(res.group, res.depth, cache_dir)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(resolution_to_json(res), fh)


def _load_from_disk(group: FiniteGroup, depth: int, cache_dir: str):
    import os

    for have in range(depth, depth + 8):
        path = _cache_path(group, have, cache_dir)
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            res = resolution_from_json(data, group)
            report = certify_resolution(res)
            if report.ok and res.depth >= depth:
                return res
    return None
