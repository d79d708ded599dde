"""Empirical point-group detection for decorated cubical tilings.

For each patch size n the scanner computes the subgroup G_n of candidate
rotations mapping every n-patch into the patch set, and the witness set
E_n of rotations outside G_n that map at least one patch in.  Verdicts are
explicitly empirical: a finite scan cannot prove the defining condition
for all radii, so reports always carry the full n-table.

Candidate rotations are the lattice-preserving ones only: the 4 rotations
of the square (d = 2) or the 24 signed-permutation rotations of the cube
(d = 3); label-decorated cubical tilings admit no others.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct

from .groups import builtin_group
from .words import GOLDEN_SLOPE, Word, source_from_json

Patch = tuple  # nested tuples of labels (colorings) or a tuple of words (products)


def square_rotations() -> list[tuple[tuple[int, ...], ...]]:
    r = ((0, -1), (1, 0))
    out = [((1, 0), (0, 1))]
    for _ in range(3):
        prev = out[-1]
        out.append(tuple(tuple(sum(r[i][k] * prev[k][j] for k in range(2)) for j in range(2)) for i in range(2)))
    return out


def cube_rotations() -> list[tuple[tuple[int, ...], ...]]:
    octa = builtin_group("O")
    return [octa.rotation_image_int(i).rows for i in range(octa.order)]


def rotation_candidates(d: int):
    if d == 2:
        return square_rotations()
    if d == 3:
        return cube_rotations()
    raise ValueError(f"no candidate rotations in dimension {d}")


def signed_permutation(mat) -> list[tuple[int, int]]:
    """axis i -> (pi(i), eps_i) for a signed permutation matrix."""
    d = len(mat)
    out = []
    for i in range(d):
        col = [(r, mat[r][i]) for r in range(d) if mat[r][i]]
        if len(col) != 1 or col[0][1] not in (1, -1):
            raise ValueError("candidate rotation is not a signed permutation")
        out.append(col[0])
    return out


# -- patch systems -------------------------------------------------------------

@dataclass
class ProductSystem:
    """Labels form a product of per-axis words; an n-patch is a tuple of
    length n+1 words, one per axis."""

    sources: tuple
    kind: str = "product-of-words"

    @property
    def dimension(self) -> int:
        return len(self.sources)

    def axis_words(self, n: int) -> list[frozenset[Word]]:
        return [src.words(n + 1) for src in self.sources]

    def patch_set(self, n: int) -> set[Patch]:
        sets = self.axis_words(n)
        return {tuple(combo) for combo in iproduct(*sets)}

    def rotate_patch(self, patch: Patch, mat) -> Patch:
        perm = signed_permutation(mat)
        out: list[Word | None] = [None] * len(patch)
        for i, word in enumerate(patch):
            target, sign = perm[i]
            out[target] = tuple(reversed(word)) if sign < 0 else word
        return tuple(out)

    def rotated_in_set(self, patch: Patch, mat, sets) -> bool:
        rotated = self.rotate_patch(patch, mat)
        return all(w in s for w, s in zip(rotated, sets))


@dataclass
class ColoringSystem:
    """Cell coloring of Z^d scanned over [-L(n), L(n)]^d windows."""

    color: object  # callable (coords tuple) -> hashable label
    dimension: int
    window: object  # callable n -> L
    kind: str = "rule-coloring"
    note: str = ""

    def patch_set(self, n: int) -> set[Patch]:
        L = self.window(n)
        if L < n:
            raise ValueError("scan window smaller than the patch")
        w = 2 * n + 1
        centers = range(-(L - n), L - n + 1)
        patches = set()
        if self.dimension == 2:
            for cx in centers:
                for cy in centers:
                    patches.add(tuple(
                        tuple(self.color((cx - n + i, cy - n + j)) for j in range(w))
                        for i in range(w)
                    ))
        elif self.dimension == 3:
            for cx in centers:
                for cy in centers:
                    for cz in centers:
                        patches.add(tuple(
                            tuple(
                                tuple(self.color((cx - n + i, cy - n + j, cz - n + k))
                                      for k in range(w))
                                for j in range(w)
                            )
                            for i in range(w)
                        ))
        else:
            raise ValueError("colorings support d in {2, 3}")
        return patches

    def rotate_patch(self, patch: Patch, mat) -> Patch:
        d = self.dimension
        n = (len(patch) - 1) // 2
        w = 2 * n + 1

        def cell(p, coords):
            for c in coords:
                p = p[c + n]
            return p

        # inverse of a signed permutation matrix is its transpose
        inv = tuple(tuple(mat[j][i] for j in range(d)) for i in range(d))

        def source(y):
            return tuple(sum(inv[i][j] * y[j] for j in range(d)) for i in range(d))

        rng = range(-n, n + 1)
        if d == 2:
            return tuple(
                tuple(cell(patch, source((i, j))) for j in rng) for i in rng
            )
        return tuple(
            tuple(
                tuple(cell(patch, source((i, j, k))) for k in rng) for j in rng
            )
            for i in rng
        )

    def rotated_in_set(self, patch: Patch, mat, patches) -> bool:
        return self.rotate_patch(patch, mat) in patches


@dataclass
class ExplicitPatchSystem:
    """Patches supplied directly, keyed by n (already translation-reduced)."""

    dimension: int
    patches_by_n: dict[int, set[Patch]]
    kind: str = "explicit-patch-list"

    def patch_set(self, n: int) -> set[Patch]:
        if n not in self.patches_by_n:
            raise ValueError(f"no patches supplied for n = {n}")
        return set(self.patches_by_n[n])

    def rotate_patch(self, patch: Patch, mat) -> Patch:
        helper = ColoringSystem(lambda c: 0, self.dimension, lambda n: n)
        return helper.rotate_patch(patch, mat)

    def rotated_in_set(self, patch: Patch, mat, patches) -> bool:
        return self.rotate_patch(patch, mat) in patches


def patch_set(system, n: int) -> set[Patch]:
    return system.patch_set(n)


# -- scanning ------------------------------------------------------------------

@dataclass
class PointGroupReport:
    system_name: str
    dimension: int
    n_table: list[dict]  # per n: {"n", "G_order", "G", "E", "witness"}
    verdict: str  # "point-group" | "undefined" | "inconclusive"
    group_order: int | None
    stabilization_index: int | None
    notes: list[str] = field(default_factory=list)

    def describe(self) -> str:
        lines = [f"system {self.system_name} (d={self.dimension})"]
        for row in self.n_table:
            extra = f", E_n witnesses {len(row['E'])}" if row["E"] else ""
            lines.append(f"  n={row['n']}: |G_n| = {len(row['G'])}{extra}")
        if self.verdict == "point-group":
            lines.append(f"verdict: point group of order {self.group_order} (empirical)")
        elif self.verdict == "undefined":
            lines.append("verdict: undefined (empirical)")
        else:
            lines.append("verdict: inconclusive")
        lines.extend(f"note: {note}" for note in self.notes)
        return "\n".join(lines)


def point_group_scan(system, n_max: int, name: str = "") -> PointGroupReport:
    """Scan patch sizes 1..n_max and classify every candidate rotation."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    d = system.dimension
    candidates = rotation_candidates(d)
    table = []
    prev_g: set[int] | None = None
    for n in range(1, n_max + 1):
        patches = system.patch_set(n)
        sets = system.axis_words(n) if isinstance(system, ProductSystem) else patches
        g_n: set[int] = set()
        e_n: dict[int, Patch] = {}
        for ci, mat in enumerate(candidates):
            hits = 0
            total = 0
            witness = None
            ok = True
            for patch in patches:
                total += 1
                if system.rotated_in_set(patch, mat, sets):
                    hits += 1
                    witness = patch
                else:
                    ok = False
            if ok and total:
                g_n.add(ci)
            elif hits:
                e_n[ci] = witness
        if prev_g is not None and not g_n <= prev_g:
            raise AssertionError("G_n failed to be monotone decreasing")
        prev_g = g_n
        table.append({
            "n": n,
            "G": sorted(g_n),
            "E": sorted(e_n),
            "witness": {ci: e_n[ci] for ci in sorted(e_n)},
        })

    tail = (n_max + 1) // 2
    tail_rows = table[-tail:]
    stabilized = all(row["G"] == tail_rows[0]["G"] for row in tail_rows)
    stab_index = None
    if stabilized:
        final = table[-1]["G"]
        stab_index = next(row["n"] for row in table if row["G"] == final)
    final_e = table[-1]["E"]
    if stabilized and not final_e:
        verdict, order = "point-group", len(table[-1]["G"])
    elif stabilized and final_e:
        verdict, order = "undefined", None
    else:
        verdict, order = "inconclusive", None
    notes = []
    if getattr(system, "note", ""):
        notes.append(system.note)
    return PointGroupReport(name or getattr(system, "kind", "?"), d, table,
                            verdict, order, stab_index, notes)


# -- built-in systems ----------------------------------------------------------

_STRIP_HALF_WIDTH = 6


def _halfplane_color(coords) -> int:
    # Two-phase pattern with both boundary chiralities: white on the strip
    # -K <= x < K, black outside.  Symmetric under the half-turn about
    # (-1/2, -1/2), so the half-turn genuinely acts; no quarter turn does,
    # yet monochrome patches of every size rotate in.
    x = coords[0]
    return 1 if -_STRIP_HALF_WIDTH <= x < _STRIP_HALF_WIDTH else 0


def builtin_system(name: str):
    if name == "sturmian-cube":
        return ProductSystem((GOLDEN_SLOPE,) * 3)
    if name == "chessboard":
        return ColoringSystem(
            lambda c: (c[0] + c[1]) % 2, 2, lambda n: n + 2,
            kind="periodic-coloring",
        )
    if name == "halfplane":
        return ColoringSystem(
            _halfplane_color, 2, lambda n: max(4 * n, 2 * n + 16),
        )
    if name == "concentric":
        return ColoringSystem(
            lambda c: max(abs(c[0]), abs(c[1])) % 2, 2, lambda n: 4 * n,
            note=(
                "hull elements (line and corner limits) have smaller or "
                "undefined point groups; this scan sees the centred patch "
                "system only"
            ),
        )
    raise KeyError(f"unknown patch system {name!r}")


SYSTEM_NAMES = ("sturmian-cube", "chessboard", "halfplane", "concentric")


def system_from_json(data: dict):
    kind = data.get("kind")
    if kind == "product-of-words":
        return ProductSystem(tuple(source_from_json(a) for a in data["axes"]))
    if kind == "periodic-coloring":
        table = [tuple(row) for row in data["table"]]
        px, py = len(table), len(table[0])
        return ColoringSystem(
            lambda c: table[c[0] % px][c[1] % py], 2, lambda n: n + max(px, py),
            kind="periodic-coloring",
        )
    if kind == "rule-coloring":
        return builtin_system(data["rule"])
    if kind == "explicit-patch-list":
        patches = {
            int(n): {_nested_tuple(p) for p in plist}
            for n, plist in data["patches"].items()
        }
        return ExplicitPatchSystem(int(data["dimension"]), patches)
    raise ValueError(f"unknown patch system kind {kind!r}")


def _nested_tuple(x):
    if isinstance(x, list):
        return tuple(_nested_tuple(v) for v in x)
    return x


def resolve_system(name_or_path: str):
    if name_or_path in SYSTEM_NAMES:
        return builtin_system(name_or_path)
    with open(name_or_path, "r", encoding="utf-8") as fh:
        return system_from_json(json.load(fh))
