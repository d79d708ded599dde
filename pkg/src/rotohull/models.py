"""Graded coefficient systems H*(Omega_t) with point-group action.

The cohomology of the translational hull is an *input datum* here, quoted
from shape-equivalence results: the three-torus for the periodic cubic
tiling, a product of three wedges of two circles for the Sturmian decorated
cube, and once-punctured tori for the canonical codimension-one projection
tilings.  Nothing in this module recomputes tiling cohomology from
geometry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .groups import FiniteGroup, builtin_group
from .intlinalg import IntMatrix
from .modules import (
    GModule,
    exterior_power,
    gmodule,
    gmodule_from_elements,
    standard_rotation_module,
    trivial_module,
)


@dataclass
class TilingModel:
    name: str
    dimension: int
    group: FiniteGroup
    graded: dict[int, GModule]
    has_invariant_skeleton: bool
    provenance: str = ""

    def __post_init__(self):
        degrees = sorted(self.graded)
        if degrees != list(range(len(degrees))):
            raise ValueError("degrees must be contiguous from 0")
        deg0 = self.graded[0]
        if deg0.rank != 1 or any(m != IntMatrix.identity(1) for m in deg0.action):
            raise ValueError("degree-0 module must be trivial of rank 1")
        for m in self.graded.values():
            if m.group is not self.group:
                raise ValueError("all degrees must share the model's group")

    @property
    def top_degree(self) -> int:
        return max(self.graded)

    def module(self, k: int) -> GModule:
        return self.graded[k]

    def betti(self, k: int) -> int:
        return self.graded[k].rank if k in self.graded else 0


def torus_model(d: int, group: FiniteGroup, name: str = "") -> TilingModel:
    """H*(T^d) = Lambda^* of the standard rank-d lattice module.

    The torus carries the cubical cell structure, which the rotation group
    preserves, so the collapse assumption applies.
    """
    std = standard_rotation_module(group)
    if std.rank != d:
        raise ValueError(f"group acts in dimension {std.rank}, expected {d}")
    graded = {k: exterior_power(std, k) for k in range(d + 1)}
    return TilingModel(
        name or f"torus-{d}",
        d,
        group,
        graded,
        has_invariant_skeleton=True,
        provenance=f"T^{d} with the cubical cell structure; action by rotation matrices",
    )


# -- Sturmian decorated cube -------------------------------------------------
#
# The translational hull is (up to shape equivalence) W x W x W, W a wedge of
# two circles.  H^1 has basis x_ij (axis i in {1,2,3}, circle j in {1,2});
# H^2 and H^3 have the square-free monomials with distinct axes as bases.
# The two cube-rotation generators act on H^1 by
#   R: x_1j -> x_2j,  x_2j -> -x_1j,  x_3j -> x_3j
#   D: x_ij -> x_(i+1)j (cyclically)
# and on monomials multiplicatively with the reordering sign.

def _wedge_degree1_matrices() -> tuple[IntMatrix, IntMatrix]:
    def flat(i, j):  # axis i in 1..3, copy j in 1..2
        return 2 * (i - 1) + (j - 1)

    r = [[0] * 6 for _ in range(6)]
    d = [[0] * 6 for _ in range(6)]
    for j in (1, 2):
        r[flat(2, j)][flat(1, j)] = 1
        r[flat(1, j)][flat(2, j)] = -1
        r[flat(3, j)][flat(3, j)] = 1
        for i in (1, 2, 3):
            d[flat(i % 3 + 1, j)][flat(i, j)] = 1
    return IntMatrix.from_rows(r), IntMatrix.from_rows(d)


def _signed_label_map(mat: IntMatrix) -> list[tuple[int, int]]:
    """Decompose a signed permutation matrix into label -> (image, sign)."""
    out = []
    for col in range(mat.ncols):
        hits = [(i, mat.rows[i][col]) for i in range(mat.nrows) if mat.rows[i][col]]
        if len(hits) != 1 or hits[0][1] not in (1, -1):
            raise ValueError("matrix is not a signed permutation")
        out.append(hits[0])
    return out


def _monomial_matrix(deg1: IntMatrix, monomials: list[tuple[int, ...]],
                     axis_of) -> IntMatrix:
    """Action on square-free monomials with the Koszul reordering sign."""
    labels = _signed_label_map(deg1)
    index = {m: i for i, m in enumerate(monomials)}
    n = len(monomials)
    rows = [[0] * n for _ in range(n)]
    for col, mono in enumerate(monomials):
        sign = 1
        images = []
        for f in mono:
            target, s = labels[f]
            sign *= s
            images.append(target)
        if len({axis_of(f) for f in images}) != len(images):
            raise ValueError("monomial image has a repeated axis")
        # Parity of the sort that restores increasing label order.
        order = sorted(range(len(images)), key=lambda t: images[t])
        perm_sign = 1
        seen = [False] * len(order)
        for start in range(len(order)):
            if seen[start]:
                continue
            length = 0
            t = start
            while not seen[t]:
                seen[t] = True
                t = order[t]
                length += 1
            if length % 2 == 0:
                perm_sign = -perm_sign
        rows[index[tuple(sorted(images))]][col] = sign * perm_sign
    return IntMatrix.from_rows(rows, ncols=n)


def wedge_cube_model() -> TilingModel:
    """Coefficient system of the Sturmian decorated cube tiling."""
    group = builtin_group("2O")
    axis_of = lambda f: f // 2

    deg1_r, deg1_d = _wedge_degree1_matrices()
    h1 = gmodule(group, [deg1_r, deg1_d], name="wedge-H1")

    deg2_monos = [
        (a, b) for a, b in combinations(range(6), 2) if axis_of(a) != axis_of(b)
    ]
    deg3_monos = [
        (a, b, c)
        for a, b, c in combinations(range(6), 3)
        if len({axis_of(a), axis_of(b), axis_of(c)}) == 3
    ]
    h2 = gmodule_from_elements(
        group,
        [_monomial_matrix(h1.matrix(i), deg2_monos, axis_of) for i in range(group.order)],
        name="wedge-H2",
    )
    h3 = gmodule_from_elements(
        group,
        [_monomial_matrix(h1.matrix(i), deg3_monos, axis_of) for i in range(group.order)],
        name="wedge-H3",
    )
    graded = {0: trivial_module(group), 1: h1, 2: h2, 3: h3}
    return TilingModel(
        "sturmian-cube",
        3,
        group,
        graded,
        has_invariant_skeleton=True,
        provenance=(
            "product of three Sturmian tilings; hull shape equivalent to W^3; "
            "H^1 basis x_ij dual to the 1-cells with matching orientation"
        ),
    )


def punctured_torus_model(d: int) -> TilingModel:
    """Canonical codimension-1 projection tiling in R^d.

    The hull is shape equivalent to a once-punctured (d+1)-torus: degree a
    has rank C(d+1, a) for a <= d and the top degree vanishes.  For even d
    the point group is C_2 acting by (-1)^a in degree a; for odd d it is
    trivial.
    """
    if d < 2:
        raise ValueError("d >= 2 required")
    if d % 2 == 0:
        group = builtin_group("C_2")
        graded = {}
        for a in range(d + 1):
            r = comb(d + 1, a)
            mat = IntMatrix.diagonal([(-1) ** a] * r)
            graded[a] = gmodule(group, [mat], name=f"punctured-H{a}")
    else:
        group = builtin_group("trivial")
        graded = {a: trivial_module(group, comb(d + 1, a)) for a in range(d + 1)}
    return TilingModel(
        f"punctured-torus-d{d}",
        d,
        group,
        graded,
        has_invariant_skeleton=True,
        provenance="codimension-1 canonical projection tiling; hull is a punctured torus",
    )


# -- registry and serialisation ----------------------------------------------

def builtin_model(name: str) -> TilingModel:
    if name == "cube-lattice":
        model = torus_model(3, builtin_group("2O"), name="cube-lattice")
        model.provenance = "periodic unit-cube tessellation of R^3; " + model.provenance
        return model
    if name == "sturmian-cube":
        return wedge_cube_model()
    if name == "punctured-torus-d2":
        return punctured_torus_model(2)
    if name == "punctured-torus-d3":
        return punctured_torus_model(3)
    raise KeyError(f"unknown model {name!r}")


MODEL_NAMES = ("cube-lattice", "sturmian-cube", "punctured-torus-d2", "punctured-torus-d3")


def gmodule_to_json(module: GModule) -> dict:
    return {
        "group": module.group.name,
        "rank": module.rank,
        "ring": module.ring,
        "action": {
            name: [list(r) for r in module.matrix(g).rows]
            for name, g in zip(module.group.generator_names, module.group.generators)
        },
    }


def gmodule_from_json(data: dict, group: FiniteGroup | None = None) -> GModule:
    if group is None:
        group = builtin_group(data["group"])
    rank = int(data["rank"])
    ring = data.get("ring", "Z")
    action = data["action"]
    mats = []
    for name in group.generator_names:
        if name not in action:
            raise ValueError(f"missing action matrix for generator {name!r}")
        mat = IntMatrix.from_rows(action[name], ncols=rank) if rank else IntMatrix(0, 0, ())
        if mat.shape != (rank, rank):
            raise ValueError(f"action matrix for {name!r} is not {rank}x{rank}")
        mats.append(mat)
    if not group.generators:
        return trivial_module(group, rank, ring)
    return gmodule(group, mats, ring)


def model_to_json(model: TilingModel) -> dict:
    return {
        "name": model.name,
        "dimension": model.dimension,
        "group": model.group.name,
        "has_invariant_skeleton": model.has_invariant_skeleton,
        "provenance": model.provenance,
        "degrees": {str(k): gmodule_to_json(m) for k, m in sorted(model.graded.items())},
    }


def model_from_json(data: dict) -> TilingModel:
    try:
        name = data["name"]
        dimension = int(data["dimension"])
        group = builtin_group(data["group"])
        degrees = data["degrees"]
    except KeyError as missing:
        raise ValueError(f"model file is missing key {missing}") from None
    if "0" not in degrees:
        raise ValueError("model must define degree 0")
    graded = {}
    for key, payload in degrees.items():
        graded[int(key)] = gmodule_from_json(payload, group)
    return TilingModel(
        name,
        dimension,
        group,
        graded,
        has_invariant_skeleton=bool(data.get("has_invariant_skeleton", False)),
        provenance=data.get("provenance", ""),
    )


def load_custom_model(path) -> TilingModel:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return model_from_json(data)


def resolve_model(name_or_path: str) -> TilingModel:
    if name_or_path in MODEL_NAMES:
        return builtin_model(name_or_path)
    return load_custom_model(name_or_path)
