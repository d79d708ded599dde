"""Concrete finite rotation groups and their double covers.

A ``FiniteGroup`` is an ordered element list closed under products and
inverses, together with its full multiplication table, designated
generators, and an exact rotation representation.  Elements are unit
quaternions (subgroups of S^3), exact orthogonal matrices (subgroups of
O(d) with entries in Q(sqrt 2)), or exact plane rotations by a rational
fraction of a turn (cyclic subgroups of SO(2), where the matrix entries
need not even be real-quadratic).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .intlinalg import IntMatrix
from .quaternion import HALF_SQRT2, QSqrt2, Quaternion

CLOSURE_BOUND = 10000
TABLE_CHECK_BOUND = 48


@dataclass(frozen=True)
class MatrixElement:
    """An exact orthogonal matrix; entries are ints or Fractions."""

    entries: tuple[tuple, ...]

    @staticmethod
    def of(rows) -> "MatrixElement":
        norm = tuple(
            tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in r)
            for r in rows
        )
        return MatrixElement(norm)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __mul__(self, other: "MatrixElement") -> "MatrixElement":
        a, b = self.entries, other.entries
        n = len(a)
        return MatrixElement.of(
            tuple(
                tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                for i in range(n)
            )
        )

    def inverse(self) -> "MatrixElement":
        # Orthogonal: inverse is the transpose.
        n = self.dim
        return MatrixElement.of(
            tuple(tuple(self.entries[j][i] for j in range(n)) for i in range(n))
        )

    @property
    def is_identity(self) -> bool:
        return all(
            x == (1 if i == j else 0)
            for i, row in enumerate(self.entries)
            for j, x in enumerate(row)
        )

    @property
    def is_orthogonal(self) -> bool:
        n = self.dim
        prod = self * self.inverse()
        return prod.is_identity and n == len(self.entries[0])


@dataclass(frozen=True)
class PlaneRotation:
    """The rotation of R^2 by the fraction turns (in Q/Z) of a full turn."""

    turns: Fraction

    @staticmethod
    def of(k: int, n: int) -> "PlaneRotation":
        return PlaneRotation(Fraction(k, n) % 1)

    def __mul__(self, other: "PlaneRotation") -> "PlaneRotation":
        return PlaneRotation((self.turns + other.turns) % 1)

    def inverse(self) -> "PlaneRotation":
        return PlaneRotation((-self.turns) % 1)

    @property
    def is_identity(self) -> bool:
        return self.turns == 0


_INT_PLANE_ROTATIONS = {
    Fraction(0): ((1, 0), (0, 1)),
    Fraction(1, 4): ((0, -1), (1, 0)),
    Fraction(1, 2): ((-1, 0), (0, -1)),
    Fraction(3, 4): ((0, 1), (-1, 0)),
}


class FiniteGroup:
    """Closure-generated finite group with multiplication table."""

    def __init__(self, elements, table, generator_indices, generator_names, name=""):
        self.name = name
        self.elements = list(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.table = table
        self.generators = list(generator_indices)
        self.generator_names = list(generator_names)
        self.order = len(self.elements)
        self.identity = 0
        self.inverse = [None] * self.order
        for i in range(self.order):
            for j in range(self.order):
                if table[i][j] == 0:
                    self.inverse[i] = j
                    break
        if any(v is None for v in self.inverse):
            raise ValueError("multiplication table has an element with no inverse")
        self.quotient: tuple["FiniteGroup", tuple[int, ...]] | None = None
        self._words: list[tuple[int, ...]] | None = None
        self._rotation: list | None = None
        if self.order <= TABLE_CHECK_BOUND:
            self._check_associativity()

    def _check_associativity(self):
        t = self.table
        n = self.order
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tab = ta[b]
                tb = t[b]
                for c in range(n):
                    if t[tab][c] != ta[tb[c]]:
                        raise ValueError("multiplication table is not associative")

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def element_order(self, i: int) -> int:
        n = 1
        j = i
        while j != self.identity:
            j = self.mul(j, i)
            n += 1
        return n

    def words(self) -> list[tuple[int, ...]]:
        """A word in the designated generators for every element (BFS)."""
        if self._words is None:
            words: list[tuple[int, ...] | None] = [None] * self.order
            words[self.identity] = ()
            frontier = [self.identity]
            while frontier:
                nxt = []
                for i in frontier:
                    for gpos, g in enumerate(self.generators):
                        j = self.mul(i, g)
                        if words[j] is None:
                            words[j] = words[i] + (gpos,)
                            nxt.append(j)
                frontier = nxt
            if any(w is None for w in words):
                raise ValueError("designated generators do not generate")
            self._words = words  # type: ignore[assignment]
        return self._words

    def rotation_matrix(self, i: int):
        """Exact rotation matrix of element i (rows of ints/Fractions/QSqrt2)."""
        g = self.elements[i]
        if isinstance(g, Quaternion):
            rows = g.rotation_matrix()
            out = []
            for row in rows:
                line = []
                for x in row:
                    if not x.is_rational:
                        return row_matrix(rows)
                    f = x.as_fraction()
                    line.append(int(f) if f.denominator == 1 else f)
                out.append(tuple(line))
            return tuple(out)
        if isinstance(g, MatrixElement):
            return g.entries
        if isinstance(g, PlaneRotation):
            mat = _INT_PLANE_ROTATIONS.get(g.turns)
            if mat is None:
                raise ValueError(
                    f"rotation by {g.turns} of a turn has no exact rational matrix"
                )
            return mat
        raise TypeError(f"unsupported element {g!r}")

    def rotation_image_int(self, i: int) -> IntMatrix:
        """Rotation matrix as an IntMatrix; element must act integrally."""
        rows = self.rotation_matrix(i)
        out = []
        for row in rows:
            line = []
            for x in row:
                f = Fraction(x)
                if f.denominator != 1:
                    raise ValueError("rotation matrix is not integral")
                line.append(int(f))
            out.append(line)
        return IntMatrix.from_rows(out)

    def rotation_image_group(self, name="") -> tuple["FiniteGroup", tuple[int, ...]]:
        """The group generated by the rotation images, with the quotient map."""
        gens = [MatrixElement.of(self.rotation_matrix(g)) for g in self.generators]
        img = generate_group(gens, names=self.generator_names, name=name)
        mapping = []
        for i in range(self.order):
            m = MatrixElement.of(self.rotation_matrix(i))
            mapping.append(img.index[m])
        # Homomorphism check against both tables.
        for a in range(self.order):
            for b in range(self.order):
                if mapping[self.table[a][b]] != img.table[mapping[a]][mapping[b]]:
                    raise ValueError("rotation image is not a homomorphism")
        return img, tuple(mapping)

    def set_quotient(self, quotient: "FiniteGroup", mapping) -> None:
        mapping = tuple(mapping)
        img = set(mapping)
        if img != set(range(quotient.order)):
            raise ValueError("quotient map is not surjective")
        for a in range(self.order):
            for b in range(self.order):
                if mapping[self.table[a][b]] != quotient.table[mapping[a]][mapping[b]]:
                    raise ValueError("quotient map is not a homomorphism")
        self.quotient = (quotient, mapping)

    def central_kernel_indices(self) -> list[int]:
        if self.quotient is None:
            raise ValueError("no quotient structure")
        quotient, mapping = self.quotient
        ker = [i for i in range(self.order) if mapping[i] == quotient.identity]
        for k in ker:
            for a in range(self.order):
                if self.mul(k, a) != self.mul(a, k):
                    raise ValueError("quotient kernel is not central")
        return ker

    def __repr__(self):
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"


def row_matrix(rows):
    return tuple(tuple(r) for r in rows)


def generate_group(generators, names=None, bound=CLOSURE_BOUND, name="") -> FiniteGroup:
    """Close a set of exact elements under multiplication.

    Raises if a quaternion generator is not a unit, a matrix generator is
    not orthogonal, or the closure exceeds ``bound``.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator (use builtin_group('trivial'))")
    first = generators[0]
    if isinstance(first, Quaternion):
        identity = Quaternion.of(1, 0, 0, 0)
        for q in generators:
            if not isinstance(q, Quaternion) or not q.is_unit:
                raise ValueError(f"non-unit quaternion generator {q}")
    elif isinstance(first, MatrixElement):
        identity = MatrixElement.of(
            [[1 if i == j else 0 for j in range(first.dim)] for i in range(first.dim)]
        )
        for m in generators:
            if not isinstance(m, MatrixElement) or not m.is_orthogonal:
                raise ValueError("matrix generator is not an exact orthogonal matrix")
    elif isinstance(first, PlaneRotation):
        identity = PlaneRotation(Fraction(0))
    else:
        raise TypeError(f"unsupported generator {first!r}")

    elements = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in generators:
                prod = g * h
                if prod not in index:
                    index[prod] = len(elements)
                    elements.append(prod)
                    nxt.append(prod)
                    if len(elements) > bound:
                        raise ValueError(f"closure exceeded bound {bound}")
        frontier = nxt

    n = len(elements)
    table = [[index[elements[i] * elements[j]] for j in range(n)] for i in range(n)]
    if names is None:
        names = [f"g{i}" for i in range(len(generators))]
    if len(names) != len(generators):
        raise ValueError("one name per generator, please")
    gen_idx = [index[g] for g in generators]
    return FiniteGroup(elements, table, gen_idx, list(names), name=name)


# Binary octahedral generators chosen so that their rotation images are the
# two cube-rotation matrices used throughout: a quarter turn about the z-axis
#   R = [[0,1,0],[-1,0,0],[0,0,1]]
# and the coordinate 3-cycle
#   D = [[0,1,0],[0,0,1],[1,0,0]].
_Q_R = Quaternion(HALF_SQRT2, QSqrt2.of(0), QSqrt2.of(0), -HALF_SQRT2)  # (1-k)/sqrt2
_Q_D = Quaternion(
    QSqrt2.of(Fraction(1, 2)),
    QSqrt2.of(Fraction(-1, 2)),
    QSqrt2.of(Fraction(-1, 2)),
    QSqrt2.of(Fraction(-1, 2)),
)  # (1-i-j-k)/2

CUBE_R = ((0, 1, 0), (-1, 0, 0), (0, 0, 1))
CUBE_D = ((0, 1, 0), (0, 0, 1), (1, 0, 0))


@lru_cache(maxsize=None)
def builtin_group(name: str) -> FiniteGroup:
    """Registry of named groups: 2O, O, C_n, trivial, pm."""
    if name == "2O":
        group = generate_group([_Q_R, _Q_D], names=["R", "D"], name="2O")
        if group.order != 48:
            raise AssertionError("binary octahedral closure has wrong order")
        octa, mapping = group.rotation_image_group(name="O")
        if octa.order != 24:
            raise AssertionError("cube rotation group has wrong order")
        group.set_quotient(octa, mapping)
        group.central_kernel_indices()
        return group
    if name == "O":
        group = generate_group(
            [MatrixElement.of(CUBE_R), MatrixElement.of(CUBE_D)],
            names=["R", "D"],
            name="O",
        )
        if group.order != 24:
            raise AssertionError("cube rotation group has wrong order")
        return group
    if name == "trivial":
        return FiniteGroup([PlaneRotation.of(0, 1)], [[0]], [], [], name="trivial")
    if name == "pm":
        return generate_group([MatrixElement.of([[-1]])], names=["m"], name="pm")
    if name.startswith("C_"):
        n = int(name[2:])
        if n < 1:
            raise ValueError(f"bad cyclic order in {name!r}")
        group = generate_group([PlaneRotation.of(1, n)], names=["r"], name=name)
        if group.order != n:
            raise AssertionError("cyclic group has wrong order")
        return group
    raise KeyError(f"unknown builtin group {name!r}")
