"""Exact quaternions with coordinates in Q(sqrt 2).

Q(sqrt 2) is the smallest field containing the coordinates of every
element of the binary octahedral group, which is as much number-field
machinery as this package needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class QSqrt2:
    """a + b*sqrt(2) with rational a, b."""

    a: Fraction
    b: Fraction = Fraction(0)

    @staticmethod
    def of(a, b=0) -> "QSqrt2":
        return QSqrt2(Fraction(a), Fraction(b))

    def __add__(self, other: "QSqrt2") -> "QSqrt2":
        return QSqrt2(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QSqrt2") -> "QSqrt2":
        return QSqrt2(self.a - other.a, self.b - other.b)

    def __mul__(self, other: "QSqrt2") -> "QSqrt2":
        return QSqrt2(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def __neg__(self) -> "QSqrt2":
        return QSqrt2(-self.a, -self.b)

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def scaled(self, c) -> "QSqrt2":
        c = Fraction(c)
        return QSqrt2(self.a * c, self.b * c)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        return f"{self.a}+{self.b}*sqrt2"


QS_ZERO = QSqrt2(Fraction(0))
QS_ONE = QSqrt2(Fraction(1))
HALF_SQRT2 = QSqrt2(Fraction(0), Fraction(1, 2))  # sqrt(2)/2 == 1/sqrt(2)


@dataclass(frozen=True)
class Quaternion:
    """w + x*i + y*j + z*k over Q(sqrt 2)."""

    w: QSqrt2
    x: QSqrt2
    y: QSqrt2
    z: QSqrt2

    @staticmethod
    def of(w, x, y, z) -> "Quaternion":
        coords = [
            c if isinstance(c, QSqrt2) else QSqrt2(Fraction(c)) for c in (w, x, y, z)
        ]
        return Quaternion(*coords)

    def __mul__(self, o: "Quaternion") -> "Quaternion":
        w, x, y, z = self.w, self.x, self.y, self.z
        W, X, Y, Z = o.w, o.x, o.y, o.z
        return Quaternion(
            w * W - x * X - y * Y - z * Z,
            w * X + x * W + y * Z - z * Y,
            w * Y - x * Z + y * W + z * X,
            w * Z + x * Y - y * X + z * W,
        )

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> QSqrt2:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    @property
    def is_unit(self) -> bool:
        n = self.norm()
        return n.is_rational and n.as_fraction() == 1

    def inverse(self) -> "Quaternion":
        if not self.is_unit:
            raise ValueError("only unit quaternions are inverted here")
        return self.conjugate()

    @property
    def is_identity(self) -> bool:
        return (
            self.w == QS_ONE and self.x.is_zero and self.y.is_zero and self.z.is_zero
        )

    def rotation_matrix(self) -> tuple[tuple[QSqrt2, ...], ...]:
        """The SO(3) matrix of v |-> q v q^-1 on the pure quaternions i, j, k."""
        if not self.is_unit:
            raise ValueError("rotation matrix of a non-unit quaternion")
        w, x, y, z = self.w, self.x, self.y, self.z
        two = QSqrt2(Fraction(2))
        return (
            (
                w * w + x * x - y * y - z * z,
                two * (x * y - w * z),
                two * (x * z + w * y),
            ),
            (
                two * (x * y + w * z),
                w * w - x * x + y * y - z * z,
                two * (y * z - w * x),
            ),
            (
                two * (x * z - w * y),
                two * (y * z + w * x),
                w * w - x * x - y * y + z * z,
            ),
        )

    def __str__(self):
        return f"({self.w}, {self.x}, {self.y}, {self.z})"


QUAT_ONE = Quaternion(QS_ONE, QS_ZERO, QS_ZERO, QS_ZERO)
QUAT_MINUS_ONE = -QUAT_ONE
