"""Symbolic word sources: enumerate the allowed factors of 1-d sequences.

Sturmian sources work with exact quadratic-irrational slopes via integer
square roots, so the mechanical word is computed without any floating
point.  Substitution sources iterate their rules until the factor set
stabilises.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import gcd, isqrt

Word = tuple[int, ...]


def _floor_quadratic(a: int, b: int, d: int, c: int) -> int:
    """floor((a + b*sqrt(d)) / c) exactly, for c > 0 and nonsquare d."""
    if c <= 0:
        raise ValueError("denominator must be positive")
    if b >= 0:
        m = isqrt(b * b * d)
    else:
        s = isqrt(b * b * d)
        m = -s - (0 if s * s == b * b * d else 1)
    return (a + m) // c


@dataclass(frozen=True)
class SturmianSource:
    """Cutting sequence of the irrational slope (p + q*sqrt(d)) / r in (0,1)."""

    p: int
    q: int
    d: int
    r: int

    def __post_init__(self):
        if self.r <= 0 or self.q == 0:
            raise ValueError("slope must be a genuine quadratic irrational")
        root = isqrt(self.d)
        if self.d <= 0 or root * root == self.d:
            raise ValueError("sqrt argument must be a positive nonsquare")
        if self.floor_multiple(1) != 0:
            raise ValueError("slope must lie in (0, 1)")

    def floor_multiple(self, k: int) -> int:
        """floor(k * alpha), exactly."""
        return _floor_quadratic(k * self.p, k * self.q, self.d, self.r)

    def letter(self, k: int) -> int:
        return self.floor_multiple(k + 1) - self.floor_multiple(k)

    def _denominator_bound(self, n: int) -> int:
        """First continued-fraction convergent denominator >= n."""
        p, q, d, r = self.p, self.q, self.d, self.r
        prev2, prev1 = 1, 0  # q_{-2}, q_{-1}; then q_i = a_i q_{i-1} + q_{i-2}
        for _ in range(64):
            a = _floor_quadratic(p, q, d, r)
            qi = a * prev1 + prev2
            prev2, prev1 = prev1, qi
            if qi >= n:
                return qi
            # Gauss map: alpha <- 1 / (alpha - a).
            pp = p - a * r
            norm = pp * pp - q * q * d
            p, q, r = r * pp, -r * q, norm
            if r < 0:
                p, q, r = -p, -q, -r
            g = gcd(gcd(abs(p), abs(q)), r)
            if g > 1:
                p, q, r = p // g, q // g, r // g
        return max(n, prev1)

    def words(self, n: int) -> frozenset[Word]:
        """All length-n factors; a Sturmian sequence has exactly n + 1."""
        if n <= 0:
            return frozenset({()})
        window = 10 * n * self._denominator_bound(n)
        letters = [self.letter(k) for k in range(window + n)]
        found = {tuple(letters[k:k + n]) for k in range(window)}
        return frozenset(found)


@dataclass(frozen=True)
class SubstitutionSource:
    """Factors of the language of a substitution (non-primitive: warned)."""

    rules: tuple[tuple[str, str], ...]  # letter -> image word

    @staticmethod
    def of(rules: dict) -> "SubstitutionSource":
        return SubstitutionSource(tuple(sorted(rules.items())))

    def _rule_map(self) -> dict[str, str]:
        return dict(self.rules)

    def _alphabet(self) -> list[str]:
        return sorted(self._rule_map())

    def _is_primitive(self) -> bool:
        rules = self._rule_map()
        letters = self._alphabet()
        reach = {a: set(rules[a]) for a in letters}
        for _ in range(len(letters)):
            for a in letters:
                reach[a] |= {c for b in reach[a] for c in reach[b]}
        return all(reach[a] >= set(letters) for a in letters)

    def words(self, n: int) -> frozenset[Word]:
        if n <= 0:
            return frozenset({()})
        rules = self._rule_map()
        letters = self._alphabet()
        if not self._is_primitive():
            warnings.warn("substitution is not primitive; factor set may be partial")
        index = {a: i for i, a in enumerate(letters)}

        def step(word: str) -> str:
            return "".join(rules[c] for c in word)

        factors: set[Word] = set()
        prev = None
        words = {a: a for a in letters}
        for _ in range(10):
            words = {a: step(w) for a, w in words.items()}
            factors = set()
            for w in words.values():
                if len(w) < n:
                    continue
                for k in range(len(w) - n + 1):
                    factors.add(tuple(index[c] for c in w[k:k + n]))
            if factors and factors == prev:
                break
            prev = set(factors)
        return frozenset(factors)


@dataclass(frozen=True)
class ExplicitSource:
    """Factors of an explicitly given list of long words."""

    samples: tuple[Word, ...]

    @staticmethod
    def of(samples) -> "ExplicitSource":
        return ExplicitSource(tuple(tuple(w) for w in samples))

    def words(self, n: int) -> frozenset[Word]:
        if n <= 0:
            return frozenset({()})
        out = set()
        for w in self.samples:
            for k in range(len(w) - n + 1):
                out.add(tuple(w[k:k + n]))
        return frozenset(out)


@dataclass(frozen=True)
class FullShiftSource:
    """Every word over a finite alphabet is allowed."""

    alphabet_size: int = 2

    def words(self, n: int) -> frozenset[Word]:
        if n <= 0:
            return frozenset({()})
        if self.alphabet_size ** n > 200000:
            raise ValueError("full-shift word set would be enormous")
        out = [()]
        for _ in range(n):
            out = [w + (a,) for w in out for a in range(self.alphabet_size)]
        return frozenset(out)


GOLDEN_SLOPE = SturmianSource(-1, 1, 5, 2)  # (sqrt 5 - 1) / 2


def word_sets(source, n: int) -> frozenset[Word]:
    """The set of allowed length-n words of a source."""
    return source.words(n)


def source_from_json(data) -> object:
    kind = data.get("type")
    if kind == "sturmian":
        slope = data.get("slope")
        if slope == "golden":
            return GOLDEN_SLOPE
        return SturmianSource(int(slope["p"]), int(slope["q"]),
                              int(slope["d"]), int(slope["r"]))
    if kind == "substitution":
        return SubstitutionSource.of(data["rules"])
    if kind == "explicit":
        return ExplicitSource.of(data["samples"])
    if kind == "full-shift":
        return FullShiftSource(int(data.get("alphabet_size", 2)))
    raise ValueError(f"unknown word source {kind!r}")
