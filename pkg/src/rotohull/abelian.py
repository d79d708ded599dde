"""Finitely generated abelian groups in canonical invariant-factor form.

Every cohomology group computed by this package is reported as an
``FGAbelianGroup``: a free rank together with the chain of invariant
factors d1 | d2 | ... | dt (each >= 2).  Two isomorphic groups always
compare equal structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import zip_longest
from math import prod


def factorint(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (orders here are tiny)."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    result: dict[int, int] = {}
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            result[p] = e
        p += 1 if p == 2 else 2
    if n > 1:
        result[n] = 1
    return result


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank + Z/d1 + ... + Z/dt with d1 | d2 | ... | dt, di >= 2."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        prev = 1
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion coefficient {d} < 2")
            if d % prev != 0:
                raise ValueError(f"broken divisibility chain {self.torsion}")
            prev = d

    @staticmethod
    def from_orders(free_rank: int, orders) -> "FGAbelianGroup":
        """Canonicalise an arbitrary list of finite cyclic orders.

        >>> FGAbelianGroup.from_orders(1, [2, 3, 4])
        FGAbelianGroup(free_rank=1, torsion=(2, 12))
        """
        exps: dict[int, list[int]] = {}
        for d in orders:
            if d < 1:
                raise ValueError(f"cyclic order {d} < 1")
            for p, e in factorint(d).items():
                exps.setdefault(p, []).append(e)
        for elist in exps.values():
            elist.sort(reverse=True)
        chain = [
            prod(p ** e for p, e in zip(sorted(exps), tup) if e)
            for tup in zip_longest(*(exps[p] for p in sorted(exps)), fillvalue=0)
        ]
        chain = [d for d in chain if d > 1]
        chain.reverse()
        return FGAbelianGroup(free_rank, tuple(chain))

    def direct_sum(self, *others: "FGAbelianGroup") -> "FGAbelianGroup":
        rank = self.free_rank + sum(g.free_rank for g in others)
        orders = list(self.torsion)
        for g in others:
            orders.extend(g.torsion)
        return FGAbelianGroup.from_orders(rank, orders)

    def p_torsion_count(self, p: int) -> int:
        """Number of Z/p^e summands, i.e. torsion factors divisible by p."""
        return sum(1 for d in self.torsion if d % p == 0)

    def dim_mod_p(self, p: int) -> int:
        """dim_Fp of G (x) Fp = free rank plus the p-torsion count."""
        return self.free_rank + self.p_torsion_count(p)

    def torsion_primes(self) -> set[int]:
        primes: set[int] = set()
        for d in self.torsion:
            primes.update(factorint(d))
        return primes

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            d = self.torsion[i]
            j = i
            while j < len(self.torsion) and self.torsion[j] == d:
                j += 1
            count = j - i
            parts.append(f"Z/{d}" if count == 1 else f"(Z/{d})^{count}")
            i = j
        return " + ".join(parts)


ZERO_GROUP = FGAbelianGroup(0)
Z = FGAbelianGroup(1)
