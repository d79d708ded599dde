"""Finitely generated modules over the integral group ring of a finite group.

A ``GModule`` is a free Z-lattice (or F_p / Q vector space) of finite rank
with one invertible matrix per group element.  Construction always verifies
that the matrices define a genuine action: the assignment is extended from
the designated generators along group words and then checked against the
multiplication table.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import FGAbelianGroup
from .groups import FiniteGroup
from .intlinalg import (
    IntMatrix,
    cokernel,
    kernel_basis,
    nullspace_mod_p,
    rank_mod_p,
    rational_rank,
)

RINGS = ("Z", "Q")


def ring_prime(ring: str) -> int | None:
    """The prime p for a ring tag 'Fp', else None."""
    if ring.startswith("F"):
        p = int(ring[1:])
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{ring!r} is not a prime field")
        return p
    if ring in RINGS:
        return None
    raise ValueError(f"unknown ring tag {ring!r}")


@dataclass(frozen=True)
class GModule:
    group: FiniteGroup
    rank: int
    action: tuple[IntMatrix, ...]  # one matrix per group element, in order
    ring: str = "Z"
    name: str = ""

    def matrix(self, i: int) -> IntMatrix:
        return self.action[i]

    def generator_matrices(self) -> list[IntMatrix]:
        return [self.action[g] for g in self.group.generators]

    def cache_key(self):
        return (self.group.name, self.group.order, self.ring, self.rank,
                tuple(m.rows for m in self.action))


def _extend_by_words(group: FiniteGroup, gen_mats: list[IntMatrix], rank: int):
    mats: list[IntMatrix | None] = [None] * group.order
    mats[group.identity] = IntMatrix.identity(rank)
    for i, word in enumerate(group.words()):
        if mats[i] is None:
            m = IntMatrix.identity(rank)
            for gpos in word:
                m = m * gen_mats[gpos]
            mats[i] = m
    return mats


def _validate_action(group: FiniteGroup, mats, rank: int, ring: str):
    p = ring_prime(ring)

    def same(a: IntMatrix, b: IntMatrix) -> bool:
        return a == b if p is None else a.mod(p) == b.mod(p)

    if not same(mats[group.identity], IntMatrix.identity(rank)):
        raise ValueError("identity does not act as the identity matrix")
    # rho(g h) = rho(g) rho(h) for every g and generator h extends to the
    # whole table by induction on word length.
    for i in range(group.order):
        for g in group.generators:
            if not same(mats[group.mul(i, g)], mats[i] * mats[g]):
                raise ValueError("matrices do not respect the multiplication table")
    for i in range(group.order):
        d = mats[i].det()
        if p is None:
            if ring == "Z" and d not in (1, -1):
                raise ValueError("action matrix is not invertible over Z")
            if ring == "Q" and d == 0:
                raise ValueError("action matrix is singular")
        elif d % p == 0:
            raise ValueError(f"action matrix is singular mod {p}")


def gmodule(group: FiniteGroup, gen_mats, ring: str = "Z", name: str = "") -> GModule:
    """Build a module from matrices for the designated generators."""
    gen_mats = [m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m) for m in gen_mats]
    if len(gen_mats) != len(group.generators):
        raise ValueError("one matrix per designated generator")
    rank = gen_mats[0].nrows if gen_mats else 0
    for m in gen_mats:
        if m.shape != (rank, rank):
            raise ValueError("generator matrices must be square of equal size")
    if not gen_mats:
        raise ValueError("groups without generators need explicit rank; use trivial_module")
    mats = _extend_by_words(group, gen_mats, rank)
    _validate_action(group, mats, rank, ring)
    return GModule(group, rank, tuple(mats), ring, name)


def gmodule_from_elements(group: FiniteGroup, mats, ring: str = "Z", name: str = "") -> GModule:
    """Build a module from one matrix per group element (and verify it)."""
    mats = [m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m) for m in mats]
    if len(mats) != group.order:
        raise ValueError("need exactly one matrix per element")
    rank = mats[0].nrows
    _validate_action(group, mats, rank, ring)
    return GModule(group, rank, tuple(mats), ring, name)


def trivial_module(group: FiniteGroup, rank: int = 1, ring: str = "Z") -> GModule:
    eye = IntMatrix.identity(rank)
    return GModule(group, rank, tuple(eye for _ in range(group.order)), ring,
                   name=f"trivial^{rank}")


def standard_rotation_module(group: FiniteGroup, ring: str = "Z") -> GModule:
    """The defining lattice module: each element acts by its rotation matrix."""
    mats = [group.rotation_image_int(i) for i in range(group.order)]
    return gmodule_from_elements(group, mats, ring, name="standard")


def _subsets(r: int, k: int):
    from itertools import combinations

    return list(combinations(range(r), k))


def _minor(m: IntMatrix, rows, cols) -> int:
    sub = IntMatrix.from_rows(
        [[m.rows[i][j] for j in cols] for i in rows], ncols=len(cols)
    )
    return sub.det()


def exterior_power(module: GModule, k: int) -> GModule:
    """Lambda^k of a free module; basis is the sorted k-element index sets.

    The matrix entry at (S, T) is the k x k minor with rows S, columns T, so
    signs follow the usual alternating bookkeeping.
    """
    if k < 0 or k > module.rank:
        raise ValueError(f"exterior power {k} out of range for rank {module.rank}")
    subsets = _subsets(module.rank, k)
    mats = []
    for m in module.action:
        mats.append(
            IntMatrix.from_rows(
                [[_minor(m, s, t) for t in subsets] for s in subsets],
                ncols=len(subsets),
            )
        )
    return gmodule_from_elements(
        module.group, mats, module.ring, name=f"Lambda^{k}({module.name or '?'})"
    )


def _action_minus_identity_stack(module: GModule, horizontal: bool) -> IntMatrix:
    eye = IntMatrix.identity(module.rank)
    blocks = [module.action[g] + (-eye) for g in module.group.generators]
    if not blocks:
        return IntMatrix.zero(module.rank, 0) if horizontal else IntMatrix.zero(0, module.rank)
    out = blocks[0]
    for b in blocks[1:]:
        out = out.hstack(b) if horizontal else out.vstack(b)
    return out


def invariants(module: GModule, ring: str | None = None):
    """(rank, basis) of the fixed submodule M^G.

    Over Z the basis spans the saturated invariant sublattice; over F_p the
    basis is returned as vectors mod p.  Fixing the designated generators
    fixes the whole group, so stacking (rho(s) - 1) over generators is exact.
    """
    ring = ring or module.ring
    p = ring_prime(ring)
    stack = _action_minus_identity_stack(module, horizontal=False)
    if p is None:
        if stack.nrows == 0:
            basis = IntMatrix.identity(module.rank)
        else:
            basis = kernel_basis(stack)
        return basis.ncols, basis
    if stack.nrows == 0:
        eye = IntMatrix.identity(module.rank)
        return module.rank, [eye.column(j) for j in range(module.rank)]
    basis = nullspace_mod_p(stack, p)
    return len(basis), basis


def coinvariants(module: GModule, ring: str | None = None):
    """M_G = M / <m - g m>.

    Returns an FGAbelianGroup over Z or Q, or an F_p-dimension.  The
    relation lattice is generated by the images of (rho(s) - 1) for the
    designated generators s: for any word w and generator s one has
    (sw - 1)m = (s - 1)(wm) + (w - 1)m, so generator relations span the
    whole augmentation-ideal image.
    """
    ring = ring or module.ring
    p = ring_prime(ring)
    stack = _action_minus_identity_stack(module, horizontal=True)
    if p is not None:
        return module.rank - rank_mod_p(stack, p)
    if ring == "Q":
        return FGAbelianGroup(module.rank - rational_rank(stack))
    return cokernel(stack)


def coinvariants_all_elements(module: GModule) -> FGAbelianGroup:
    """Coinvariants from (rho(g) - 1) for every g; cross-check oracle."""
    eye = IntMatrix.identity(module.rank)
    out = None
    for i in range(module.group.order):
        block = module.action[i] + (-eye)
        out = block if out is None else out.hstack(block)
    return cokernel(out)


def reduce_mod_p(module: GModule, p: int) -> GModule:
    """The same matrices regarded over F_p."""
    ring = f"F{p}"
    ring_prime(ring)  # validates primality
    mats = tuple(m.mod(p) for m in module.action)
    return GModule(module.group, module.rank, mats, ring,
                   name=f"{module.name or '?'} mod {p}")
