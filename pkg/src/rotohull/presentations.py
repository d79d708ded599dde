"""Finitely presented groups for the space-group extensions.

Extensions of a finite quotient by a free-abelian or product-of-free
kernel are rendered as explicit presentations: kernel relators, lifted
quotient relators (with cocycle corrections where supplied), and
conjugation relators encoding the action.  Nonabelian kernels are handled
purely presentation-theoretically; the quantitative checks go through
abelianization and finite-quotient counting.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct

from .abelian import FGAbelianGroup
from .groups import FiniteGroup, builtin_group
from .intlinalg import IntMatrix, cokernel
from .modules import gmodule

Word = tuple[int, ...]  # nonzero signed 1-based generator indices


@dataclass
class GroupPresentation:
    generators: list[str]
    relators: list[Word]
    metadata: dict = field(default_factory=dict)

    def generator_index(self, name: str) -> int:
        return self.generators.index(name)

    def free_reduce(self) -> "GroupPresentation":
        out = []
        for rel in self.relators:
            stack: list[int] = []
            for letter in rel:
                if stack and stack[-1] == -letter:
                    stack.pop()
                else:
                    stack.append(letter)
            if stack:
                out.append(tuple(stack))
        return GroupPresentation(list(self.generators), out, dict(self.metadata))


def word_to_text(word: Word, generators) -> str:
    parts = []
    for letter in word:
        name = generators[abs(letter) - 1]
        parts.append(name if letter > 0 else name.upper() if name.islower() else f"{name}^-1")
    return " ".join(parts)


def presentation_to_text(pres: GroupPresentation) -> str:
    lines = ["generators: " + " ".join(pres.generators)]
    for rel in pres.relators:
        lines.append(word_to_text(rel, pres.generators))
    return "\n".join(lines) + "\n"


def presentation_from_text(text: str) -> GroupPresentation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("generators:"):
        raise ValueError("first line must be 'generators: ...'")
    generators = lines[0].split(":", 1)[1].split()
    index = {name: i + 1 for i, name in enumerate(generators)}
    lower = {name.upper(): i + 1 for i, name in enumerate(generators) if name.islower()}
    relators = []
    for line in lines[1:]:
        word = []
        for tok in line.split():
            if tok in index:
                word.append(index[tok])
            elif tok in lower:
                word.append(-lower[tok])
            elif tok.endswith("^-1") and tok[:-3] in index:
                word.append(-index[tok[:-3]])
            else:
                raise ValueError(f"unknown token {tok!r}")
        relators.append(tuple(word))
    return GroupPresentation(generators, relators)


def _invert(word: Word) -> Word:
    return tuple(-letter for letter in reversed(word))


def _positive_word(word: Word, orders) -> Word:
    """Rewrite inverse letters x^-1 as x^(order-1); needed for cocycle lifts."""
    out: list[int] = []
    for letter in word:
        if letter > 0:
            out.append(letter)
        else:
            out.extend([-letter] * (orders[-letter] - 1))
    return tuple(out)


def quotient_relators(group: FiniteGroup) -> list[Word]:
    """Defining relators from the fundamental cycles of the Cayley graph.

    For every element g and generator x (1-based position), the word
    w_g x w_{gx}^-1 is a relator; spanning-tree edges reduce freely to
    nothing and are dropped.
    """
    words = group.words()
    relators = []
    for g in range(group.order):
        for pos, x in enumerate(group.generators):
            gx = group.mul(g, x)
            if words[gx] == words[g] + (pos,):
                continue  # tree edge
            word = (
                tuple(p + 1 for p in words[g])
                + (pos + 1,)
                + _invert(tuple(p + 1 for p in words[gx]))
            )
            relators.append(word)
    return relators


@dataclass
class ExtensionSpec:
    """Extension data: 1 -> kernel -> E -> quotient -> 1.

    kernel_kind is "free-abelian" (with kernel_rank) or "product-of-free"
    (with kernel_ranks, one free factor per entry).  The action maps each
    quotient generator name to an integer matrix on the abelianised kernel
    or to words in the kernel generators.  A cocycle, when present, is a
    table (g, h) -> kernel exponent vector over the quotient's elements.
    """

    kernel_kind: str
    quotient: FiniteGroup
    kernel_rank: int = 0
    kernel_ranks: tuple[int, ...] = ()
    action_matrices: dict | None = None  # name -> IntMatrix
    action_words: dict | None = None  # name -> {kernel gen name: Word as text}
    cocycle: dict | None = None  # (g_idx, h_idx) -> tuple exponents

    def total_kernel_rank(self) -> int:
        if self.kernel_kind == "free-abelian":
            return self.kernel_rank
        return sum(self.kernel_ranks)

    def kernel_generator_names(self) -> list[str]:
        if self.kernel_kind == "free-abelian":
            return [f"t{i + 1}" for i in range(self.kernel_rank)]
        letters = "abcdefgh"
        names = []
        for i, r in enumerate(self.kernel_ranks):
            for j in range(r):
                names.append(f"{letters[j]}{i + 1}")
        return names

    def factor_of(self, kernel_index: int) -> int:
        if self.kernel_kind == "free-abelian":
            return 0
        acc = 0
        for i, r in enumerate(self.kernel_ranks):
            if kernel_index < acc + r:
                return i
            acc += r
        raise IndexError(kernel_index)


def _exponents_to_word(vec, offset=0) -> Word:
    word: list[int] = []
    for i, e in enumerate(vec):
        letter = offset + i + 1
        word.extend([letter if e > 0 else -letter] * abs(e))
    return tuple(word)


def _validate_cocycle(spec: ExtensionSpec, module) -> None:
    q = spec.quotient
    n = spec.total_kernel_rank()
    zero = (0,) * n
    c = {k: tuple(v) for k, v in spec.cocycle.items()}
    for g in range(q.order):
        for h in range(q.order):
            if (g, h) not in c:
                raise ValueError("cocycle table is incomplete")
    for g in range(q.order):
        for h in range(q.order):
            for k in range(q.order):
                lhs = tuple(
                    a + b for a, b in zip(c[(g, h)], c[(q.mul(g, h), k)])
                )
                acted = module.matrix(g).apply(c[(h, k)])
                rhs = tuple(a + b for a, b in zip(acted, c[(g, q.mul(h, k))]))
                if lhs != rhs:
                    raise ValueError("cocycle identity fails")
    if any(c[(q.identity, h)] != zero or c[(h, q.identity)] != zero
           for h in range(q.order)):
        raise ValueError("cocycle is not normalised")


def extension_presentation(spec: ExtensionSpec) -> GroupPresentation:
    """Presentation of the extension encoded by the spec."""
    q = spec.quotient
    kernel_names = spec.kernel_generator_names()
    n_kernel = len(kernel_names)
    gen_names = kernel_names + list(q.generator_names)
    if len(set(gen_names)) != len(gen_names):
        raise ValueError("kernel and quotient generator names collide")

    relators: list[Word] = []
    tags: list[str] = []

    # Kernel relators: commutators, within the kernel for a free-abelian
    # kernel, across distinct free factors for a product of free groups.
    for i in range(n_kernel):
        for j in range(i + 1, n_kernel):
            if spec.kernel_kind == "product-of-free" and spec.factor_of(i) == spec.factor_of(j):
                continue
            relators.append((i + 1, j + 1, -(i + 1), -(j + 1)))
            tags.append("kernel")

    # Action module on the abelianised kernel (validates the action).
    mats = []
    if spec.kernel_kind == "free-abelian":
        for name in q.generator_names:
            mat = spec.action_matrices[name]
            mats.append(mat if isinstance(mat, IntMatrix) else IntMatrix.from_rows(mat))
        module = gmodule(q, mats) if q.generators else None
    else:
        mats = [
            _abelianised_word_action(spec, name) for name in q.generator_names
        ]
        module = gmodule(q, mats) if q.generators else None

    cocycle = None
    if spec.cocycle:
        if spec.kernel_kind != "free-abelian":
            raise ValueError("cocycle tables need a free-abelian kernel")
        if module is None:
            raise ValueError("cocycle tables need a nontrivial quotient")
        _validate_cocycle(spec, module)
        cocycle = {k: tuple(v) for k, v in spec.cocycle.items()}

    # Lifted quotient relators with cocycle corrections.
    orders = {pos + 1: q.element_order(x) for pos, x in enumerate(q.generators)}
    quotient_positions = {pos + 1: x for pos, x in enumerate(q.generators)}
    for rel in quotient_relators(q):
        positive = _positive_word(rel, orders)
        shifted = tuple(letter + n_kernel for letter in positive)
        if cocycle is None:
            relators.append(shifted)
        else:
            kappa = (0,) * n_kernel
            u = q.identity
            for letter in positive:
                x = quotient_positions[letter]
                kappa = tuple(a + b for a, b in zip(kappa, cocycle[(u, x)]))
                u = q.mul(u, x)
            if u != q.identity:
                raise AssertionError("quotient relator does not close")
            relators.append(shifted + _invert(_exponents_to_word(kappa)))
        tags.append("lifted")

    # Conjugation relators: s t s^-1 = action(s)(t).
    for pos, name in enumerate(q.generator_names):
        s = n_kernel + pos + 1
        for i in range(n_kernel):
            if spec.kernel_kind == "free-abelian":
                image = _exponents_to_word(mats[pos].column(i))
            else:
                image = _parse_kernel_word(
                    spec.action_words[name][kernel_names[i]], kernel_names
                )
            relators.append((s, i + 1, -s) + _invert(image))
            tags.append("conjugation")

    # Free-reduce relators, keeping the tag list aligned.
    out_relators: list[Word] = []
    kept_tags: list[str] = []
    for rel, tag in zip(relators, tags):
        stack: list[int] = []
        for letter in rel:
            if stack and stack[-1] == -letter:
                stack.pop()
            else:
                stack.append(letter)
        if stack:
            out_relators.append(tuple(stack))
            kept_tags.append(tag)
    return GroupPresentation(
        gen_names,
        out_relators,
        {
            "kernel_kind": spec.kernel_kind,
            "kernel_rank": n_kernel,
            "quotient": q.name,
            "quotient_order": q.order,
            "relator_tags": kept_tags,
            "quotient_positions": list(
                range(n_kernel + 1, n_kernel + 1 + len(q.generators))
            ),
        },
    )


def _abelianised_word_action(spec: ExtensionSpec, name: str) -> IntMatrix:
    kernel_names = spec.kernel_generator_names()
    n = len(kernel_names)
    cols = []
    for kn in kernel_names:
        word = _parse_kernel_word(spec.action_words[name][kn], kernel_names)
        vec = [0] * n
        for letter in word:
            vec[abs(letter) - 1] += 1 if letter > 0 else -1
        cols.append(vec)
    return IntMatrix.from_columns(cols, nrows=n)


def _parse_kernel_word(text: str, kernel_names) -> Word:
    index = {name: i + 1 for i, name in enumerate(kernel_names)}
    upper = {name.upper(): i + 1 for i, name in enumerate(kernel_names)}
    word = []
    for tok in text.split():
        if tok in index:
            word.append(index[tok])
        elif tok in upper:
            word.append(-upper[tok])
        else:
            raise ValueError(f"unknown kernel generator {tok!r}")
    return tuple(word)


def central_pullback(pres: GroupPresentation, cover: FiniteGroup) -> GroupPresentation:
    """Pull the extension back along a 2-to-1 central cover of its quotient.

    Adjoins a central order-2 generator z and corrects each lifted quotient
    relator by the sign obtained from evaluating it on the designated
    generator lifts, in the cover's exact arithmetic.
    """
    if cover.quotient is None:
        raise ValueError("cover carries no quotient map")
    base, mapping = cover.quotient
    if base.name != pres.metadata.get("quotient") or base.order != pres.metadata.get("quotient_order"):
        raise ValueError("cover quotient does not match the presentation's quotient")
    kernel_indices = cover.central_kernel_indices()
    if len(kernel_indices) != 2:
        raise ValueError("cover is not 2-to-1")
    minus_one = next(i for i in kernel_indices if i != cover.identity)
    if len(cover.generators) < len(base.generators):
        raise ValueError("cover has fewer designated generators than its base")
    for pos in range(len(base.generators)):
        if mapping[cover.generators[pos]] != base.generators[pos]:
            raise ValueError("designated generators of the cover do not lift the base's")

    quotient_positions = pres.metadata.get("quotient_positions", [])
    lift_of = {
        letter: cover.generators[i] for i, letter in enumerate(quotient_positions)
    }
    tags = pres.metadata.get("relator_tags", ["lifted"] * len(pres.relators))

    z = len(pres.generators) + 1
    generators = list(pres.generators) + ["z"]
    relators: list[Word] = [(z, z)]
    new_tags = ["central"]
    for g in range(1, z):
        relators.append((z, g, -z, -g))
        new_tags.append("central")
    for rel, tag in zip(pres.relators, tags):
        if tag != "lifted":
            relators.append(rel)
            new_tags.append(tag)
            continue
        acc = cover.identity
        for letter in rel:
            if abs(letter) in lift_of:
                s = lift_of[abs(letter)]
                acc = cover.mul(acc, s if letter > 0 else cover.inv(s))
        if acc == cover.identity:
            relators.append(rel)
        elif acc == minus_one:
            relators.append(rel + (-z,))
        else:
            raise AssertionError("lifted relator does not land in the central kernel")
        new_tags.append("lifted")

    metadata = dict(pres.metadata)
    metadata["relator_tags"] = new_tags
    metadata["pullback_cover"] = cover.name
    metadata["central_generator"] = "z"
    return GroupPresentation(generators, relators, metadata)


def abelianization(pres: GroupPresentation) -> FGAbelianGroup:
    """Cokernel of the relator exponent-sum matrix."""
    n = len(pres.generators)
    cols = []
    for rel in pres.relators:
        vec = [0] * n
        for letter in rel:
            vec[abs(letter) - 1] += 1 if letter > 0 else -1
        cols.append(vec)
    if not cols:
        return FGAbelianGroup(n)
    return cokernel(IntMatrix.from_columns(cols, nrows=n))


def count_homs(pres: GroupPresentation, target: FiniteGroup,
               budget: int = 10 ** 7) -> int:
    """Exhaustive count of homomorphisms into a finite group."""
    k = len(pres.generators)
    if target.order ** k > budget:
        raise ValueError(
            f"{target.order}^{k} assignments exceed the budget {budget}"
        )
    relators = pres.relators
    count = 0
    for assignment in iproduct(range(target.order), repeat=k):
        ok = True
        for rel in relators:
            acc = target.identity
            for letter in rel:
                g = assignment[abs(letter) - 1]
                acc = target.mul(acc, g if letter > 0 else target.inv(g))
            if acc != target.identity:
                ok = False
                break
        if ok:
            count += 1
    return count


def verify_quotient_map(pres: GroupPresentation, quotient: FiniteGroup) -> bool:
    """Check that kernel gens -> 1, quotient gens -> designated generators
    defines a homomorphism (every relator evaluates to the identity)."""
    positions = pres.metadata.get("quotient_positions", [])
    images = {letter: quotient.generators[i] for i, letter in enumerate(positions)}
    for rel in pres.relators:
        acc = quotient.identity
        for letter in rel:
            img = images.get(abs(letter))
            if img is None:
                continue
            acc = quotient.mul(acc, img if letter > 0 else quotient.inv(img))
        if acc != quotient.identity:
            return False
    return True


def asg_presentation(lattice_rank: int, point_group: FiniteGroup, action,
                     cocycle=None) -> GroupPresentation:
    """Crystallographers' aperiodic space group: Lambda' -> ASG -> G_pm."""
    mats = {}
    for name in point_group.generator_names:
        mat = action[name]
        mat = mat if isinstance(mat, IntMatrix) else IntMatrix.from_rows(mat)
        if mat.shape != (lattice_rank, lattice_rank):
            raise ValueError("action matrix has the wrong shape")
        if mat.det() not in (1, -1):
            raise ValueError("action matrix is not integrally invertible")
        mats[name] = mat
    spec = ExtensionSpec(
        "free-abelian",
        point_group,
        kernel_rank=lattice_rank,
        action_matrices=mats,
        cocycle=cocycle,
    )
    return extension_presentation(spec)


def section_cocycle(cover: FiniteGroup) -> dict[tuple[int, int], int]:
    """c(g, h) = s(g) s(h) s(gh)^-1 in {0, 1} (exponent of the central -1).

    The section picks the smaller-index preimage of every base element.
    """
    if cover.quotient is None:
        raise ValueError("cover carries no quotient map")
    base, mapping = cover.quotient
    minus_one = next(
        i for i in cover.central_kernel_indices() if i != cover.identity
    )
    section = {}
    for i in range(cover.order):
        section.setdefault(mapping[i], i)
    c = {}
    for g in range(base.order):
        for h in range(base.order):
            prod = cover.mul(section[g], section[h])
            rep = section[base.mul(g, h)]
            val = cover.mul(prod, cover.inv(rep))
            if val == cover.identity:
                c[(g, h)] = 0
            elif val == minus_one:
                c[(g, h)] = 1
            else:
                raise AssertionError("section defect left the central kernel")
    return c


def section_cocycle_identity_holds(cover: FiniteGroup) -> bool:
    """Exhaustive 2-cocycle identity over the whole base group cubed."""
    base, _ = cover.quotient
    c = section_cocycle(cover)
    for g in range(base.order):
        for h in range(base.order):
            for k in range(base.order):
                gh = base.mul(g, h)
                hk = base.mul(h, k)
                if (c[(g, h)] + c[(gh, k)]) % 2 != (c[(h, k)] + c[(g, hk)]) % 2:
                    return False
    return True


# -- builtin extension specs ---------------------------------------------------

STURMIAN_ACTION = {
    "R": {"a1": "a2", "b1": "b2", "a2": "A1", "b2": "B1", "a3": "a3", "b3": "b3"},
    "D": {"a1": "a2", "b1": "b2", "a2": "a3", "b2": "b3", "a3": "a1", "b3": "b1"},
}


def builtin_extension(name: str) -> ExtensionSpec:
    from .groups import CUBE_D, CUBE_R

    if name == "cubic-gamma-plus":
        octa = builtin_group("O")
        return ExtensionSpec(
            "free-abelian",
            octa,
            kernel_rank=3,
            action_matrices={
                "R": IntMatrix.from_rows(CUBE_R),
                "D": IntMatrix.from_rows(CUBE_D),
            },
        )
    if name == "sturmian-gamma-plus":
        return ExtensionSpec(
            "product-of-free",
            builtin_group("O"),
            kernel_ranks=(2, 2, 2),
            action_words=STURMIAN_ACTION,
        )
    if name.startswith("codim1-asg-d"):
        d = int(name.rsplit("d", 1)[1])
        pm = builtin_group("pm")
        neg = IntMatrix.diagonal([-1] * (d + 1))
        return ExtensionSpec(
            "free-abelian", pm, kernel_rank=d + 1, action_matrices={"m": neg}
        )
    raise KeyError(f"unknown extension {name!r}")


EXTENSION_NAMES = ("cubic-gamma-plus", "sturmian-gamma-plus", "codim1-asg-d2",
                   "codim1-asg-d3")


def extension_from_json(data: dict) -> ExtensionSpec:
    quotient = builtin_group(data["quotient"])
    kind = data["kernel"]["type"]
    cocycle = None
    if data.get("cocycle"):
        cocycle = {
            (int(k.split(",")[0]), int(k.split(",")[1])): tuple(v)
            for k, v in data["cocycle"].items()
        }
    if kind == "free-abelian":
        mats = {
            name: IntMatrix.from_rows(rows)
            for name, rows in data["action"].items()
        }
        return ExtensionSpec(
            "free-abelian", quotient, kernel_rank=int(data["kernel"]["rank"]),
            action_matrices=mats, cocycle=cocycle,
        )
    if kind == "product-of-free":
        return ExtensionSpec(
            "product-of-free", quotient,
            kernel_ranks=tuple(int(r) for r in data["kernel"]["ranks"]),
            action_words=data["action"], cocycle=cocycle,
        )
    raise ValueError(f"unknown kernel type {kind!r}")


def resolve_extension(name_or_path: str) -> ExtensionSpec:
    if name_or_path in EXTENSION_NAMES:
        return builtin_extension(name_or_path)
    with open(name_or_path, "r", encoding="utf-8") as fh:
        return extension_from_json(json.load(fh))
