import random

import pytest

from rotohull.abelian import FGAbelianGroup
from rotohull.groups import FiniteGroup, builtin_group, generate_group
from rotohull.intlinalg import IntMatrix
from rotohull.modules import coinvariants, standard_rotation_module
from rotohull.models import wedge_cube_model
from rotohull.presentations import (
    ExtensionSpec,
    GroupPresentation,
    abelianization,
    asg_presentation,
    builtin_extension,
    central_pullback,
    count_homs,
    extension_presentation,
    presentation_from_text,
    presentation_to_text,
    quotient_relators,
    section_cocycle,
    section_cocycle_identity_holds,
    verify_quotient_map,
)
from rotohull.quaternion import Quaternion

G = lambda rank, *torsion: FGAbelianGroup(rank, torsion)


def brute_force_hom_count(pres, target):
    """Independent oracle: evaluate every assignment with no shortcuts."""
    from itertools import product

    count = 0
    for assignment in product(range(target.order), repeat=len(pres.generators)):
        good = True
        for rel in pres.relators:
            acc = target.identity
            for letter in rel:
                g = assignment[abs(letter) - 1]
                if letter < 0:
                    g = target.inv(g)
                acc = target.mul(acc, g)
            if acc != target.identity:
                good = False
                break
        if good:
            count += 1
    return count


class TestQuotientRelators:
    def test_presents_c2(self):
        c2 = builtin_group("C_2")
        rels = quotient_relators(c2)
        pres = GroupPresentation(["r"], rels)
        # A presentation of C_2 admits exactly |Hom| = 2 maps to C_2 and 1 to C_3.
        assert count_homs(pres, c2) == 2
        assert count_homs(pres, builtin_group("C_3")) == 1

    def test_presents_octahedral(self):
        octa = builtin_group("O")
        pres = GroupPresentation(["R", "D"], quotient_relators(octa))
        # Maps to C_2 = maps from O^ab = Z/2: exactly 2.
        assert count_homs(pres, builtin_group("C_2")) == 2
        assert abelianization(pres) == G(0, 2)


class TestExtensionPresentation:
    def test_cubic_symmorphic(self):
        pres = extension_presentation(builtin_extension("cubic-gamma-plus"))
        assert pres.generators == ["t1", "t2", "t3", "R", "D"]
        assert verify_quotient_map(pres, builtin_group("O"))
        assert abelianization(pres) == G(0, 2, 2)

    def test_cubic_abelianization_matches_coinvariants(self):
        pres = extension_presentation(builtin_extension("cubic-gamma-plus"))
        octa = builtin_group("O")
        expected = coinvariants(standard_rotation_module(octa)).direct_sum(G(0, 2))
        assert abelianization(pres) == expected

    def test_sturmian_gamma_plus(self):
        pres = extension_presentation(builtin_extension("sturmian-gamma-plus"))
        assert pres.generators[:6] == ["a1", "b1", "a2", "b2", "a3", "b3"]
        assert verify_quotient_map(pres, builtin_group("O"))

    def test_sturmian_abelianization_cross_module(self):
        # ab(N x| O) = (N^ab)_O + O^ab with the coinvariants computed
        # independently from the wedge model's degree-1 module.
        pres = extension_presentation(builtin_extension("sturmian-gamma-plus"))
        wedge_h1 = wedge_cube_model().graded[1]
        expected = coinvariants(wedge_h1).direct_sum(G(0, 2))
        assert abelianization(pres) == expected

    def test_codim1_families(self):
        pres = extension_presentation(builtin_extension("codim1-asg-d2"))
        assert abelianization(pres) == G(0, 2, 2, 2, 2)
        pres3 = asg_presentation(
            4, builtin_group("pm"), {"m": IntMatrix.diagonal([-1] * 4)}
        )
        assert abelianization(pres3) == G(0, 2, 2, 2, 2, 2)

    def test_asg_trivial_point_group(self):
        pres = asg_presentation(3, builtin_group("trivial"), {})
        assert abelianization(pres) == G(3)

    def test_cocycle_identity_enforced(self):
        c2 = builtin_group("C_2")
        bad = {
            (g, h): (1,) for g in range(2) for h in range(2)
        }
        spec = ExtensionSpec(
            "free-abelian", c2, kernel_rank=1,
            action_matrices={"r": IntMatrix.from_rows([[1]])}, cocycle=bad,
        )
        with pytest.raises(ValueError):
            extension_presentation(spec)

    def test_nontrivial_cocycle_gives_z(self):
        # The extension of C_2 by Z with trivial action and cocycle
        # c(r, r) = 1 is Z itself (the index-2 subgroup 2Z); abelianization Z.
        c2 = builtin_group("C_2")
        cocycle = {(0, 0): (0,), (0, 1): (0,), (1, 0): (0,), (1, 1): (1,)}
        spec = ExtensionSpec(
            "free-abelian", c2, kernel_rank=1,
            action_matrices={"r": IntMatrix.from_rows([[1]])}, cocycle=cocycle,
        )
        pres = extension_presentation(spec)
        assert abelianization(pres) == G(1)


class TestCentralPullback:
    def test_cubic_pullback_matches_direct_2O_extension(self):
        pulled = central_pullback(
            extension_presentation(builtin_extension("cubic-gamma-plus")),
            builtin_group("2O"),
        )
        assert "z" in pulled.generators
        # Directly presented Z^3 x| 2O (action through the rotation images).
        two_o = builtin_group("2O")
        direct = extension_presentation(ExtensionSpec(
            "free-abelian", two_o, kernel_rank=3,
            action_matrices={
                "R": two_o.rotation_image_int(two_o.generators[0]),
                "D": two_o.rotation_image_int(two_o.generators[1]),
            },
        ))
        assert abelianization(pulled) == abelianization(direct)
        for target in ("C_2", "C_3", "C_4"):
            t = builtin_group(target)
            assert count_homs(pulled, t) == count_homs(direct, t)

    def test_pullback_over_trivial_group_is_product_with_z2(self):
        trivial_q = builtin_group("trivial")
        pres = extension_presentation(
            ExtensionSpec("free-abelian", trivial_q, kernel_rank=4)
        )
        cover = generate_group([-Quaternion.of(1, 0, 0, 0)], name="S0")
        cover.set_quotient(trivial_q, [0, 0])
        pulled = central_pullback(pres, cover)
        assert abelianization(pulled) == G(4, 2)

    def test_abelianization_kernel_at_most_two(self):
        base = extension_presentation(builtin_extension("cubic-gamma-plus"))
        pulled = central_pullback(base, builtin_group("2O"))
        ab_base = abelianization(base)
        ab_pull = abelianization(pulled)
        # The pullback's abelianization surjects onto the base's with kernel
        # of order at most 2.
        def order(g):
            from math import prod
            return prod(g.torsion) if g.free_rank == 0 else None
        assert order(ab_pull) in (order(ab_base), 2 * order(ab_base))

    def test_mismatched_cover_rejected(self):
        pres = extension_presentation(builtin_extension("codim1-asg-d2"))
        with pytest.raises(ValueError):
            central_pullback(pres, builtin_group("2O"))


class TestAbelianization:
    def test_free_group(self):
        assert abelianization(GroupPresentation(["a", "b"], [])) == G(2)

    def test_z3_semidirect_c2(self):
        pres = asg_presentation(
            3, builtin_group("pm"), {"m": IntMatrix.diagonal([-1, -1, -1])}
        )
        assert abelianization(pres) == G(0, 2, 2, 2, 2)

    def test_tietze_invariance(self):
        rng = random.Random(11)
        pres = extension_presentation(builtin_extension("cubic-gamma-plus"))
        before = abelianization(pres)
        # Add a redundant generator equal to a random word, with its
        # defining relator.
        word = tuple(
            rng.choice([1, -1]) * rng.randint(1, len(pres.generators))
            for _ in range(4)
        )
        new_idx = len(pres.generators) + 1
        extended = GroupPresentation(
            pres.generators + ["w"],
            pres.relators + [word + (-new_idx,)],
        )
        assert abelianization(extended) == before


class TestCountHoms:
    def test_free_group_examples(self):
        f2 = GroupPresentation(["a", "b"], [])
        assert count_homs(f2, builtin_group("C_2")) == 4

    def test_z2_into_c2(self):
        z2 = GroupPresentation(["a", "b"], [(1, 2, -1, -2)])
        assert count_homs(z2, builtin_group("C_2")) == 4

    def test_into_trivial_group(self):
        pres = extension_presentation(builtin_extension("cubic-gamma-plus"))
        assert count_homs(pres, builtin_group("trivial")) == 1

    def test_budget(self):
        f2 = GroupPresentation(["a", "b", "c"], [])
        with pytest.raises(ValueError):
            count_homs(f2, builtin_group("2O"), budget=1000)

    def test_matches_brute_force_on_random_presentations(self):
        rng = random.Random(23)
        targets = [builtin_group("C_2"), builtin_group("C_3"), builtin_group("C_6")]
        for trial in range(5):
            k = rng.randint(1, 2)
            relators = [
                tuple(rng.choice([1, -1]) * rng.randint(1, k)
                      for _ in range(rng.randint(1, 4)))
                for _ in range(rng.randint(0, 3))
            ]
            pres = GroupPresentation([f"g{i}" for i in range(k)], relators)
            target = targets[trial % len(targets)]
            assert count_homs(pres, target) == brute_force_hom_count(pres, target)

    def test_split_extension_has_sections(self):
        # A split extension admits at least |sections| >= 1 homomorphisms
        # onto its quotient; verify the designated quotient map and count.
        pres = extension_presentation(builtin_extension("cubic-gamma-plus"))
        octa = builtin_group("O")
        assert verify_quotient_map(pres, octa)


class TestSectionCocycle:
    def test_identity_on_all_of_o_cubed(self):
        assert section_cocycle_identity_holds(builtin_group("2O"))

    def test_cocycle_is_nontrivial(self):
        c = section_cocycle(builtin_group("2O"))
        assert any(v == 1 for v in c.values())

    def test_normalised(self):
        cover = builtin_group("2O")
        base, _ = cover.quotient
        c = section_cocycle(cover)
        assert all(c[(base.identity, h)] == 0 for h in range(base.order))


class TestTextFormat:
    def test_round_trip(self):
        pres = extension_presentation(builtin_extension("sturmian-gamma-plus"))
        text = presentation_to_text(pres)
        again = presentation_from_text(text)
        assert again.generators == pres.generators
        assert again.relators == pres.relators
