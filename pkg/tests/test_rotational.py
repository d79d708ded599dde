import random

import pytest

from rotohull.abelian import FGAbelianGroup
from rotohull.groups import builtin_group
from rotohull.intlinalg import IntMatrix
from rotohull.models import TilingModel, builtin_model
from rotohull.modules import gmodule, invariants, trivial_module
from rotohull.rotational import (
    AMBIGUOUS,
    CERTIFIED,
    assemble_3d,
    borel_e2_page,
    e2_page_3d,
    planar_cohomology,
    rational_cohomology,
)

G = lambda rank, *torsion: FGAbelianGroup(rank, torsion)


def grid(page, ring_int=False):
    return {
        k: [page.cell(n, k) for n in range(page.n_max + 1)]
        for k in range(page.k_max + 1)
    }


class TestE2Pages:
    def test_cube_integral_page(self):
        page = e2_page_3d(builtin_model("cube-lattice"))
        rows = grid(page)
        assert rows[0] == [G(1), G(0), G(0, 2), G(1)]
        assert rows[1] == [G(0), G(0, 2), G(0, 4), G(0, 2)]
        assert rows[2] == [G(0), G(0, 2), G(0, 4), G(0, 2)]
        assert rows[3] == [G(1), G(0), G(0, 2), G(1)]

    def test_sturmian_integral_page(self):
        page = e2_page_3d(builtin_model("sturmian-cube"))
        rows = grid(page)
        assert rows[0] == [G(1), G(0), G(0, 2), G(1)]
        assert rows[1] == [G(0), G(0, 2, 2), G(0, 4, 4), G(0, 2, 2)]
        assert rows[2] == [G(0), G(0, 2, 2, 2), G(0, 2, 4, 4), G(0, 2, 2, 2)]
        assert rows[3] == [G(4), G(0), G(0, 2, 2, 2, 2, 2, 2), G(4)]

    def test_sturmian_f2_page(self):
        page = e2_page_3d(builtin_model("sturmian-cube"), ring="F2")
        rows = grid(page)
        assert rows[0] == [1, 1, 1, 1]
        assert rows[1] == [2, 4, 4, 2]
        assert rows[2] == [3, 6, 6, 3]
        assert rows[3] == [4, 6, 6, 4]

    def test_cube_f2_page(self):
        page = e2_page_3d(builtin_model("cube-lattice"), ring="F2")
        rows = grid(page)
        assert rows[0] == rows[3] == [1, 1, 1, 1]
        assert rows[1] == rows[2] == [1, 2, 2, 1]

    def test_cube_rows_1_and_2_identical(self):
        page = e2_page_3d(builtin_model("cube-lattice"))
        rows = grid(page)
        assert rows[1] == rows[2]

    def test_column_zero_is_invariants(self):
        for name in ("cube-lattice", "sturmian-cube"):
            model = builtin_model(name)
            page = e2_page_3d(model)
            for k in model.graded:
                rank, _ = invariants(model.graded[k])
                assert page.cell(0, k) == G(rank)

    def test_top_corner_free_rank(self):
        for name, expected in (("cube-lattice", 1), ("sturmian-cube", 4)):
            model = builtin_model(name)
            page = e2_page_3d(model)
            assert page.cell(3, model.top_degree).free_rank == expected

    def test_wrong_dimension_rejected(self):
        with pytest.raises(ValueError):
            e2_page_3d(builtin_model("punctured-torus-d2"))


class TestBorelPages:
    def test_cube_table(self):
        page = borel_e2_page(builtin_model("cube-lattice"), n_max=4)
        rows = grid(page)
        assert rows[0] == rows[3] == [G(1), G(0), G(0, 2), G(0), G(0, 48)]
        assert rows[1] == rows[2] == [G(0), G(0, 2), G(0, 4), G(0, 2), G(0)]

    def test_sturmian_k3_row(self):
        page = borel_e2_page(builtin_model("sturmian-cube"), n_max=4)
        rows = grid(page)
        assert rows[3] == [
            G(4),
            G(0),
            G(0, 2, 2, 2, 2, 2, 2),
            G(0),
            FGAbelianGroup.from_orders(0, [16, 16, 48, 48]),
        ]

    def test_sturmian_f2_k2_row(self):
        page = borel_e2_page(builtin_model("sturmian-cube"), n_max=4, ring="F2")
        assert grid(page)[2] == [3, 6, 6, 3, 3]


class TestAssemble:
    def test_cube_certified_theorem(self):
        table = assemble_3d(builtin_model("cube-lattice"))
        assert table.status == CERTIFIED
        assert [table.degree(n) for n in range(7)] == [
            G(1), G(0), G(0, 2, 2), G(2, 2, 4), G(0, 2, 4), G(0, 2, 2), G(1)
        ]
        assert table.fp_dims[2] == [1, 2, 4, 6, 4, 2, 1]

    def test_sturmian_certified_theorem(self):
        table = assemble_3d(builtin_model("sturmian-cube"))
        assert table.status == CERTIFIED
        assert [table.degree(n) for n in range(7)] == [
            G(1),
            G(0),
            G(0, 2, 2, 2),
            G(5, 2, 2, 4, 4).direct_sum(G(0, 2)),
            G(0, 2, 2, 4, 4).direct_sum(G(0, 2)),
            G(0, *([2] * 9)),
            G(4),
        ]
        assert table.fp_dims[2] == [1, 3, 8, 15, 14, 9, 4]

    def test_refuses_without_invariant_skeleton(self):
        model = builtin_model("cube-lattice")
        model.has_invariant_skeleton = False
        with pytest.raises(ValueError):
            assemble_3d(model)
        table = assemble_3d(model, force=True)
        assert any("forced" in note for note in table.notes)


class TestPlanar:
    def test_punctured_torus_example(self):
        table = planar_cohomology(builtin_model("punctured-torus-d2"))
        assert table.status == CERTIFIED
        assert [table.degree(n) for n in range(4)] == [
            G(1), G(1), G(3, 2, 2, 2), G(3)
        ]

    def test_c2_sign_on_h1_only(self):
        c2 = builtin_group("C_2")
        model = TilingModel(
            "sign-test",
            2,
            c2,
            {
                0: trivial_module(c2),
                1: gmodule(c2, [IntMatrix.from_rows([[-1]])]),
                2: trivial_module(c2, 0),
            },
            has_invariant_skeleton=True,
        )
        table = planar_cohomology(model)
        assert table.degree(2) == G(0, 2)
        assert table.degree(3) == G(0)

    def test_trivial_group_kuenneth(self):
        # With no rotations, Omega_r = Omega_t x S^1 and the closed form
        # must be the Kunneth formula.
        trivial = builtin_group("trivial")
        rng = random.Random(5)
        for _ in range(20):
            ranks = [1] + [rng.randint(0, 4) for _ in range(rng.randint(1, 3))]
            graded = {k: trivial_module(trivial, r) for k, r in enumerate(ranks)}
            model = TilingModel("random-kuenneth", 2, trivial, graded, True)
            table = planar_cohomology(model)
            for n in range(len(ranks) + 1):
                expect = (ranks[n] if n < len(ranks) else 0) + (
                    ranks[n - 1] if 0 <= n - 1 < len(ranks) else 0
                )
                assert table.degree(n) == G(expect)

    def test_needs_cyclic_group(self):
        model = builtin_model("cube-lattice")
        with pytest.raises(ValueError):
            planar_cohomology(model)


class TestRational:
    def test_sturmian(self):
        assert rational_cohomology(builtin_model("sturmian-cube")) == [1, 0, 0, 5, 0, 0, 4]

    def test_punctured_torus(self):
        assert rational_cohomology(builtin_model("punctured-torus-d2")) == [1, 1, 3, 3]

    def test_cube(self):
        assert rational_cohomology(builtin_model("cube-lattice")) == [1, 0, 0, 2, 0, 0, 1]

    def test_trivial_group_convolution(self):
        trivial = builtin_group("trivial")
        graded = {
            0: trivial_module(trivial, 1),
            1: trivial_module(trivial, 3),
            2: trivial_module(trivial, 2),
        }
        model = TilingModel("betti-conv", 2, trivial, graded, True)
        assert rational_cohomology(model) == [1, 4, 5, 2]

    def test_unsupported_dimension(self):
        with pytest.raises(ValueError):
            rational_cohomology(builtin_model("cube-lattice"), d=5)
