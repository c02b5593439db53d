"""Tests for subsimplex enumeration, the two conditions, and the equivalence audit."""

import math

import numpy as np
import pytest

from minangle import (
    DegeneracyError,
    InvalidInputError,
    Mesh,
    Simplex,
    Thresholds,
    cell_quality,
    certified_dsine_bound,
    check_generalized_condition,
    check_minimum_angle_condition,
    equivalence_audit,
    flatten_family,
    mesh_quality,
    min_dihedral_over_subsimplices,
    min_vertex_dsine,
    random_simplex,
    regular_simplex,
    subsimplex_count,
    subsimplices,
)
from oracles import planar_angle

REGULAR_TETRA_DSINE = 4.0 / (3.0 * math.sqrt(3.0))
CORNER3_OFF_CORNER_DSINE = 1.0 / math.sqrt(3.0)


def corner(d):
    return Simplex(np.vstack([np.zeros(d), np.eye(d)]))


def single_cell_mesh(simplex):
    return Mesh(simplex.vertices, [list(range(simplex.vertex_count))])


def triangle_with_angles(alpha, beta, origin=(0.0, 0.0)):
    """Triangle with angle alpha at vertex 0 and beta at vertex 1, base length 1."""
    gamma = math.pi - alpha - beta
    ac = math.sin(beta) / math.sin(gamma)
    ox, oy = origin
    return [
        [ox, oy],
        [ox + 1.0, oy],
        [ox + ac * math.cos(alpha), oy + ac * math.sin(alpha)],
    ]


class TestSubsimplices:
    def test_tetrahedron_count(self):
        subs = subsimplices(regular_simplex(3))
        assert len(subs) == 5
        assert sorted(s.intrinsic_dim for s in subs) == [2, 2, 2, 2, 3]

    def test_four_simplex_count(self):
        assert len(subsimplices(regular_simplex(4))) == 16

    def test_triangle_is_its_only_subsimplex(self):
        subs = subsimplices(regular_simplex(2))
        assert len(subs) == 1
        assert subs[0].intrinsic_dim == 2

    @pytest.mark.parametrize("d", range(2, 9))
    def test_count_matches_binomial_closed_form(self, d):
        expected = sum(math.comb(d + 1, m) for m in range(3, d + 2))
        assert len(subsimplices(regular_simplex(d))) == expected
        assert subsimplex_count(d) == expected

    def test_deterministic_order(self):
        s = regular_simplex(3)
        first = [tuple(map(tuple, sub.vertices)) for sub in subsimplices(s)]
        second = [tuple(map(tuple, sub.vertices)) for sub in subsimplices(s)]
        assert first == second
        # triangles (size-3 subsets) come before the full cell
        assert [sub.intrinsic_dim for sub in subsimplices(s)] == [2, 2, 2, 2, 3]

    def test_min_dim_below_two_rejected(self):
        with pytest.raises(InvalidInputError):
            subsimplices(regular_simplex(3), min_dim=1)

    def test_dimension_cap(self):
        s = regular_simplex(13)
        with pytest.raises(InvalidInputError):
            subsimplices(s)
        assert len(subsimplices(s, allow_high_dim=True)) == subsimplex_count(13)


class TestMinDihedralOverSubsimplices:
    def test_equilateral_triangle(self):
        lo, hi = min_dihedral_over_subsimplices(regular_simplex(2))
        assert lo == pytest.approx(math.pi / 3, abs=1e-12)
        assert hi == pytest.approx(math.pi / 3, abs=1e-12)

    def test_regular_tetrahedron(self):
        lo, hi = min_dihedral_over_subsimplices(regular_simplex(3))
        assert lo == pytest.approx(math.pi / 3, abs=1e-12)  # face angles
        assert hi == pytest.approx(math.acos(1.0 / 3.0), abs=1e-12)

    def test_corner_simplex(self):
        lo, hi = min_dihedral_over_subsimplices(corner(3))
        assert lo == pytest.approx(math.pi / 4, abs=1e-12)
        assert hi == pytest.approx(math.pi / 2, abs=1e-12)

    def test_triangle_reduces_to_planar_angle_span(self):
        for seed in range(20):
            tri = random_simplex(2, seed=4400 + seed, min_quality=1e-2)
            angles = [planar_angle(tri.vertices, i) for i in range(3)]
            lo, hi = min_dihedral_over_subsimplices(tri)
            assert lo == pytest.approx(min(angles), abs=1e-10)
            assert hi == pytest.approx(max(angles), abs=1e-10)

    def test_degenerate_subsimplex_names_the_subset(self):
        # vertices 0,1,3 are collinear while the tetrahedron itself is not flat
        bad = Simplex(
            [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [2.0, 0.0, 0.0]]
        )
        with pytest.raises(DegeneracyError, match=r"\(0, 1, 3\)"):
            min_dihedral_over_subsimplices(bad)


class TestMinVertexDsine:
    def test_regular_tetrahedron(self):
        assert min_vertex_dsine(regular_simplex(3)) == pytest.approx(
            REGULAR_TETRA_DSINE, abs=1e-12
        )

    def test_corner_minimum_away_from_the_right_angle(self):
        from minangle import vertex_sines

        sines = vertex_sines(corner(3)).sines
        assert min(sines) == pytest.approx(CORNER3_OFF_CORNER_DSINE, abs=1e-12)
        assert sines.index(min(sines)) != 0
        assert min_vertex_dsine(corner(3)) == min(sines)

    def test_right_triangle(self):
        assert min_vertex_dsine(corner(2)) == pytest.approx(
            math.sqrt(0.5), abs=1e-12
        )


class TestConditionChecks:
    def test_minimum_angle_satisfied(self):
        verdict, quality = check_minimum_angle_condition(
            single_cell_mesh(regular_simplex(3)), alpha0=1.0
        )
        assert verdict.satisfied
        assert verdict.worst_cell == 0
        assert verdict.worst_value == pytest.approx(math.pi / 3, abs=1e-12)
        assert quality.cells[0].subsimplex_count == 5

    def test_minimum_angle_violated(self):
        verdict, _ = check_minimum_angle_condition(
            single_cell_mesh(regular_simplex(3)), alpha0=1.1
        )
        assert not verdict.satisfied
        assert verdict.worst_cell == 0
        assert verdict.worst_value == pytest.approx(1.0471975511965976, abs=1e-10)

    def test_zero_threshold_rejected(self):
        with pytest.raises(InvalidInputError):
            check_minimum_angle_condition(single_cell_mesh(regular_simplex(3)), alpha0=0.0)
        with pytest.raises(InvalidInputError):
            Thresholds(alpha0=math.pi)

    def test_generalized_condition_both_ways(self):
        mesh = single_cell_mesh(regular_simplex(3))
        ok, _ = check_generalized_condition(mesh, dsine_min=0.7)
        bad, _ = check_generalized_condition(mesh, dsine_min=0.8)
        assert ok.satisfied
        assert not bad.satisfied

    def test_generalized_condition_on_sliver(self):
        verdict, _ = check_generalized_condition(
            single_cell_mesh(flatten_family(3, 0.01)), dsine_min=0.5
        )
        assert not verdict.satisfied
        assert verdict.worst_value < 0.5

    def test_verdict_invariant(self):
        mesh = single_cell_mesh(regular_simplex(3))
        for alpha0 in (0.5, 1.0, 1.0471975511965976, 1.2):
            verdict, _ = check_minimum_angle_condition(mesh, alpha0)
            assert verdict.satisfied == (verdict.worst_value >= verdict.threshold_used)

    def test_ties_break_to_lowest_cell_index(self):
        tet = regular_simplex(3)
        shifted = tet.vertices + np.array([10.0, 0.0, 0.0])
        mesh = Mesh(
            np.vstack([tet.vertices, shifted]),
            [[0, 1, 2, 3], [4, 5, 6, 7]],
        )
        verdict, _ = check_minimum_angle_condition(mesh, alpha0=2.0)
        assert verdict.worst_cell == 0

    def test_degenerate_cell_yields_annotated_violation(self):
        tri = triangle_with_angles(math.pi / 3, math.pi / 3)
        flat = [[5.0, 0.0], [6.0, 0.0], [7.0, 0.0]]
        mesh = Mesh(np.vstack([tri, flat]), [[0, 1, 2], [3, 4, 5]])
        verdict, quality = check_minimum_angle_condition(mesh, alpha0=0.5)
        assert not verdict.satisfied
        assert verdict.degenerate_cells == (1,)
        assert verdict.worst_cell == 1
        assert verdict.worst_value == 0.0
        assert quality.degenerate_cells == (1,)
        assert len(quality.cells) == 1


class TestCertifiedBound:
    def test_dimension_two_is_the_classical_bound(self):
        s = math.sin(0.9)
        assert certified_dsine_bound(0.9, 0.9, 2) == pytest.approx(s, abs=1e-15)

    def test_right_angle_window_gives_one(self):
        assert certified_dsine_bound(math.pi / 2, math.pi / 2, 3) == pytest.approx(
            1.0, abs=1e-15
        )

    def test_dimension_four_exponent(self):
        alpha = math.asin(0.5)
        assert certified_dsine_bound(alpha, alpha, 4) == pytest.approx(
            0.5**6, rel=1e-12
        )

    def test_precondition_violations(self):
        with pytest.raises(InvalidInputError):
            certified_dsine_bound(0.0, 1.0, 3)
        with pytest.raises(InvalidInputError):
            certified_dsine_bound(1.0, 0.5, 3)
        with pytest.raises(InvalidInputError):
            certified_dsine_bound(1.0, math.pi, 3)
        with pytest.raises(InvalidInputError):
            certified_dsine_bound(0.5, 1.0, 1)


class TestEquivalenceAudit:
    def test_regular_tetrahedron_margins(self):
        audit = equivalence_audit(single_cell_mesh(regular_simplex(3)))
        assert audit.satisfied()
        cell = audit.cells[0]
        # equilateral faces make the forward margin exactly zero up to rounding
        assert abs(cell.forward_margin) < 1e-9
        assert cell.certified_bound == pytest.approx(
            math.sin(math.pi / 3) ** 3, abs=1e-12
        )
        assert cell.backward_margin == pytest.approx(
            REGULAR_TETRA_DSINE - math.sin(math.pi / 3) ** 3, abs=1e-9
        )

    def test_corner_simplex_margins(self):
        audit = equivalence_audit(single_cell_mesh(corner(3)))
        assert audit.satisfied()
        cell = audit.cells[0]
        assert cell.certified_bound == pytest.approx(
            math.sin(math.pi / 4) ** 3, abs=1e-12
        )
        assert cell.min_vertex_dsine == pytest.approx(
            CORNER3_OFF_CORNER_DSINE, abs=1e-12
        )
        assert cell.backward_margin > 0.0
        assert cell.forward_margin >= -1e-9

    def test_many_random_tetrahedra(self):
        simplices = [
            random_simplex(3, seed=90_000 + seed, min_quality=1e-2)
            for seed in range(500)
        ]
        vertices = np.vstack([s.vertices for s in simplices])
        cells = [[4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3] for i in range(len(simplices))]
        audit = equivalence_audit(Mesh(vertices, cells))
        assert audit.satisfied()
        assert audit.min_forward_margin() >= -1e-9
        assert audit.min_backward_margin() >= -1e-9

    def test_degenerate_cell_is_flagged_and_audit_continues(self):
        tet = regular_simplex(3)
        flat = np.array(
            [[9.0, 0.0, 0.0], [10.0, 0.0, 0.0], [11.0, 0.0, 0.0], [12.0, 0.0, 0.0]]
        )
        mesh = Mesh(np.vstack([tet.vertices, flat]), [[0, 1, 2, 3], [4, 5, 6, 7]])
        audit = equivalence_audit(mesh)
        assert audit.degenerate_cells == (1,)
        assert len(audit.cells) == 1
        assert audit.cells[0].cell_index == 0
        assert not audit.satisfied()


class TestTwoDimensionalEquivalence:
    """For acute triangles the two conditions name the same worst cell."""

    def build_mesh(self):
        tris = [
            triangle_with_angles(math.pi / 3, math.pi / 3, origin=(0.0, 0.0)),
            triangle_with_angles(math.radians(50), math.radians(60), origin=(10.0, 0.0)),
            triangle_with_angles(math.radians(45), math.radians(60), origin=(20.0, 0.0)),
        ]
        vertices = np.vstack(tris)
        cells = [[3 * i, 3 * i + 1, 3 * i + 2] for i in range(len(tris))]
        return Mesh(vertices, cells)

    def test_triangle_builder_matches_oracle(self):
        tri = np.asarray(triangle_with_angles(math.radians(45), math.radians(60)))
        assert planar_angle(tri, 0) == pytest.approx(math.radians(45), abs=1e-12)
        assert planar_angle(tri, 1) == pytest.approx(math.radians(60), abs=1e-12)

    def test_argmin_agreement_for_acute_meshes(self):
        mesh = self.build_mesh()
        quality = mesh_quality(mesh)
        assert all(c.max_dihedral_all_sub <= math.pi / 2 + 1e-12 for c in quality.cells)
        angle_verdict, _ = check_minimum_angle_condition(mesh, alpha0=1.0)
        sine_verdict, _ = check_generalized_condition(mesh, dsine_min=0.9)
        assert angle_verdict.worst_cell == sine_verdict.worst_cell == 2

    def test_verdict_agreement_with_related_thresholds(self):
        mesh = self.build_mesh()
        for alpha0 in (0.7, 0.8, 1.0, 1.05):
            angle_verdict, _ = check_minimum_angle_condition(mesh, alpha0)
            sine_verdict, _ = check_generalized_condition(mesh, math.sin(alpha0))
            assert angle_verdict.satisfied == sine_verdict.satisfied


class TestDegeneratingFamily:
    def test_flatten_family_monotone_decay(self):
        dsines = []
        min_dihedrals = []
        for exponent in range(1, 11):
            s = flatten_family(3, 2.0**-exponent)
            dsines.append(min_vertex_dsine(s))
            min_dihedrals.append(min_dihedral_over_subsimplices(s)[0])
        assert all(b < a for a, b in zip(dsines, dsines[1:]))
        assert all(b < a for a, b in zip(min_dihedrals, min_dihedrals[1:]))
        assert dsines[-1] < 1e-3


class TestCellQuality:
    def test_regular_tetrahedron_record(self):
        record = cell_quality(regular_simplex(3), cell_index=4)
        assert record.cell_index == 4
        assert record.subsimplex_count == 5
        assert record.min_dihedral_all_sub <= record.max_dihedral_all_sub
        assert 0.0 < record.min_vertex_dsine <= 1.0
        assert record.dihedral_sum_top == pytest.approx(
            6.0 * math.acos(1.0 / 3.0), abs=1e-12
        )

    def test_degenerate_cell_raises(self):
        with pytest.raises(DegeneracyError):
            cell_quality(flatten_family(3, 1e-15))
