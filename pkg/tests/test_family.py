import itertools

import numpy as np
import pytest

from conftest import box, random_unit
from transversals import (AMBIGUOUS, NON_TRANSVERSAL, TRANSVERSAL, ConvexBody, DirectedLine,
                          Family, classify_direction, direction_depth, fiber_polygon,
                          geometric_permutation, helly_witness, is_line_transversal, project,
                          random_disjoint_family, ruled_segments, separating_circles,
                          transversal_line)
from transversals.constructions import cantor_family, CantorSpec
from transversals.convex import clearance, common_depth
from transversals.errors import NoWitness, NotDisjoint, NotTransversal


def ell(b):
    """The line {y = b, z = b x}, directed by increasing x."""
    return DirectedLine([0.0, b, 0.0], [1.0, 0.0, b])


class TestFamily:
    def test_needs_two_bodies(self):
        with pytest.raises(ValueError):
            Family([box((0, 0, 0), (1, 1, 1))])

    def test_overlap_rejected(self):
        with pytest.raises(NotDisjoint):
            Family([box((0, 0, 0), (2, 2, 2)), box((1, 1, 1), (3, 3, 3))])

    def test_default_tolerance(self, two_cubes):
        assert two_cubes.diameter == pytest.approx(np.sqrt(4 + 4 + 64))
        assert two_cubes.tau == pytest.approx(1e-7 * two_cubes.diameter)

    def test_separator_orientation(self, two_cubes):
        p = two_cubes.separator(0, 1)
        q = two_cubes.separator(1, 0)
        np.testing.assert_allclose(p.normal, -q.normal)
        assert np.all(p.side(two_cubes.bodies[0].vertices) < 0)
        assert np.all(q.side(two_cubes.bodies[1].vertices) < 0)


class TestDirectionDepth:
    def test_cube_axes(self, two_cubes):
        assert direction_depth(two_cubes, [0, 0, 1]).depth == pytest.approx(1.0)
        # projected squares [2,4] and [-4,-2] along z are 4 apart
        assert direction_depth(two_cubes, [1, 0, 0]).depth == pytest.approx(-2.0)
        assert direction_depth(two_cubes, [0, 1, 0]).depth == pytest.approx(-2.0)

    def test_matches_planar_oracle(self, two_cubes, rng):
        for v in random_unit(rng, 50):
            polys = [project(b, v) for b in two_cubes.bodies]
            assert direction_depth(two_cubes, v).depth == pytest.approx(
                common_depth(polys).depth, abs=1e-9)

    def test_witness_achieves_depth(self, rng):
        f = random_disjoint_family(4, 3)
        for v in random_unit(rng, 30):
            res = direction_depth(f, v)
            polys = [project(b, v) for b in f.bodies]
            assert clearance(polys, res.witness) == pytest.approx(res.depth, abs=1e-8)

    def test_ruled_lines_direction(self):
        f = Family(ruled_segments())
        assert direction_depth(f, [1, 0, 1.5]).depth > -f.tau
        assert direction_depth(f, [1, 0, 3.0]).depth < -f.tau

    def test_antipodal_symmetry(self, rng):
        f = random_disjoint_family(5, 11)
        dirs = random_unit(rng, 1000)
        d = f.depths(dirs)
        e = f.depths(-dirs)
        assert np.max(np.abs(d - e)) <= 1e-9

    def test_batch_matches_single(self, two_cubes, rng):
        dirs = random_unit(rng, 40)
        batch = two_cubes.depths(dirs)
        single = [direction_depth(two_cubes, v, seed=i).depth for i, v in enumerate(dirs)]
        np.testing.assert_allclose(batch, single, atol=1e-12)

    def test_labels(self, two_cubes):
        assert classify_direction(two_cubes, [0, 0, 1]) == TRANSVERSAL
        assert classify_direction(two_cubes, [1, 0, 0]) == NON_TRANSVERSAL
        # the tangency cone: squares touch along an edge
        v = np.array([0.0, 2.0, 4.0])
        assert classify_direction(two_cubes, v) == AMBIGUOUS


class TestFiber:
    def test_cube_square(self, two_cubes):
        P = fiber_polygon(two_cubes, [0, 0, 1])
        assert sorted(map(tuple, np.round(P.vertices, 12))) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    def test_non_transversal_empty(self, two_cubes):
        assert fiber_polygon(two_cubes, [1, 0, 0]) is None

    def test_witness_inside(self, rng):
        f = random_disjoint_family(3, 5)
        found = 0
        for v in random_unit(rng, 400):
            res = direction_depth(f, v)
            if res.depth <= f.tau:
                continue
            P = fiber_polygon(f, v)
            assert P is not None and P.contains(res.witness, tol=1e-9)
            found += 1
        assert found > 0


class TestCircles:
    def test_counts(self, two_cubes):
        y = separating_circles(two_cubes)
        assert len(y) == 1
        np.testing.assert_allclose(y.normals[0], [0, 0, 1], atol=1e-12)
        assert len(separating_circles(cantor_family(CantorSpec(0)))) == 6

    def test_circles_non_transversal(self):
        for seed in range(5):
            f = random_disjoint_family(2 + seed % 4, seed)
            y = separating_circles(f)
            t = np.linspace(0, 2 * np.pi, 360, endpoint=False)
            from transversals import orthonormal_basis
            for n in y.normals:
                e1, e2 = orthonormal_basis(n)
                pts = np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2
                assert np.all(f.depths(pts) < -f.tau)


class TestHelly:
    def test_pair_at_tangency(self, two_cubes):
        g = helly_witness(two_cubes, [0.0, 2.0, 4.0])
        assert g.indices == (0, 1)

    def test_balls_tangency(self, two_balls):
        from transversals import refine_to_boundary

        v = refine_to_boundary(two_balls, [0, 0, 1], [0, 1, 0])
        g = helly_witness(two_balls, v)
        assert g.indices == (0, 1)
        assert abs(g.depth_at_v) <= two_balls.tau
        # the discretized balls move the ideal tangency direction slightly
        assert np.linalg.norm(v - [0, np.sqrt(3) / 2, 0.5]) < 0.02

    def test_three_slabs(self, three_slabs):
        f = three_slabs
        for pair in itertools.combinations(range(3), 2):
            assert direction_depth(f, [0, 0, 1], subset=pair).depth > f.tau
        assert helly_witness(f, [0, 0, 1]).indices == (0, 1, 2)

    def test_transversal_has_no_witness(self, two_cubes):
        with pytest.raises(NoWitness):
            helly_witness(two_cubes, [0, 0, 1])


class TestLines:
    def test_ruled_transversal(self):
        segs = ruled_segments()
        assert is_line_transversal(segs, ell(1.5))
        assert is_line_transversal(segs, ell(1.0))
        assert not is_line_transversal(segs, ell(3.0))

    def test_single_body_vertex(self, rng):
        body = ConvexBody(rng.normal(size=(6, 3)))
        line = DirectedLine(body.vertices[2], random_unit(rng, 1)[0])
        assert is_line_transversal([body], line)

    def test_ruled_permutation(self):
        f = Family(ruled_segments())
        assert geometric_permutation(f, ell(1.5)) == (0, 1, 2)
        assert geometric_permutation(f, ell(1.5).reversed()) == (2, 1, 0)

    def test_cube_permutation(self, two_cubes):
        axis = DirectedLine([0, 0, 0], [0, 0, 1])
        assert geometric_permutation(two_cubes, axis) == (0, 1)
        assert geometric_permutation(two_cubes, axis.reversed()) == (1, 0)

    def test_missing_line(self, two_cubes):
        with pytest.raises(NotTransversal):
            geometric_permutation(two_cubes, DirectedLine([0, 0, 0], [1, 0, 0]))

    def test_deepest_line(self, two_cubes):
        line = transversal_line(two_cubes, [0.1, 0.0, 1.0])
        assert is_line_transversal(two_cubes, line)
        assert transversal_line(two_cubes, [1, 0, 0]) is None
