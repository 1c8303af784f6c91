import numpy as np
import pytest

from transversals import (FAIL, INCONCLUSIVE, NON_TRANSVERSAL, PASS, TRANSVERSAL, build_mesh,
                          classify, components, contractibility_report, random_disjoint_family)
from transversals.constructions import CantorSpec, cantor_family
from transversals.errors import Inconclusive, LevelOutOfRange
from transversals.family import AMBIGUOUS
from transversals.sphere import (SphereClassification, closed_euler_characteristic,
                                 complement_connected)


def synthetic(mesh, labels):
    labels = np.asarray(labels, dtype=np.int64)
    return SphereClassification(mesh, labels, labels.astype(float), 0.0)


class TestMesh:
    def test_icosahedron(self):
        m = build_mesh(0)
        assert (m.vertices.shape[0], m.edges.shape[0], m.n_faces) == (12, 30, 20)

    @pytest.mark.parametrize("level", range(6))
    def test_euler(self, level):
        m = build_mesh(level)
        assert m.n_faces == 20 * 4 ** level
        assert m.euler_characteristic() == 2
        assert np.all(m.edge_faces >= 0)

    def test_unit_and_antipodes(self):
        m = build_mesh(3)
        np.testing.assert_allclose(np.linalg.norm(m.vertices, axis=1), 1, atol=1e-15)
        np.testing.assert_allclose(m.centroids[m.antipode_face], -m.centroids, atol=1e-12)
        assert np.all(m.antipode_face[m.antipode_face] == np.arange(m.n_faces))

    @pytest.mark.parametrize("level", [-1, 10, 2.5])
    def test_bad_level(self, level):
        with pytest.raises(LevelOutOfRange):
            build_mesh(level)


class TestClassify:
    def test_cubes_caps_and_band(self, two_cubes):
        c = classify(two_cubes, build_mesh(3))
        x, y, z = c.mesh.centroids.T
        # closed form: a line hits both cubes iff its slope max(|x|,|y|)/|z| is below 1/2
        slope = np.maximum(np.abs(x), np.abs(y)) / np.maximum(np.abs(z), 1e-300)
        assert np.all(c.labels[slope < 0.45] == TRANSVERSAL)
        assert np.all(c.labels[slope > 0.55] == NON_TRANSVERSAL)
        assert np.any(slope < 0.45) and np.any(slope > 0.55)

    def test_antipodal_labels(self, rng):
        f = random_disjoint_family(2, 7)
        c = classify(f, build_mesh(4))
        assert np.array_equal(c.labels, c.labels[c.mesh.antipode_face])

    def test_cantor_has_no_interior(self):
        c = classify(cantor_family(CantorSpec(1, 4)), build_mesh(3))
        assert not np.any(c.labels == TRANSVERSAL)


class TestComponents:
    def test_cube_caps(self, two_cubes):
        c = classify(two_cubes, build_mesh(4))
        t = components(c, TRANSVERSAL)
        assert len(t) == 2 and t.euler_characteristics == [1, 1]
        assert t.components[0].contains_antipode_of == 1
        n = components(c, [NON_TRANSVERSAL, AMBIGUOUS])
        assert len(n) == 1 and n.euler_characteristics == [0]

    def test_full_sphere(self):
        m = build_mesh(2)
        t = components(synthetic(m, np.ones(m.n_faces)), TRANSVERSAL)
        assert len(t) == 1 and t.euler_characteristics == [2]

    def test_closed_chi_single_face(self):
        assert closed_euler_characteristic(build_mesh(1), [0]) == 1
        assert closed_euler_characteristic(build_mesh(1), []) == 0

    def test_complement(self, two_cubes):
        assert complement_connected(classify(two_cubes, build_mesh(3)))
        m = build_mesh(3)
        z = m.centroids[:, 2]
        # two polar patches of N separated by a transversal band
        lab = np.where(np.abs(z) > 0.8, NON_TRANSVERSAL, TRANSVERSAL)
        assert not complement_connected(synthetic(m, lab))
        assert not complement_connected(synthetic(m, np.ones(m.n_faces)))


class TestReport:
    def test_cubes_pass(self, two_cubes):
        r = contractibility_report(two_cubes, level=4)
        assert r.verdict == PASS
        assert r.directed_count == 2 and r.undirected_count == 1
        assert r.antipodal_pairs == [(0, 1)]
        assert r.ambiguous_fraction < 0.02

    def test_random_scenes_pass(self):
        for seed in range(5):
            r = contractibility_report(random_disjoint_family(5, seed), level=4)
            assert r.verdict == PASS, seed

    def test_inconclusive(self, two_cubes):
        from transversals import Family

        coarse = Family(two_cubes.bodies, tau=0.5)
        with pytest.raises(Inconclusive) as exc:
            contractibility_report(coarse, level=2)
        assert exc.value.report.verdict == INCONCLUSIVE
        r = contractibility_report(coarse, level=2, raise_inconclusive=False)
        assert r.verdict == INCONCLUSIVE and r.ambiguous_fraction > 0.02

    def test_annulus_fails(self, two_cubes):
        # a transversal band is not a disk
        from transversals.sphere import antipodal_pairs
        m = build_mesh(3)
        lab = np.where(np.abs(m.centroids[:, 2]) < 0.3, TRANSVERSAL, NON_TRANSVERSAL)
        t = components(synthetic(m, lab), TRANSVERSAL)
        assert len(t) == 1 and t.euler_characteristics == [0]
        assert antipodal_pairs(t) == [(0, 0)]
        assert FAIL == "FAIL"
