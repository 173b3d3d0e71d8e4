import numpy as np
import pytest

from condgrad.sets import L1Ball, NonnegL1Ball, Simplex, lmo_l1ball, lmo_nonneg_l1, lmo_simplex


def random_convex_combinations(gen, vertices, count):
    verts = np.stack(vertices)
    weights = gen.dirichlet(np.ones(len(vertices)), size=count)
    return weights @ verts


def make_sets(dim):
    return [Simplex(dim), L1Ball(dim, 1.7), NonnegL1Ball(dim, 2.5)]


class TestLmoExamples:
    def test_simplex(self):
        assert np.array_equal(lmo_simplex([3.0, -1.0, 2.0]), [0.0, 1.0, 0.0])
        assert np.array_equal(lmo_simplex([0.0, 0.0]), [1.0, 0.0])
        # gradient of the 2-d log barrier at (1/4, 3/4)
        assert np.array_equal(lmo_simplex([-4.0, -4.0 / 3.0]), [1.0, 0.0])

    def test_l1ball(self):
        assert np.array_equal(lmo_l1ball([1.0, -2.0, 0.5], 1.0), [0.0, 1.0, 0.0])
        assert np.array_equal(lmo_l1ball([0.0, 0.0, 0.0], 1.0), [-1.0, 0.0, 0.0])
        assert np.array_equal(lmo_l1ball([5.0], 2.0), [-2.0])

    def test_nonneg_l1(self):
        assert np.array_equal(lmo_nonneg_l1([0.5, -1.0, 2.0], 3.0), [0.0, 3.0, 0.0])
        assert np.array_equal(lmo_nonneg_l1([1.0, 2.0], 5.0), [0.0, 0.0])
        assert np.array_equal(lmo_nonneg_l1([-1.0, -1.0], 1.0), [1.0, 0.0])

    def test_nonfinite_rejected(self):
        for fn in (lmo_simplex, lambda c: lmo_l1ball(c, 1.0), lambda c: lmo_nonneg_l1(c, 1.0)):
            with pytest.raises(ValueError):
                fn([np.nan, 1.0])
            with pytest.raises(ValueError):
                fn([np.inf, 1.0])


class TestBruteForceOptimality:
    @pytest.mark.parametrize("dim", [1, 2, 3, 4, 5, 6])
    def test_lmo_attains_minimum(self, dim):
        gen = np.random.default_rng(100 + dim)
        for fs in make_sets(dim):
            verts = fs.vertices()
            points = random_convex_combinations(gen, verts, 1000)
            for _ in range(25):
                c = gen.normal(size=dim)
                out = fs.lmo(c)
                val = np.dot(c, out)
                best_vertex = min(np.dot(c, v) for v in verts)
                assert val <= best_vertex + 1e-12
                assert np.all(points @ c >= val - 1e-12)

    @pytest.mark.parametrize("dim", [2, 4])
    def test_lmo_output_feasible(self, dim):
        gen = np.random.default_rng(7)
        for fs in make_sets(dim):
            for _ in range(1000):
                c = gen.normal(size=dim)
                assert fs.contains(fs.lmo(c), tol=1e-12)

    @pytest.mark.parametrize("dim", [2, 5])
    def test_lmo_positively_homogeneous(self, dim):
        gen = np.random.default_rng(17)
        for fs in make_sets(dim):
            for _ in range(50):
                c = gen.normal(size=dim)
                lam = gen.uniform(0.1, 10.0)
                assert np.array_equal(fs.lmo(c), fs.lmo(lam * c))


class TestDiameter:
    @pytest.mark.parametrize("dim", [1, 2, 3, 4, 5, 6])
    def test_matches_vertex_brute_force(self, dim):
        for fs in make_sets(dim):
            verts = fs.vertices()
            brute = max(
                np.linalg.norm(a - b) for i, a in enumerate(verts) for b in verts[i:]
            )
            assert fs.diameter == pytest.approx(brute, abs=1e-12)

    def test_closed_forms(self):
        assert Simplex(5).diameter == pytest.approx(np.sqrt(2.0))
        assert L1Ball(5, 3.0).diameter == 6.0
        assert NonnegL1Ball(5, 3.0).diameter == pytest.approx(3.0 * np.sqrt(2.0))


class TestStartPoint:
    def test_examples(self):
        assert np.array_equal(Simplex(4).start_point(), np.full(4, 0.25))
        assert np.array_equal(L1Ball(2, 3.0).start_point(), np.zeros(2))
        assert np.array_equal(NonnegL1Ball(2, 2.0).start_point(), [0.5, 0.5])

    def test_relative_interior(self):
        for fs in make_sets(3):
            x = fs.start_point()
            assert fs.contains(x)
            if fs.kind == "simplex":
                assert np.all(x > 0.0)
            elif fs.kind == "nonneg_l1":
                assert np.all(x > 0.0) and np.sum(x) < fs.radius
            else:
                assert np.sum(np.abs(x)) < fs.radius


class TestContains:
    def test_tolerance_absorbs_roundoff(self):
        fs = Simplex(3)
        x = np.array([0.3, 0.3, 0.4]) + 1e-12
        assert fs.contains(x)
        assert not fs.contains(np.array([0.5, 0.6, -0.1]))
        assert not fs.contains(np.array([0.5, 0.5, 0.5]))

    def test_shape_mismatch(self):
        assert not Simplex(3).contains(np.array([0.5, 0.5]))
