import numpy as np

from vvicert import sampling


class TestStreams:
    def test_unit_points_deterministic(self):
        a = sampling.unit_points(2, 64, seed=1)
        b = sampling.unit_points(2, 64, seed=1)
        assert np.array_equal(a, b)

    def test_low_discrepancy_skips_origin(self):
        pts = sampling.unit_points(1, 8, seed=0)
        assert np.all(pts > 0)

    def test_uniform_path_for_high_dimension(self):
        a = sampling.unit_points(5, 32, seed=3)
        b = sampling.unit_points(5, 32, seed=4)
        assert not np.array_equal(a, b)

    def test_prefix_property(self):
        short = sampling.unit_points(2, 50, seed=0)
        long = sampling.unit_points(2, 200, seed=0)
        assert np.array_equal(short, long[:50])


class TestBallSampling:
    def test_points_inside_ball(self):
        center = np.array([0.5, -0.25])
        pts = sampling.ball_points(center, 0.3, 500, seed=0)
        assert pts.shape == (500, 2)
        assert np.all(np.linalg.norm(pts - center, axis=1) <= 0.3 + 1e-12)

    def test_ball_prefix_extension(self):
        center = np.zeros(1)
        short = sampling.ball_points(center, 0.5, 100, seed=2)
        long = sampling.ball_points(center, 0.5, 400, seed=2)
        assert np.array_equal(short, long[:100])

    def test_domain_clipping(self):
        center = np.array([0.9])
        domain = np.array([[-1.0, 1.0]])
        pts = sampling.ball_points(center, 0.5, 200, seed=0, domain=domain)
        assert np.all(pts <= 1.0)

    def test_pairs_both_inside(self):
        center = np.zeros(2)
        xs, ys = sampling.ball_pairs(center, 0.4, 300, seed=1)
        assert xs.shape == ys.shape == (300, 2)
        assert np.all(np.linalg.norm(xs, axis=1) <= 0.4 + 1e-12)
        assert np.all(np.linalg.norm(ys, axis=1) <= 0.4 + 1e-12)

    def test_pairs_deterministic(self):
        a = sampling.ball_pairs(np.zeros(1), 0.25, 100, seed=7)
        b = sampling.ball_pairs(np.zeros(1), 0.25, 100, seed=7)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


class TestSimplexGrid:
    def test_vertices_first(self):
        w = sampling.simplex_weights(3, 4)
        assert np.array_equal(w[:3], np.eye(3))

    def test_rows_are_convex_weights(self):
        w = sampling.simplex_weights(4, 5)
        assert np.all(w >= 0)
        assert np.allclose(w.sum(axis=1), 1.0)

    def test_grid_size_two_vertices_depth_eight(self):
        # compositions of 8 into 2 parts: 9 points, vertices included once
        assert sampling.simplex_weights(2, 8).shape == (9, 2)

    def test_single_vertex(self):
        assert np.array_equal(sampling.simplex_weights(1, 8), np.ones((1, 1)))
