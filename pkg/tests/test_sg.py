import math

import numpy as np
import pytest

from sgcert import (
    ConicRegion,
    ConicTheta,
    Disk,
    FrequencyGrid,
    SgCloud,
    cloud_diameter,
    cloud_distance,
    containment_margin,
    export_csv,
    freq_response,
    gain_phase,
    h_convex_hull,
    import_csv,
    invert_cloud,
    membership,
    sg_matrix_sample,
    sg_system_sample,
)
from sgcert.lti import StateSpace

from conftest import random_stable_ss


class TestGainPhase:
    def test_pure_gain(self):
        p, q = gain_phase(1.0, 4.0, 2.0)
        assert p.z == pytest.approx(2.0)
        assert q.z == pytest.approx(2.0)

    def test_orthogonal_pair(self):
        p, q = gain_phase(1.0, 1.0, 0.0)
        assert p.z == pytest.approx(1j)
        assert q.z == pytest.approx(-1j)

    def test_zero_output_has_zero_phase(self):
        p, _ = gain_phase(1.0, 0.0, 0.0)
        assert p.z == 0.0

    def test_zero_input_rejected(self):
        with pytest.raises(ValueError, match="zero input"):
            gain_phase(0.0, 1.0, 0.0)

    def test_cauchy_schwarz_violation_rejected(self):
        with pytest.raises(ValueError, match="Cauchy"):
            gain_phase(1.0, 1.0, 1.1)

    def test_clamp_at_rounding_level(self):
        p, _ = gain_phase(1.0, 1.0, 1.0 + 1e-13)
        assert p.z == pytest.approx(1.0)


class TestMatrixSample:
    def test_siso_is_exact_point(self):
        cloud = sg_matrix_sample(np.array([[2.0]]), n_dirs=16)
        assert set(np.round(cloud.zs, 15)) == {2.0 + 0.0j}

    def test_nilpotent_contains_zero_and_imaginary_unit(self):
        cloud = sg_matrix_sample(np.array([[0.0, 1.0], [0.0, 0.0]]), n_dirs=8,
                                 seed=1)
        zs = cloud.zs
        assert np.min(np.abs(zs - 0.0)) < 1e-12          # direction e1
        assert np.min(np.abs(zs - 1j)) < 1e-12           # direction e2
        assert np.min(np.abs(zs + 1j)) < 1e-12

    def test_h1_frequency_slice_inside_paper_disk(self, h1):
        M = freq_response(h1, 1.0)
        cloud = sg_matrix_sample(M, n_dirs=200, seed=3)
        assert np.all(np.abs(cloud.zs - 0.1) <= 0.78 + 1e-10)

    def test_points_bounded_by_largest_singular_value(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            cloud = sg_matrix_sample(M, n_dirs=32, seed=5)
            assert np.abs(cloud.zs).max() <= np.linalg.svd(M, compute_uv=False)[0] + 1e-10

    def test_requires_positive_dirs(self):
        with pytest.raises(ValueError):
            sg_matrix_sample(np.eye(2), n_dirs=0)


class TestSystemSample:
    def test_first_order_lies_on_response_circle(self, first_order):
        cloud = sg_system_sample(first_order, FrequencyGrid(count=200), n_dirs=4)
        assert np.abs(np.abs(cloud.zs - 0.5) - 0.5).max() < 1e-6

    def test_static_gain_single_point(self):
        cloud = sg_system_sample(StateSpace.static_gain([[2.0]]),
                                 FrequencyGrid(count=10), n_dirs=4)
        assert set(np.round(cloud.zs, 15)) == {2.0 + 0.0j}

    def test_h2_inside_paper_disk(self, h2):
        cloud = sg_system_sample(h2, FrequencyGrid(count=200), n_dirs=48, seed=0)
        assert np.abs(cloud.zs - 0.52).max() <= 0.75

    def test_unstable_rejected(self):
        integ = StateSpace([[0.0]], [[1.0]], [[1.0]], [[0.0]])
        with pytest.raises(ValueError, match="stable"):
            sg_system_sample(integ)

    def test_conjugate_closure(self, h1):
        cloud = sg_system_sample(h1, FrequencyGrid(count=40), n_dirs=8, seed=2)
        assert cloud.is_conjugate_closed()

    def test_deterministic_and_job_invariant(self, h2):
        grid = FrequencyGrid(count=30)
        a = sg_system_sample(h2, grid, n_dirs=8, seed=9, n_jobs=1)
        b = sg_system_sample(h2, grid, n_dirs=8, seed=9, n_jobs=4)
        assert np.array_equal(a.zs, b.zs)

    def test_siso_equals_nyquist_plus_conjugates(self, first_order):
        ws = [0.0, 0.5, 1.0, 2.0]
        cloud = sg_system_sample(first_order, ws, n_dirs=7)
        H = np.array([freq_response(first_order, w)[0, 0] for w in ws])
        expect = np.concatenate([[h, np.conj(h)] for h in H])
        assert np.array_equal(np.sort_complex(cloud.zs), np.sort_complex(expect))


class TestInvertCloud:
    def test_half(self):
        cloud = SgCloud([2.0 + 0j], [1.0], [0])
        assert invert_cloud(cloud).zs[0] == pytest.approx(0.5)

    def test_imaginary(self):
        cloud = SgCloud([1j], [1.0], [0])
        assert invert_cloud(cloud).zs[0] == pytest.approx(-1j)

    def test_zero_maps_to_infinity_marker(self):
        cloud = SgCloud([0.0 + 0j], [1.0], [0])
        out = invert_cloud(cloud)
        assert out.has_infinity

    def test_involution_without_zeros(self, h2):
        cloud = sg_system_sample(h2, FrequencyGrid(count=25), n_dirs=6, seed=1)
        back = invert_cloud(invert_cloud(cloud))
        assert np.abs(back.zs - cloud.zs).max() <= 1e-12 * (1 + np.abs(cloud.zs).max())


class TestCloudDistance:
    def test_two_points(self):
        a = SgCloud([1.0 + 0j], [0.0], [0])
        b = SgCloud([3.0 + 0j], [0.0], [0])
        assert cloud_distance(a, b) == pytest.approx(2.0)

    def test_coincident(self):
        a = SgCloud([1 + 1j], [0.0], [0])
        assert cloud_distance(a, a) == 0.0

    def test_both_infinite_markers(self):
        a = SgCloud([complex(math.inf, 0.0)], [0.0], [0])
        assert cloud_distance(a, a) == 0.0

    def test_empty_rejected(self):
        a = SgCloud(np.empty(0, complex), np.empty(0), np.empty(0, int))
        b = SgCloud([1.0 + 0j], [0.0], [0])
        with pytest.raises(ValueError):
            cloud_distance(a, b)

    def test_symmetry_and_triangle_style_bound(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            mk = lambda k: SgCloud(
                rng.normal(0, 2, k) + 1j * rng.normal(0, 2, k),
                np.zeros(k), np.zeros(k, int))
            a, b, c = mk(15), mk(10), mk(12)
            assert cloud_distance(a, b) == pytest.approx(cloud_distance(b, a))
            assert cloud_distance(a, c) <= (cloud_distance(a, b)
                                            + cloud_diameter(b)
                                            + cloud_distance(b, c) + 1e-12)


class TestHConvexHull:
    def test_two_points_unchanged(self):
        cloud = SgCloud([1 + 1j, 1 - 1j], [0.0, 0.0], [0, 0])
        hull = h_convex_hull(cloud)
        assert set(np.round(hull.zs, 12)) == {1 + 1j, 1 - 1j}

    def test_circle_hull_stays_in_disk(self, first_order):
        cloud = sg_system_sample(first_order, FrequencyGrid(count=150), n_dirs=4)
        hull = h_convex_hull(cloud)
        assert len(hull) > 0
        assert np.abs(hull.zs - 0.5).max() <= 0.5 + 1e-9

    def test_hull_vertices_are_cloud_members(self, h1):
        cloud = sg_system_sample(h1, FrequencyGrid(count=60), n_dirs=16, seed=4)
        hull = h_convex_hull(cloud)
        finite = cloud.zs[np.isfinite(cloud.zs)]
        for z in hull.zs:
            assert np.min(np.abs(finite - z)) < 1e-14

    def test_hull_preserves_conic_containment(self):
        # points inside a tall conic region stay inside after hulling
        rng = np.random.default_rng(8)
        theta = ConicTheta(2.0, 1.0, -0.4, -1.0)
        region = ConicRegion(theta)
        pts = []
        while len(pts) < 120:
            z = complex(rng.normal(0, 1.2), rng.uniform(0, 1.5))
            if theta.value(z) <= -1e-3:
                pts.append(z)
        pts = np.array(pts)
        cloud = SgCloud(np.concatenate([pts, pts.conj()]),
                        np.zeros(240), np.zeros(240, int))
        hull = h_convex_hull(cloud)
        assert np.all(theta.value(hull.zs) <= 1e-9)

    def test_result_conjugate_closed(self, h2):
        cloud = sg_system_sample(h2, FrequencyGrid(count=40), n_dirs=8, seed=5)
        assert h_convex_hull(cloud).is_conjugate_closed()


class TestCsv:
    def test_round_trip(self, tmp_path, h2):
        cloud = sg_system_sample(h2, FrequencyGrid(count=15), n_dirs=4, seed=7)
        path = tmp_path / "cloud.csv"
        export_csv(cloud, path)
        back = import_csv(path)
        assert np.allclose(back.zs, cloud.zs)
        assert np.allclose(back.omegas[np.isfinite(back.omegas)],
                           cloud.omegas[np.isfinite(cloud.omegas)])
        assert np.array_equal(back.dir_idx, cloud.dir_idx)

    def test_header(self, tmp_path, first_order):
        cloud = sg_system_sample(first_order, [1.0], n_dirs=1)
        path = tmp_path / "c.csv"
        export_csv(cloud, path)
        assert path.read_text().splitlines()[0] == "omega,re,im,direction_index"


class TestCloudRegionConsistency:
    def test_cloud_inside_certified_regions(self):
        from sgcert import certify_circle

        rng = np.random.default_rng(10)
        checked = 0
        for _ in range(12):
            sys = random_stable_ss(rng, rng.integers(1, 5), rng.integers(1, 3))
            cloud = sg_system_sample(sys, FrequencyGrid(count=60), n_dirs=12,
                                     seed=11)
            zs = cloud.zs
            c0 = float(zs.real.mean())
            r0 = float(np.abs(zs - c0).max()) * 1.25 + 0.05
            res = certify_circle(sys, c0, r0)
            if not res.feasible:
                continue
            checked += 1
            assert float(containment_margin(res.region, zs).min()) >= -1e-8
        assert checked >= 8
