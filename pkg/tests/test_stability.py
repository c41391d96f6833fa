import numpy as np
import pytest

from sgcert import (
    Disk,
    ExteriorDisk,
    FrequencyGrid,
    MultiplierPi,
    SgCloud,
    StateSpace,
    certify_feedback,
    cloud_distance,
    hard_margin,
    invert_cloud,
    pi_exterior,
    pi_interior,
    region_distance,
    sg_system_sample,
    soft_homotopy_sweep,
)

PI1 = pi_interior(0.1, 0.78)
PI2 = pi_interior(0.52, 0.75)


class TestHardMargin:
    def test_paper_configuration(self):
        # closed form: 0.78/0.5984 - (0.52 - 0.1/0.5984) - 0.75
        margin = hard_margin(PI1, PI2)
        assert margin == pytest.approx(0.88 / 0.5984 - 1.27, abs=1e-12)
        assert margin == pytest.approx(0.2006, abs=1e-4)

    def test_nested_small_disks(self):
        margin = hard_margin(pi_interior(0, 0.5), pi_interior(0, 0.5))
        assert margin == pytest.approx(1.5)

    def test_tangent_configuration(self):
        assert hard_margin(pi_interior(0, 1), pi_interior(0, 1)) == 0.0

    def test_empty_region_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            hard_margin(MultiplierPi(-1.0, 0.0, -1.0), PI2)


class TestCertifyFeedback:
    def test_paper_presets_certified(self, h1, h2):
        report = certify_feedback(h1, h2, PI1, PI2)
        assert report.certified
        assert report.margin == pytest.approx(0.2006, abs=1e-4)
        assert report.pathway == "hard_via_soft_regions"
        assert isinstance(report.region1_inv, ExteriorDisk)
        assert isinstance(report.region2_neg, Disk)

    def test_first_order_pair_regression(self, first_order):
        pi = pi_interior(0.5, 0.51)
        report = certify_feedback(first_order, first_order, pi, pi)
        assert report.certified
        # closed form: (0.51 - 0.5)/0.0101 + 0.5 - 0.51, frozen at first build
        assert report.margin == pytest.approx(0.9800990099009883, abs=1e-10)

    def test_non_positive_negative_multiplier_fails_with_reason(self, h1, h2):
        report = certify_feedback(h1, h2, pi_exterior(0.1, 0.78), PI2)
        assert not report.certified
        assert any("positive-negative" in r for r in report.reasons)

    def test_failed_containment_identifies_side(self, first_order, h2):
        report = certify_feedback(first_order, h2, pi_interior(0.5, 0.4), PI2)
        assert not report.certified
        assert any(r.startswith("sys1") for r in report.reasons)

    def test_unstable_loop_member_rejected(self, h2):
        integ = StateSpace([[0.0]], [[1.0]], [[1.0]], [[0.0]])
        with pytest.raises(ValueError, match="sys1"):
            certify_feedback(integ, h2, PI1, PI2)

    def test_report_json_shape(self, h1, h2):
        report = certify_feedback(h1, h2, PI1, PI2, tau_grid=[0.5, 1.0])
        doc = report.to_json()
        assert doc["schema"] == 1
        assert doc["certified"] is True
        assert doc["min_tau_margin"] > 0
        assert len(doc["tau_margins"]) == 2


class TestSoftHomotopySweep:
    def test_tau_one_equals_hard_margin(self):
        sweep = soft_homotopy_sweep(PI1, PI2, [1.0])
        assert sweep[0][1] == hard_margin(PI1, PI2)

    def test_small_tau_limit(self):
        # as tau -> 0 the scaled disk shrinks to the origin, so the margin
        # approaches the hole radius minus the hole-center offset
        sweep = soft_homotopy_sweep(PI1, PI2, [1e-9])
        assert sweep[0][1] == pytest.approx(1.30348 - 0.16711, abs=1e-4)
        assert sweep[0][1] == pytest.approx(1.13637, abs=1e-4)

    def test_default_grid_all_positive(self):
        sweep = soft_homotopy_sweep(PI1, PI2)
        assert len(sweep) == 101
        assert min(m for _, m in sweep) > 0

    def test_out_of_range_tau_rejected(self):
        for bad in ([0.0], [1.5], [-0.2]):
            with pytest.raises(ValueError):
                soft_homotopy_sweep(PI1, PI2, bad)


class TestMarginDominance:
    def test_cloud_distance_dominates_region_margin(self, h1, h2):
        # sampled clouds sit inside the certified regions, so their
        # point-set separation can only exceed the region separation
        margin = hard_margin(PI1, PI2)
        c1 = sg_system_sample(h1, FrequencyGrid(count=80), n_dirs=24, seed=31)
        c2 = sg_system_sample(h2, FrequencyGrid(count=80), n_dirs=24, seed=32)
        inv1 = invert_cloud(c1)
        neg2 = SgCloud(-c2.zs, c2.omegas, c2.dir_idx)
        assert cloud_distance(neg2, inv1) >= margin - 1e-6

    def test_hard_margin_matches_brute_force_on_random_disks(self):
        rng = np.random.default_rng(41)
        ang = np.linspace(0, 2 * np.pi, 100_001)
        for _ in range(15):
            c1, r1 = rng.uniform(-1, 1), rng.uniform(0.3, 1.5)
            c2, r2 = rng.uniform(-1, 1), rng.uniform(0.1, 1.0)
            pi1, pi2 = pi_interior(c1, r1), pi_interior(c2, r2)
            margin = hard_margin(pi1, pi2)
            inv1 = __import__("sgcert").invert_region(Disk(c1, r1))
            # brute force: boundary of -S(pi2) against the inverted region
            bnd = -c2 + r2 * np.exp(1j * ang)
            if isinstance(inv1, ExteriorDisk):
                brute = float(np.min(inv1.radius - np.abs(bnd - inv1.center)))
            elif isinstance(inv1, Disk):
                if abs(inv1.center + c2) <= r2:  # inv1 swallowed: overlap
                    assert margin == 0.0
                    continue
                brute = float(np.min(np.abs(bnd - inv1.center) - inv1.radius))
            else:
                continue
            assert margin == pytest.approx(max(0.0, brute), abs=1e-6)
