import math

import numpy as np
import pytest

from sgcert import (
    ConicRegion,
    ConicTheta,
    FrequencyGrid,
    StateSpace,
    certify_circle,
    certify_conic,
    ellipse_theta,
    fit_conic,
    freq_response,
    hermitian_part,
    q_matrix,
    region_area,
    sg_system_sample,
)
from sgcert.conic import QEvaluator

from conftest import random_stable_ss


def dense_gain_oracle(sys, c, n_points=3000):
    ws = np.concatenate([[0.0], np.logspace(-4, 5, n_points)])
    worst = 0.0
    n = sys.n_io
    for w in list(ws) + [math.inf]:
        M = freq_response(sys, w) - c * np.eye(n)
        worst = max(worst, float(np.linalg.svd(M, compute_uv=False)[0]))
    return worst


class TestQMatrix:
    def test_unit_gain_multiplier_at_dc(self, first_order):
        Q = q_matrix(first_order, ConicTheta(1, 1, 0, -1), 0.0)
        assert Q.shape == (1, 1)
        assert Q[0, 0] == pytest.approx(0.0, abs=1e-14)

    def test_unit_gain_multiplier_at_one(self, first_order):
        Q = q_matrix(first_order, ConicTheta(1, 1, 0, -1), 1.0)
        assert Q[0, 0] == pytest.approx(-0.5)

    def test_zero_multiplier(self, h1):
        Q = q_matrix(h1, ConicTheta(0, 0, 0, 0), 2.0)
        assert np.abs(Q).max() == 0.0

    def test_hermitian(self, h2):
        Q = q_matrix(h2, ConicTheta(2, 1, -0.3, -1), 0.7)
        assert np.allclose(Q, Q.conj().T)

    def test_infinite_frequency(self, h1):
        Q = q_matrix(h1, ConicTheta(1, 1, 0, -1), math.inf)
        assert np.allclose(Q, -np.eye(2))  # D = 0 for h1


class TestCertifyConic:
    def test_unit_gain_certified(self, first_order):
        cert = certify_conic(first_order, ConicTheta(1, 1, 0, -1))
        assert cert.certified and cert.h_convex and cert.indefinite
        assert cert.worst_lambda <= cert.tol

    def test_violation_at_dc(self, first_order):
        cert = certify_conic(first_order, ConicTheta(1, 1, 0, -0.9))
        assert not cert.certified
        assert cert.worst_lambda == pytest.approx(0.1, abs=1e-9)
        assert cert.violating_omega == pytest.approx(0.0)

    def test_non_indefinite_reported_not_raised(self, first_order):
        cert = certify_conic(first_order, ConicTheta(1, 1, 0, 1))
        assert not cert.certified and not cert.indefinite
        assert "indefinite" in cert.reason

    def test_wide_conic_fails_convexity_gate(self, first_order):
        cert = certify_conic(first_order, ConicTheta(1, 2, 0, -4))
        assert not cert.certified and not cert.h_convex
        assert "convex" in cert.reason

    def test_unstable_rejected(self):
        integ = StateSpace([[0.0]], [[1.0]], [[1.0]], [[0.0]])
        with pytest.raises(ValueError, match="stable"):
            certify_conic(integ, ConicTheta(1, 1, 0, -1))

    def test_h1_certified_tall_ellipse_beats_nothing(self, h1):
        # a mildly tall certified ellipse exists around the h1 response
        cert = certify_conic(h1, ellipse_theta(0.1, 0.76, 0.80))
        assert cert.certified

    def test_soundness_against_sampled_cloud(self):
        rng = np.random.default_rng(51)
        certified_checked = 0
        for _ in range(18):
            n_io = int(rng.integers(1, 3))
            sys = random_stable_ss(rng, int(rng.integers(1, 5)), n_io)
            cloud = sg_system_sample(sys, FrequencyGrid(count=80), n_dirs=24,
                                     seed=17)
            zs = cloud.zs
            c0 = float(zs.real.mean())
            r0 = float(np.abs(zs - c0).max()) * 1.15 + 0.02
            theta = ConicTheta(1.0, 1.0, -c0, c0 * c0 - r0 * r0)
            cert = certify_conic(sys, theta)
            if not cert.certified:
                continue
            certified_checked += 1
            scale = max(1.0, abs(theta.t13), abs(theta.t33))
            assert float(np.max(theta.value(zs))) <= 1e-6 * scale
        assert certified_checked >= 12

    def test_circle_consistency_with_lmi_verdicts(self):
        rng = np.random.default_rng(52)
        tested = 0
        for _ in range(50):
            sys = random_stable_ss(rng, int(rng.integers(1, 5)), 1)
            c = float(rng.uniform(-1.0, 1.0))
            v = dense_gain_oracle(sys, c)
            r = float(v * rng.uniform(0.75, 1.25)) + 1e-3
            if abs(v - r) <= 1e-3:
                continue
            tested += 1
            theta = ConicTheta(1.0, 1.0, -c, c * c - r * r)
            conic_verdict = certify_conic(sys, theta).certified
            lmi_verdict = certify_circle(sys, c, r).feasible
            assert conic_verdict == lmi_verdict, (c, r, v)
        assert tested >= 35

    def test_cauchy_schwarz_proof_step(self):
        rng = np.random.default_rng(53)
        for _ in range(500):
            n = int(rng.integers(1, 5))
            A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            Hs = hermitian_part(A)
            u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            lhs = np.real(u.conj() @ Hs @ u) ** 2
            rhs = np.real(u.conj() @ Hs @ Hs @ u) * np.real(u.conj() @ u)
            assert lhs <= rhs * (1 + 1e-12) + 1e-12

    def test_lambda_continuity_near_worst_point(self, h2):
        theta = ellipse_theta(0.5, 0.62, 0.65)
        cert = certify_conic(h2, theta)
        ev = QEvaluator(h2)
        ws = cert.grid[np.isfinite(cert.grid) & (cert.grid > 0)]
        if cert.violating_omega and cert.violating_omega > 0:
            k = int(np.argmin(np.abs(ws - cert.violating_omega)))
        else:
            lams = ev.lam_max(theta, ws)
            k = int(np.argmax(lams))
        lo, hi = max(0, k - 1), min(len(ws) - 1, k + 1)
        lams = ev.lam_max(theta, ws[lo:hi + 1])
        assert np.abs(np.diff(lams)).max() <= 10 * max(cert.tol, 1e-7)


class TestFitConic:
    def test_static_gain_degenerates_to_floor(self):
        sys = StateSpace.static_gain([[2.0]])
        fit = fit_conic(sys)
        assert fit.certificate.certified
        assert fit.x0 == pytest.approx(2.0, abs=1e-2)
        assert fit.a <= 2e-3

    def test_first_order_close_to_response_circle(self, first_order):
        fit = fit_conic(first_order)
        assert fit.certificate.certified
        assert fit.area <= math.pi * 0.52 ** 2

    def test_h2_improves_on_disk(self, h2):
        fit = fit_conic(h2)
        assert fit.certificate.certified
        disk_area = math.pi * 0.5944 ** 2  # minimal certified disk (frozen)
        assert fit.area < disk_area

    def test_area_matches_semi_axes(self, first_order):
        fit = fit_conic(first_order)
        assert fit.area == pytest.approx(math.pi * fit.a * fit.b, rel=1e-9)

    def test_tall_constraint_respected(self, h2):
        fit = fit_conic(h2)
        assert fit.b >= fit.a
        assert fit.theta.t11 >= fit.theta.t22
