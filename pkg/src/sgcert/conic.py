"""Conic containment certification via a frequency-domain matrix inequality.

For a stable system H and an aligned conic multiplier Theta (indefinite, with
t11 >= t22 so the region is hyperbolically convex), negative semidefiniteness
of

    Q(w) = (t11 - t22) Hs(w)^2 + t22 H(jw)* H(jw) + 2 t13 Hs(w) + t33 I

for all real w certifies containment of the system's SG in the conic region;
Hs is the Hermitian part of the response. The test is checked on an adaptive
frequency grid: a base log grid plus {0, inf}, trisected wherever the largest
eigenvalue of Q changes sign or bends, until intervals are narrower than 1e-4
decades. The residual risk of a violation between grid points is a documented
caveat of the grid approach; the final grid is part of the certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .lti import StateSpace, freq_response, hermitian_part, is_hurwitz
from .regions import ConicRegion, ConicTheta, is_indefinite, region_area
from .sg import FrequencyGrid, sg_system_sample

__all__ = [
    "ConicCertificate",
    "QEvaluator",
    "q_matrix",
    "certify_conic",
    "fit_conic",
    "ellipse_theta",
]

REFINE_WIDTH_DECADES = 1e-4
TOL_SCALE = 1e-9


def q_matrix(sys: StateSpace, theta: ConicTheta, omega: float) -> np.ndarray:
    """Certificate matrix Q(w); Hermitian by construction.

    ``omega = math.inf`` evaluates the feedthrough response.
    """
    M = freq_response(sys, omega)
    Hs = hermitian_part(M)
    n = sys.n_io
    Q = (theta.alpha * (Hs @ Hs) + theta.t22 * (M.conj().T @ M)
         + 2.0 * theta.t13 * Hs + theta.t33 * np.eye(n))
    return (Q + Q.conj().T) / 2.0


class QEvaluator:
    """Caches per-frequency response products so many multipliers can be
    tested against one system cheaply."""

    def __init__(self, sys: StateSpace):
        hw = is_hurwitz(sys)
        if not hw.stable:
            raise ValueError(
                f"conic certification requires a stable system "
                f"(spectral abscissa {hw.abscissa:.4g})"
            )
        self.sys = sys
        self.n = sys.n_io
        self._cache: dict[float, tuple] = {}

    def _products(self, w: float) -> tuple:
        hit = self._cache.get(w)
        if hit is None:
            M = freq_response(self.sys, w)
            Hs = hermitian_part(M)
            hit = (Hs, M.conj().T @ M, Hs @ Hs)
            self._cache[w] = hit
        return hit

    def lam_max(self, theta: ConicTheta, ws) -> np.ndarray:
        """Largest eigenvalue of Q(w) for each frequency in ws."""
        ws = np.atleast_1d(np.asarray(ws, dtype=float))
        prods = [self._products(w) for w in ws]
        Hs = np.stack([p[0] for p in prods])
        MM = np.stack([p[1] for p in prods])
        Hs2 = np.stack([p[2] for p in prods])
        I = np.eye(self.n)
        Q = (theta.alpha * Hs2 + theta.t22 * MM + 2.0 * theta.t13 * Hs
             + theta.t33 * I)
        return np.linalg.eigvalsh(Q)[..., -1]


@dataclass
class ConicCertificate:
    theta: ConicTheta
    grid: np.ndarray
    worst_lambda: float
    certified: bool
    h_convex: bool
    indefinite: bool
    tol: float = math.nan
    violating_omega: Optional[float] = None
    reason: str = ""
    disk_fallback: bool = False

    def to_json(self) -> dict:
        return {
            "theta": {"t11": float(self.theta.t11), "t22": float(self.theta.t22),
                      "t13": float(self.theta.t13), "t33": float(self.theta.t33)},
            "grid_size": int(len(self.grid)),
            "worst_lambda": float(self.worst_lambda),
            "certified": bool(self.certified),
            "h_convex": bool(self.h_convex),
            "indefinite": bool(self.indefinite),
            "tol": float(self.tol),
            "violating_omega": (None if self.violating_omega is None
                                else float(self.violating_omega)),
            "reason": self.reason,
            "disk_fallback": bool(self.disk_fallback),
        }


def _adaptive_worst(ev: QEvaluator, theta: ConicTheta, base_ws: np.ndarray):
    """Worst lam_max over an adaptively refined grid.

    Finite positive frequencies are refined by trisection around sign
    changes and slope reversals of lam_max until intervals are narrower than
    REFINE_WIDTH_DECADES in log10; 0 and inf are evaluated directly.
    """
    base_ws = np.asarray(base_ws, dtype=float)
    fixed = base_ws[(base_ws == 0.0) | np.isinf(base_ws)]
    interior = np.unique(base_ws[(base_ws > 0.0) & np.isfinite(base_ws)])
    logs = np.log10(interior)
    lams = ev.lam_max(theta, interior)

    for _ in range(80):
        if len(logs) < 3:
            break
        flag = np.zeros(len(logs), dtype=bool)
        sign_change = np.sign(lams[1:]) != np.sign(lams[:-1])
        flag[:-1] |= sign_change
        flag[1:] |= sign_change
        d = np.diff(lams)
        bend = np.sign(d[1:]) != np.sign(d[:-1])
        flag[1:-1] |= bend
        widths = np.diff(logs)
        new_logs = []
        for i in np.where(flag[:-1] | flag[1:])[0]:
            if widths[i] > REFINE_WIDTH_DECADES:
                new_logs.extend([logs[i] + widths[i] / 3.0,
                                 logs[i] + 2.0 * widths[i] / 3.0])
        if not new_logs:
            break
        add = np.power(10.0, new_logs)
        add_l = ev.lam_max(theta, add)
        logs = np.concatenate([logs, new_logs])
        lams = np.concatenate([lams, add_l])
        order = np.argsort(logs)
        logs, lams = logs[order], lams[order]

    ws_all = np.concatenate([fixed, np.power(10.0, logs)])
    lam_all = np.concatenate([ev.lam_max(theta, fixed) if fixed.size else
                              np.empty(0), lams])
    k = int(np.argmax(lam_all))
    return float(lam_all[k]), float(ws_all[k]), np.sort(ws_all)


def certify_conic(sys: StateSpace, theta: ConicTheta, grid=None,
                  evaluator: Optional[QEvaluator] = None) -> ConicCertificate:
    """Containment certificate for the conic region of ``theta``.

    Certified requires: (i) theta indefinite, (ii) t11 >= t22 (hyperbolic
    convexity of the region), (iii) lam_max(Q(w)) <= tol over the refined
    grid, with tol = 1e-9 * (1 + ||Q(0)||).
    """
    ev = evaluator if evaluator is not None else QEvaluator(sys)
    indefinite = is_indefinite(theta)
    h_convex = theta.t11 >= theta.t22
    if grid is None:
        grid = FrequencyGrid(count=200)
    base = grid.omegas() if isinstance(grid, FrequencyGrid) else np.asarray(grid, float)

    if not indefinite:
        return ConicCertificate(
            theta, np.empty(0), math.nan, False, h_convex, False,
            reason="multiplier not indefinite (region empty or all of C)",
        )
    q0 = q_matrix(sys, theta, 0.0)
    tol = TOL_SCALE * (1.0 + float(np.linalg.norm(q0, 2)))
    worst, w_worst, ws = _adaptive_worst(ev, theta, base)
    ok = worst <= tol
    certified = indefinite and h_convex and ok
    reason = ""
    if not h_convex:
        reason = "region not hyperbolically convex (t11 < t22)"
    elif not ok:
        reason = f"certificate violated at omega={w_worst:.6g} (lambda={worst:.3e})"
    return ConicCertificate(
        theta, ws, worst, certified, h_convex, indefinite, tol=tol,
        violating_omega=None if ok else w_worst, reason=reason,
    )


def ellipse_theta(x0: float, a: float, b: float) -> ConicTheta:
    """Aligned multiplier of the ellipse (x - x0)^2/a^2 + y^2/b^2 <= 1.

    Tall ellipses (b >= a) give t11 >= t22.
    """
    if a <= 0 or b <= 0:
        raise ValueError("ellipse semi-axes must be positive")
    return ConicTheta(1.0 / a**2, 1.0 / b**2, -x0 / a**2, x0**2 / a**2 - 1.0)


@dataclass
class ConicFitResult:
    theta: ConicTheta
    certificate: ConicCertificate
    x0: float = math.nan
    a: float = math.nan
    b: float = math.nan

    @property
    def area(self) -> float:
        return region_area(ConicRegion(self.theta))

    def __iter__(self):
        yield self.theta
        yield self.certificate


AXIS_FLOOR = 1e-4  # tolerance floor for degenerate (point-like) SGs


def fit_conic(sys: StateSpace, grid=None, max_rounds: int = 8,
              rel_tol: float = 1e-4) -> ConicFitResult:
    """Area-minimizing certified tall ellipse, by coordinate descent.

    Searches ellipses (x - x0)^2/a^2 + y^2/b^2 <= 1 with b >= a (so the
    region passes the convexity gate) over (x0, a, b), using certify_conic as
    the feasibility oracle: width and height shrink by bisection, the center
    moves by golden section on the resulting area. Initialization comes from
    the sampled cloud's bounding box. If no ellipse certifies, the cloud's
    circumscribed disk is returned as a conic flagged ``disk_fallback``.
    """
    ev = QEvaluator(sys)
    base = grid if grid is not None else FrequencyGrid(count=200)

    def feasible(x0, a, b) -> bool:
        if not (AXIS_FLOOR <= a <= b):
            return False
        return certify_conic(sys, ellipse_theta(x0, a, b), grid=base,
                             evaluator=ev).certified

    cloud = sg_system_sample(sys, FrequencyGrid(count=120), n_dirs=24, seed=0)
    zs = cloud.zs[np.isfinite(cloud.zs)]
    x_lo, x_hi = float(zs.real.min()), float(zs.real.max())
    y_max = float(np.abs(zs.imag).max())
    x0 = 0.5 * (x_lo + x_hi)

    b = max(y_max, 0.5 * (x_hi - x_lo), AXIS_FLOOR) * 1.05
    grew = 0
    while not feasible(x0, b, b) and grew < 40:
        b *= 1.3
        grew += 1
    if grew >= 40:
        c0 = 0.5 * (x_lo + x_hi)
        r0 = float(np.abs(zs - c0).max()) * 1.001 + AXIS_FLOOR
        theta = ellipse_theta(c0, r0, r0)
        cert = certify_conic(sys, theta, grid=base, evaluator=ev)
        cert.disk_fallback = True
        return ConicFitResult(theta, cert, c0, r0, r0)
    a = b

    def shrink_a(x0_, b_, hi):
        if not feasible(x0_, min(hi, b_), b_):
            return None
        lo, hi = AXIS_FLOOR, min(hi, b_)
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if feasible(x0_, mid, b_):
                hi = mid
            else:
                lo = mid
        return hi

    def shrink_b(x0_, a_, hi):
        if feasible(x0_, a_, a_):
            return a_
        lo = a_
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if feasible(x0_, a_, mid):
                hi = mid
            else:
                lo = mid
        return hi

    def descend_at(x0_, a_init, b_init):
        a_, b_ = a_init, b_init
        a_new = shrink_a(x0_, b_, max(a_, b_))
        if a_new is None:
            return None
        a_ = a_new
        b_ = shrink_b(x0_, a_, b_)
        return a_, b_

    best = (a * b, x0, a, b)
    for _ in range(max_rounds):
        prev_area = best[0]
        res = descend_at(x0, a, b)
        if res is not None:
            a, b = res
            if a * b < best[0]:
                best = (a * b, x0, a, b)
        # golden scan of the center on the certified area
        span = 0.25 * (x_hi - x_lo) + 1e-6
        lo, hi = x0 - span, x0 + span
        gr = (math.sqrt(5.0) - 1.0) / 2.0

        def area_at(xx):
            r = descend_at(xx, a, max(b, a))
            if r is None:
                return math.inf, None
            return r[0] * r[1], r

        c1, c2 = hi - gr * (hi - lo), lo + gr * (hi - lo)
        f1, f2 = area_at(c1), area_at(c2)
        for _ in range(10):
            if f1[0] < f2[0]:
                hi, c2, f2 = c2, c1, f1
                c1 = hi - gr * (hi - lo)
                f1 = area_at(c1)
            else:
                lo, c1, f1 = c1, c2, f2
                c2 = lo + gr * (hi - lo)
                f2 = area_at(c2)
        cand, xx = (f1, c1) if f1[0] <= f2[0] else (f2, c2)
        if cand[1] is not None and cand[0] < best[0]:
            x0, (a, b) = float(xx), cand[1]
            best = (cand[0], x0, a, b)
        if prev_area - best[0] <= rel_tol * prev_area:
            break

    _, x0, a, b = best
    theta = ellipse_theta(x0, a, b)
    cert = certify_conic(sys, theta, grid=base, evaluator=ev)
    if not cert.certified:
        # bisection landed on the boundary: pad the certified side minimally
        for pad in (1e-9, 1e-7, 1e-5, 1e-4, 1e-3):
            theta = ellipse_theta(x0, a * (1 + pad), b * (1 + pad))
            cert = certify_conic(sys, theta, grid=base, evaluator=ev)
            if cert.certified:
                a, b = a * (1 + pad), b * (1 + pad)
                break
    return ConicFitResult(theta, cert, x0, a, b)
