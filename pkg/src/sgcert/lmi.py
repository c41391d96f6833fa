"""Circular containment certification via KYP-type semidefinite feasibility.

For a stable realization (A, B, C, D) and a 2x2 multiplier Pi, containment of
the system's SG in the multiplier region S(Pi) is certified by feasibility of

    [A B; I 0]^T [0 P; P 0] [A B; I 0] - rho(Pi) <= 0,   P = P^T,

with the outer factor rho(Pi) = [C D; 0 I]^T (Pi (x) I_n) [C D; 0 I]. The
soft form leaves P free; the hard form adds P >= 0. When Pi is
positive-negative, soft feasibility already certifies hard (truncated-signal)
containment, so the hard variant is solved only for benchmarking.

Feasibility problems are strictified with a small -eps*I slack and every
feasible verdict is re-verified by an eigenvalue check of the LMI residual,
independent of the solver backend.

Backends are pluggable through ``BACKENDS``; the default is a direct sparse
interface to SCS, with a cvxpy-based backend available for cross-checks.
The environment variable ``SG_CERTIFY_BACKEND`` overrides the default.
Backend invocations are serialized behind a module lock (the underlying
solvers are not guaranteed reentrant); assembly and verification run outside
the lock.
"""

from __future__ import annotations

import math
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np
import scipy.sparse as sp

from .lti import StateSpace, is_hurwitz
from .regions import (
    MultiplierPi,
    RegionGeom,
    is_positive_negative,
    pi_interior,
    region_of_multiplier,
)
from .sg import FrequencyGrid, sg_system_sample

__all__ = [
    "LmiProblem",
    "CertResult",
    "outer_factor",
    "assemble_lmi",
    "solve_feasibility",
    "certify_multiplier",
    "certify_circle",
    "fit_min_circle",
    "BACKENDS",
    "default_backend",
]

_BACKEND_LOCK = threading.Lock()

RESIDUAL_TOL = 1e-6  # scaled by (1 + ||rho||) in the witness check


def outer_factor(pi: MultiplierPi, sys: StateSpace) -> np.ndarray:
    """Outer factor rho(Pi) = [C D; 0 I]^T (Pi (x) I_n) [C D; 0 I]."""
    n = sys.n_io
    m = sys.n_states
    CD = np.block([
        [sys.C, sys.D],
        [np.zeros((n, m)), np.eye(n)],
    ])
    PiI = np.block([
        [pi.a * np.eye(n), pi.b * np.eye(n)],
        [pi.b * np.eye(n), pi.c * np.eye(n)],
    ])
    rho = CD.T @ PiI @ CD
    return (rho + rho.T) / 2.0


@dataclass
class LmiProblem:
    """Feasibility problem: find symmetric P with G(P) <= -eps_lmi * I,
    where G(P) = lhs_T^T P lhs_S + lhs_S^T P lhs_T - rho, optionally P >= 0."""

    lhs_T: np.ndarray
    lhs_S: np.ndarray
    rho: np.ndarray
    psd_constrained: bool = False
    eps_lmi: float = 0.0
    multiplier: Optional[MultiplierPi] = None
    _scs_cache: Optional[tuple] = field(default=None, repr=False, compare=False)
    _mint_cache: Optional[tuple] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.lhs_T = np.atleast_2d(np.asarray(self.lhs_T, dtype=float))
        self.lhs_S = np.atleast_2d(np.asarray(self.lhs_S, dtype=float))
        self.rho = np.atleast_2d(np.asarray(self.rho, dtype=float))
        m, N = self.lhs_T.shape
        if self.lhs_S.shape != (m, N) or self.rho.shape != (N, N):
            raise ValueError("inconsistent LMI block dimensions")

    @property
    def n_var(self) -> int:
        return self.lhs_T.shape[0]

    @property
    def lmi_dim(self) -> int:
        return self.lhs_T.shape[1]

    @property
    def scale(self) -> float:
        return 1.0 + float(np.linalg.norm(self.rho, 2))

    def residual(self, P: np.ndarray) -> np.ndarray:
        """G(P) matrix; feasibility means lambda_max(G(P)) <= 0."""
        P = np.atleast_2d(np.asarray(P, dtype=float))
        G = self.lhs_T.T @ P @ self.lhs_S + self.lhs_S.T @ P @ self.lhs_T - self.rho
        return (G + G.T) / 2.0

    def residual_lambda_max(self, P: np.ndarray) -> float:
        if self.lmi_dim == 0:
            return -math.inf
        return float(np.linalg.eigvalsh(self.residual(P))[-1])

    def scs_data(self):
        """Canonical (A, b, cones) data for SCS; cached after first assembly."""
        if self._scs_cache is None:
            self._scs_cache = _assemble_scs(self)
        return self._scs_cache

    def scs_margin_data(self):
        """Data for the margin form: min t s.t. G(P) <= t I (no slack).

        Decides boundary-grazing instances that the homogeneous feasibility
        form leaves inconclusive; the optimum bounds the feasibility margin.
        """
        if self._mint_cache is None:
            A, b, cones = _assemble_scs(self)
            N = self.lmi_dim
            Nt = N * (N + 1) // 2
            t_col = np.zeros(A.shape[0])
            t_col[:Nt] = -_svec(np.eye(N))
            A_t = sp.hstack([A, sp.csc_matrix(t_col[:, None])], format="csc")
            b_t = b.copy()
            b_t[:Nt] += _svec(self.eps_lmi * np.eye(N))  # undo the slack
            self._mint_cache = (A_t, b_t, cones)
        return self._mint_cache


def assemble_lmi(sys: StateSpace, pi: MultiplierPi, hard: bool = False,
                 eps_lmi: Optional[float] = None) -> LmiProblem:
    """KYP-type feasibility problem for SG containment in S(Pi).

    ``hard=True`` adds the P >= 0 cone. The feasibility slack defaults to
    1e-8 * (1 + ||rho||).
    """
    hw = is_hurwitz(sys)
    if not hw.stable:
        raise ValueError(
            f"LMI assembly requires a stable system (spectral abscissa {hw.abscissa:.4g})"
        )
    m = sys.n_states
    rho = outer_factor(pi, sys)
    T = np.hstack([sys.A, sys.B])
    S = np.hstack([np.eye(m), np.zeros((m, sys.n_io))])
    prob = LmiProblem(T, S, rho, psd_constrained=hard, multiplier=pi)
    prob.eps_lmi = 1e-8 * prob.scale if eps_lmi is None else eps_lmi
    return prob


# --- svec helpers (SCS lower-triangular column-stacked convention) -----------


def _tril_ij(k: int):
    j = np.repeat(np.arange(k), np.arange(k, 0, -1))
    i = np.concatenate([np.arange(jj, k) for jj in range(k)]) if k else np.empty(0, int)
    return i, j


def _svec(M: np.ndarray) -> np.ndarray:
    k = M.shape[0]
    i, j = _tril_ij(k)
    v = M[i, j].astype(float).copy()
    v[i != j] *= math.sqrt(2.0)
    return v


def _svec_to_mat(v: np.ndarray, k: int) -> np.ndarray:
    i, j = _tril_ij(k)
    vals = v.copy()
    vals[i != j] /= math.sqrt(2.0)
    M = np.zeros((k, k))
    M[i, j] = vals
    M[j, i] = vals
    return M


def _params_to_mat(p: np.ndarray, k: int) -> np.ndarray:
    """Symmetric matrix from the raw lower-triangular variable vector."""
    i, j = _tril_ij(k)
    M = np.zeros((k, k))
    M[i, j] = p
    M[j, i] = p
    return M


def _assemble_scs(prob: LmiProblem):
    """Sparse SCS data for the strictified feasibility problem."""
    m, N = prob.lhs_T.shape
    mp = m * (m + 1) // 2
    Nt = N * (N + 1) // 2

    # vec(P) = Dup @ p for the lower-triangular parameter vector p
    i, j = _tril_ij(m)
    cols = np.arange(mp)
    rows1 = i + j * m
    rows2 = j + i * m
    off = i != j
    Dup = sp.csc_matrix(
        (np.ones(mp + off.sum()),
         (np.concatenate([rows1, rows2[off]]), np.concatenate([cols, cols[off]]))),
        shape=(m * m, mp),
    )

    # vec(G + rho) = (S^T (x) T^T + T^T (x) S^T) vec(P)  [column-major vec]
    Ts = sp.csc_matrix(prob.lhs_T)
    Ss = sp.csc_matrix(prob.lhs_S)
    K = sp.kron(Ss.T, Ts.T) + sp.kron(Ts.T, Ss.T)

    # svec selector with sqrt(2) off-diagonal scaling
    I, J = _tril_ij(N)
    scalev = np.where(I == J, 1.0, math.sqrt(2.0))
    Sel = sp.csc_matrix((scalev, (np.arange(Nt), I + J * N)), shape=(Nt, N * N))

    A_lmi = (Sel @ K @ Dup).tocsc()
    b_lmi = _svec(prob.rho - prob.eps_lmi * np.eye(N))
    cones = {"s": [N]}
    if prob.psd_constrained:
        ip, jp = _tril_ij(m)
        diag = np.where(ip == jp, 1.0, math.sqrt(2.0))
        A_psd = sp.diags(-diag, format="csc", shape=(mp, mp))
        A_full = sp.vstack([A_lmi, A_psd], format="csc")
        b_full = np.concatenate([b_lmi, np.zeros(mp)])
        cones = {"s": [N, m]}
        return A_full, b_full, cones
    return A_lmi, b_lmi, cones


# --- backends -----------------------------------------------------------------


class BackendResult(NamedTuple):
    status: str  # 'feasible' | 'infeasible' | 'unknown'
    P: Optional[np.ndarray]
    info: dict


def _solve_scs(prob: LmiProblem, options: dict) -> BackendResult:
    """Two-phase SCS solve.

    Phase 1 runs the homogeneous feasibility form with a capped iteration
    budget (it converges in tens of iterations on clearly feasible problems
    of any size, and certifies clear infeasibility quickly). Instances near
    the feasibility boundary leave it inconclusive; phase 2 then solves the
    bounded margin form min t s.t. G(P) <= t I, whose optimum decides the
    verdict with an explicit margin.
    """
    import scs

    A, b, cones = prob.scs_data()
    m = prob.n_var
    mp = m * (m + 1) // 2
    eps = options.get("eps", 1e-7)
    settings = dict(
        eps_abs=eps, eps_rel=eps,
        eps_infeas=options.get("eps_infeas", 1e-9),
        max_iters=int(options.get("max_iters", 10_000)),
        time_limit_secs=float(options.get("time_limit", 120.0)),
        verbose=bool(options.get("verbose", False)),
    )
    sol = scs.SCS({"A": A, "b": b, "c": np.zeros(mp)}, cones, **settings).solve()
    status = sol["info"]["status"].lower()
    info = {
        "solver_status": sol["info"]["status"],
        "iterations": sol["info"]["iter"],
        "solve_time_ms": sol["info"]["solve_time"] + sol["info"]["setup_time"],
    }
    if "inaccurate" not in status:
        if status == "solved":
            return BackendResult("feasible", _params_to_mat(sol["x"], m), info)
        if "infeasible" in status:
            return BackendResult("infeasible", None, info)
    if not options.get("margin_fallback", True):
        return BackendResult("unknown", None, info)

    A_t, b_t, cones_t = prob.scs_margin_data()
    c_t = np.zeros(mp + 1)
    c_t[mp] = 1.0
    settings["max_iters"] = int(options.get("max_iters_margin", 200_000))
    sol = scs.SCS({"A": A_t, "b": b_t, "c": c_t}, cones_t, **settings).solve()
    status = sol["info"]["status"].lower()
    info = {
        "solver_status": f"margin: {sol['info']['status']}",
        "iterations": sol["info"]["iter"],
        "solve_time_ms": info["solve_time_ms"] + sol["info"]["solve_time"]
        + sol["info"]["setup_time"],
    }
    if "solved" not in status or "inaccurate" in status:
        return BackendResult("unknown", None, info)
    t_star = float(sol["x"][mp])
    info["feasibility_margin"] = -t_star
    decide = max(10.0 * eps, 1e-9) * prob.scale
    if t_star <= decide:
        # candidate witness; final word belongs to the residual check
        return BackendResult("feasible", _params_to_mat(sol["x"][:mp], m), info)
    return BackendResult("infeasible", None, info)


def _solve_cvxpy(prob: LmiProblem, options: dict) -> BackendResult:
    import cvxpy as cp

    m, N = prob.lhs_T.shape
    P = cp.Variable((m, m), symmetric=True)
    G = (prob.lhs_T.T @ P @ prob.lhs_S + prob.lhs_S.T @ P @ prob.lhs_T
         - prob.rho + prob.eps_lmi * np.eye(N))
    constraints = [G << 0]
    if prob.psd_constrained:
        constraints.append(P >> 0)
    problem = cp.Problem(cp.Minimize(0), constraints)
    solver = options.get("cvxpy_solver", "CLARABEL")
    try:
        problem.solve(solver=solver, verbose=bool(options.get("verbose", False)))
    except cp.error.SolverError as exc:
        return BackendResult("unknown", None, {"solver_status": f"error: {exc}"})
    info = {"solver_status": problem.status}
    if problem.status in ("optimal", "optimal_inaccurate") and P.value is not None:
        return BackendResult("feasible", np.asarray(P.value), info)
    if problem.status in ("infeasible", "infeasible_inaccurate"):
        return BackendResult("infeasible", None, info)
    return BackendResult("unknown", None, info)


BACKENDS: dict[str, Callable[[LmiProblem, dict], BackendResult]] = {
    "scs": _solve_scs,
    "cvxpy": _solve_cvxpy,
}


def default_backend() -> str:
    return os.environ.get("SG_CERTIFY_BACKEND", "scs")


@dataclass
class CertResult:
    """Outcome of one containment certification."""

    feasible: bool
    P: Optional[np.ndarray]
    multiplier: Optional[MultiplierPi]
    region: Optional[RegionGeom]
    hard_containment: bool
    diagnostics: dict


def solve_feasibility(prob: LmiProblem, backend: Optional[str] = None,
                      **options) -> CertResult:
    """Solve the feasibility problem and independently verify any witness.

    A 'feasible' verdict requires the returned P to pass the eigenvalue
    residual check lambda_max(G(P)) <= 1e-6 * scale; if the backend's witness
    fails, the solve is retried once at tighter tolerance before the result
    degrades to status 'unknown'. Infeasibility is reported as feasible=False
    with status 'infeasible' (not an error); solver breakdowns yield status
    'unknown'.
    """
    name = backend or default_backend()
    try:
        run = BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {', '.join(sorted(BACKENDS))}"
        ) from None

    m = prob.n_var
    diagnostics: dict = {"backend": name}
    if m == 0:
        # no variable: the LMI is a constant-matrix sign condition
        lam = prob.residual_lambda_max(np.zeros((0, 0)))
        feasible = lam <= RESIDUAL_TOL * prob.scale
        diagnostics.update(solver_status="closed_form", residual_lambda_max=lam,
                           wall_ms=0.0)
        return _finish(prob, feasible, np.zeros((0, 0)) if feasible else None,
                       "feasible" if feasible else "infeasible", diagnostics)

    tol = RESIDUAL_TOL * prob.scale
    attempt_options = dict(options)
    for attempt in range(2):
        t0 = time.perf_counter()
        with _BACKEND_LOCK:
            result = run(prob, attempt_options)
        wall_ms = (time.perf_counter() - t0) * 1e3
        diagnostics.update(result.info)
        diagnostics["wall_ms"] = wall_ms
        diagnostics["attempts"] = attempt + 1
        if result.status == "infeasible":
            return _finish(prob, False, None, "infeasible", diagnostics)
        if result.status == "feasible":
            lam = prob.residual_lambda_max(result.P)
            diagnostics["residual_lambda_max"] = lam
            if lam <= tol:
                return _finish(prob, True, result.P, "feasible", diagnostics)
            # witness too sloppy: retry once, tighter
            attempt_options = dict(options)
            attempt_options["eps"] = min(options.get("eps", 1e-7), 1e-7) / 100.0
        else:
            break
    return _finish(prob, False, None, "unknown", diagnostics)


def _finish(prob, feasible, P, status, diagnostics) -> CertResult:
    diagnostics["status"] = status
    pi = prob.multiplier
    return CertResult(
        feasible=feasible,
        P=P,
        multiplier=pi,
        region=region_of_multiplier(pi) if pi is not None else None,
        hard_containment=bool(feasible and pi is not None
                              and is_positive_negative(pi)),
        diagnostics=diagnostics,
    )


def certify_multiplier(sys: StateSpace, pi: MultiplierPi,
                       backend: Optional[str] = None, **options) -> CertResult:
    """Soft containment certificate SG(sys) in S(Pi) via the free-P LMI.

    When Pi is positive-negative, a feasible verdict also certifies
    containment of the truncated-signal SG (``hard_containment=True``); the
    P >= 0 variant is never solved on this path.
    """
    prob = assemble_lmi(sys, pi, hard=False)
    return solve_feasibility(prob, backend=backend, **options)


def certify_circle(sys: StateSpace, c: float, r: float,
                   backend: Optional[str] = None, **options) -> CertResult:
    """Certify SG containment in the disk of center c and radius r > 0."""
    if r <= 0:
        raise ValueError("radius must be positive")
    return certify_multiplier(sys, pi_interior(c, r), backend=backend, **options)


class MinCircleResult(NamedTuple):
    center: float
    radius: float
    certificate: CertResult


def fit_min_circle(sys: StateSpace, centers=None, r_tol: float = 1e-3,
                   backend: Optional[str] = None, **options) -> MinCircleResult:
    """Smallest certifiable disk found by center search plus radius bisection.

    Centers default to a coarse grid over the sampled cloud's real extent,
    refined by golden section; the radius at each center is bisected against
    certify_circle feasibility down to ``r_tol``. The returned (c, r) is
    always certified.
    """
    hw = is_hurwitz(sys)
    if not hw.stable:
        raise ValueError("fit_min_circle requires a stable system")
    cloud = sg_system_sample(sys, FrequencyGrid(count=120), n_dirs=24, seed=0)
    zs = cloud.zs[np.isfinite(cloud.zs)]
    x_lo, x_hi = float(zs.real.min()), float(zs.real.max())
    if centers is None:
        centers = np.linspace(x_lo, x_hi, 13) if x_hi > x_lo else [x_lo]
    centers = np.asarray(centers, dtype=float)

    r_max = float(np.max(np.abs(zs[:, None] - centers[None, :]))) + 1.0

    def rmin(c: float) -> float:
        lo = 0.0
        hi = float(np.max(np.abs(zs - c))) + max(r_tol, 1e-6)
        while not certify_circle(sys, c, hi, backend=backend, **options).feasible:
            hi *= 1.5
            if hi > 4.0 * r_max:
                return math.inf
        while hi - lo > r_tol:
            mid = 0.5 * (lo + hi)
            if mid <= 0:
                break
            if certify_circle(sys, c, mid, backend=backend, **options).feasible:
                hi = mid
            else:
                lo = mid
        return hi

    vals = [rmin(c) for c in centers]
    k = int(np.argmin(vals))
    best_c, best_r = float(centers[k]), vals[k]
    if len(centers) > 1:
        lo = float(centers[max(0, k - 1)])
        hi = float(centers[min(len(centers) - 1, k + 1)])
        gr = (math.sqrt(5.0) - 1.0) / 2.0
        c1, c2 = hi - gr * (hi - lo), lo + gr * (hi - lo)
        f1, f2 = rmin(c1), rmin(c2)
        for _ in range(20):
            if f1 < f2:
                hi, c2, f2 = c2, c1, f1
                c1 = hi - gr * (hi - lo)
                f1 = rmin(c1)
            else:
                lo, c1, f1 = c1, c2, f2
                c2 = lo + gr * (hi - lo)
                f2 = rmin(c2)
        for cc, ff in ((c1, f1), (c2, f2)):
            if ff < best_r:
                best_c, best_r = float(cc), float(ff)
    if not math.isfinite(best_r):
        raise RuntimeError("no feasible disk found within the search bounds")
    cert = certify_circle(sys, best_c, best_r, backend=backend, **options)
    if not cert.feasible:
        # boundary jitter: pad by one tolerance step
        best_r += r_tol
        cert = certify_circle(sys, best_c, best_r, backend=backend, **options)
    return MinCircleResult(best_c, best_r, cert)
