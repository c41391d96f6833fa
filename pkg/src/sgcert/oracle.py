"""Time-domain Monte-Carlo validation of containment certificates.

Simulation is exact zero-order-hold discretization (matrix exponential of the
augmented [[A, B], [0, 0]] block), advanced from zero initial state, so
piecewise-constant inputs are reproduced exactly at the sample instants.
Truncated gain-phase points and quadratic-constraint integrals are evaluated
by trapezoidal quadrature on the simulation grid, which keeps the oracle
solver-free and matched to the sampling.

Trials draw inputs from four classes (filtered white noise, steps, sums of
sinusoids, chirps) and truncation horizons uniformly over the simulated
window; per-trial seeds are split from a master seed, so results are
reproducible and independent of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import expm

from .lmi import CertResult, certify_multiplier
from .lti import StateSpace, is_hurwitz
from .regions import MultiplierPi, is_positive_negative, j_spectral_factor

__all__ = [
    "SampledSignal",
    "DiscreteSim",
    "HardSamplePoint",
    "EquivalenceReport",
    "discretize",
    "simulate",
    "default_dt",
    "default_horizon",
    "sample_hard_sg",
    "iqc_quadrature",
    "factorization_identity_check",
    "equivalence_trial",
    "INPUT_CLASSES",
]


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled vector signal: values (n_channels, n_samples) at step dt."""

    values: np.ndarray
    dt: float

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.values, dtype=float))
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]

    @property
    def horizon(self) -> float:
        return (self.n_samples - 1) * self.dt


@dataclass(frozen=True)
class DiscreteSim:
    """Exact zero-order-hold discretization of a continuous realization."""

    Ad: np.ndarray
    Bd: np.ndarray
    C: np.ndarray
    D: np.ndarray
    dt: float


@dataclass(frozen=True)
class HardSamplePoint:
    """Truncated gain-phase point rho_T * exp(+-j theta_T)."""

    z: complex
    T: float
    input_id: int
    input_class: str = ""


def _timescales(sys: StateSpace):
    if sys.n_states == 0:
        return 0.0, 0.0
    eigs = np.linalg.eigvals(sys.A)
    return float(np.abs(eigs).max()), float(np.abs(np.real(eigs)).min())


def default_dt(sys: StateSpace) -> float:
    """0.02 / |fastest pole|, or 0.01 for pole-free / marginal systems."""
    fastest, _ = _timescales(sys)
    return 0.02 / fastest if fastest > 0 else 0.01


def default_horizon(sys: StateSpace) -> float:
    """30 / |slowest pole| for stable systems; explicit horizon otherwise."""
    hw = is_hurwitz(sys)
    if not hw.stable:
        raise ValueError("default horizon requires a stable system; pass one")
    if sys.n_states == 0:
        return 10.0
    _, slowest = _timescales(sys)
    return 30.0 / slowest if slowest > 0 else 10.0


def discretize(sys: StateSpace, dt: float) -> DiscreteSim:
    """ZOH discretization via the augmented-matrix exponential."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    m, n = sys.n_states, sys.n_io
    if m == 0:
        return DiscreteSim(np.zeros((0, 0)), np.zeros((0, n)), sys.C, sys.D, dt)
    Maug = np.zeros((m + n, m + n))
    Maug[:m, :m] = sys.A
    Maug[:m, m:] = sys.B
    E = expm(Maug * dt)
    return DiscreteSim(E[:m, :m], E[:m, m:], sys.C, sys.D, dt)


def _check_dt(sys: StateSpace, dt: float) -> None:
    fastest, _ = _timescales(sys)
    if fastest > 0 and dt > 0.1 / fastest:
        raise ValueError(
            f"dt={dt:.3g} too coarse for fastest pole magnitude {fastest:.3g}; "
            f"use dt <= {0.1 / fastest:.3g} (default {0.02 / fastest:.3g})"
        )


def simulate(sys: StateSpace, u, dt: Optional[float] = None) -> np.ndarray:
    """Response to a sampled input from zero initial state.

    ``u`` may be a SampledSignal (its dt wins) or an array of shape
    (n_channels, n_samples) or (n_samples,) for single-input systems. Exact
    at the sample instants for piecewise-constant inputs.
    """
    if isinstance(u, SampledSignal):
        dt = u.dt
        U = u.values
    else:
        if dt is None:
            raise ValueError("dt required when u is a bare array")
        U = np.atleast_2d(np.asarray(u, dtype=float))
    if dt <= 0:
        raise ValueError("dt must be positive")
    _check_dt(sys, dt)
    Y = _simulate_batch(discretize(sys, dt), U[None, :, :])[0]
    if isinstance(u, SampledSignal) or np.asarray(u).ndim > 1:
        return Y
    return Y[0]


def _simulate_batch(d: DiscreteSim, U: np.ndarray) -> np.ndarray:
    """Simulate R trials at once; U has shape (R, n, K)."""
    R, n, K = U.shape
    m = d.Ad.shape[0]
    Y = np.empty_like(U)
    X = np.zeros((m, R))
    for k in range(K):
        uk = U[:, :, k].T  # (n, R)
        Y[:, :, k] = (d.C @ X + d.D @ uk).T
        X = d.Ad @ X + d.Bd @ uk
    return Y


def _cumtrapz(f: np.ndarray, dt: float) -> np.ndarray:
    """Cumulative trapezoid along the last axis, starting at 0."""
    inner = 0.5 * (f[..., 1:] + f[..., :-1])
    out = np.zeros_like(f)
    np.cumsum(inner, axis=-1, out=out[..., 1:])
    return out * dt


# --- input classes -------------------------------------------------------------


def _input_noise(rng, n, K, dt):
    x = rng.standard_normal((n, K))
    alpha = rng.uniform(0.05, 0.6)
    y = np.empty_like(x)
    acc = np.zeros(n)
    for k in range(K):
        acc += alpha * (x[:, k] - acc)
        y[:, k] = acc
    return y * rng.uniform(0.5, 2.0)


def _input_step(rng, n, K, dt):
    u = np.zeros((n, K))
    for ch in range(n):
        start = rng.integers(0, max(1, K // 2))
        u[ch, start:] = rng.uniform(-2.0, 2.0)
    return u


def _input_sine(rng, n, K, dt):
    t = np.arange(K) * dt
    w_hi = math.pi / dt / 4.0
    u = np.zeros((n, K))
    for ch in range(n):
        for _ in range(rng.integers(1, 5)):
            w = math.exp(rng.uniform(math.log(max(w_hi * 1e-4, 1e-3)),
                                     math.log(w_hi)))
            u[ch] += rng.uniform(0.2, 1.5) * np.sin(w * t + rng.uniform(0, 2 * math.pi))
    return u


def _input_chirp(rng, n, K, dt):
    t = np.arange(K) * dt
    w_hi = math.pi / dt / 4.0
    u = np.zeros((n, K))
    for ch in range(n):
        w0 = rng.uniform(0.0, w_hi / 8.0)
        w1 = rng.uniform(w0, w_hi / 2.0)
        horizon = t[-1] if t[-1] > 0 else 1.0
        phase = w0 * t + 0.5 * (w1 - w0) / horizon * t * t
        u[ch] = rng.uniform(0.3, 1.5) * np.sin(phase + rng.uniform(0, 2 * math.pi))
    return u


INPUT_CLASSES = {
    "noise": _input_noise,
    "step": _input_step,
    "sine": _input_sine,
    "chirp": _input_chirp,
}


@dataclass
class _TrialBatch:
    """Per-trial truncated integrals for one batch of simulated trials."""

    uu: np.ndarray      # input energy at the truncation index
    yy: np.ndarray
    uy: np.ndarray
    T: np.ndarray
    classes: list


def _run_trials(sys: StateSpace, n_trials: int, seed: int,
                input_classes: Optional[Sequence[str]], dt: Optional[float],
                horizon: Optional[float], batch: int = 256):
    """Simulate trials in batches; yields (_TrialBatch, trial offset)."""
    names = list(input_classes) if input_classes else list(INPUT_CLASSES)
    for name in names:
        if name not in INPUT_CLASSES:
            raise ValueError(f"unknown input class {name!r}; "
                             f"known: {', '.join(INPUT_CLASSES)}")
    if dt is None:
        dt = default_dt(sys)
    _check_dt(sys, dt)
    if horizon is None:
        horizon = default_horizon(sys)
    K = max(8, int(round(horizon / dt)) + 1)
    n = sys.n_io
    d = discretize(sys, dt)
    master = np.random.default_rng(seed)
    done = 0
    while done < n_trials:
        R = min(batch, n_trials - done)
        U = np.empty((R, n, K))
        classes = []
        Ts = np.empty(R)
        for r in range(R):
            rng = np.random.default_rng(master.integers(2**63))
            name = names[rng.integers(len(names))]
            classes.append(name)
            U[r] = INPUT_CLASSES[name](rng, n, K, dt)
            Ts[r] = rng.uniform(dt, (K - 1) * dt)
        Y = _simulate_batch(d, U)
        uu = _cumtrapz(np.einsum("rck,rck->rk", U, U), dt)
        yy = _cumtrapz(np.einsum("rck,rck->rk", Y, Y), dt)
        uy = _cumtrapz(np.einsum("rck,rck->rk", U, Y), dt)
        idx = np.clip(np.round(Ts / dt).astype(int), 1, K - 1)
        rows = np.arange(R)
        yield _TrialBatch(uu[rows, idx], yy[rows, idx], uy[rows, idx],
                          idx * dt, classes), done
        done += R


def sample_hard_sg(sys: StateSpace, n_trials: int, seed: int = 0,
                   input_classes: Optional[Sequence[str]] = None,
                   dt: Optional[float] = None,
                   horizon: Optional[float] = None):
    """Monte-Carlo truncated gain-phase points.

    Each trial draws an input class, an input realization, and a truncation
    horizon, then emits the conjugate pair rho_T exp(+-j theta_T). Trials
    with input energy below 1e-12 are skipped (the count is returned).
    Stability is not required, matching the extended-signal setting; callers
    comparing against soft regions must pass a stable system.
    """
    points = []
    skipped = 0
    for tb, offset in _run_trials(sys, n_trials, seed, input_classes, dt, horizon):
        for r in range(len(tb.T)):
            ue, ye, ip = tb.uu[r], tb.yy[r], tb.uy[r]
            if ue < 1e-12:
                skipped += 1
                continue
            rho = math.sqrt(max(ye, 0.0) / ue)
            if ye <= 0.0:
                theta = 0.0
            else:
                theta = math.acos(min(1.0, max(-1.0, ip / math.sqrt(ue * ye))))
            z = rho * complex(math.cos(theta), math.sin(theta))
            tid = offset + r
            points.append(HardSamplePoint(z, float(tb.T[r]), tid, tb.classes[r]))
            points.append(HardSamplePoint(z.conjugate(), float(tb.T[r]), tid,
                                          tb.classes[r]))
    return points, skipped


def iqc_quadrature(sys: StateSpace, pi: MultiplierPi, u: SampledSignal,
                   T: float) -> float:
    """Trapezoidal value of the quadratic constraint integral on [0, T].

    Integrand: a y'y + 2b y'u + c u'u with y the simulated response. T snaps
    to the nearest simulation grid point and must lie within the simulated
    horizon.
    """
    if T < 0 or T > u.horizon * (1 + 1e-12):
        raise ValueError(f"truncation T={T} outside simulated horizon {u.horizon}")
    y = simulate(sys, u)
    k = int(round(T / u.dt))
    U, Y = u.values, y
    integrand = (pi.a * np.einsum("ck,ck->k", Y, Y)
                 + 2.0 * pi.b * np.einsum("ck,ck->k", Y, U)
                 + pi.c * np.einsum("ck,ck->k", U, U))
    return float(_cumtrapz(integrand[None, :], u.dt)[0, k])


def factorization_identity_check(pi: MultiplierPi, sys: StateSpace,
                                 u: SampledSignal, T: float) -> float:
    """Residual of the pointwise factorization identity under quadrature.

    Both sides are integrated with the same trapezoid rule:
    the multiplier form a y'y + 2b y'u + c u'u and z' J z with
    z = (Psi (x) I)[y; u], Psi the closed-form factor of ``pi``. Returns the
    absolute difference, which should be at rounding level
    (<= 1e-9 * (1 + |lhs|)).
    """
    if not is_positive_negative(pi):
        raise ValueError("identity check requires a positive-negative multiplier")
    factor = j_spectral_factor(pi)
    y = simulate(sys, u)
    k = int(round(min(T, u.horizon) / u.dt))
    U, Y = u.values, y
    lhs_int = (pi.a * np.einsum("ck,ck->k", Y, Y)
               + 2.0 * pi.b * np.einsum("ck,ck->k", Y, U)
               + pi.c * np.einsum("ck,ck->k", U, U))
    p = factor.psi
    z1 = p[0, 0] * Y + p[0, 1] * U
    z2 = p[1, 0] * Y + p[1, 1] * U
    rhs_int = np.einsum("ck,ck->k", z1, z1) - np.einsum("ck,ck->k", z2, z2)
    lhs = float(_cumtrapz(lhs_int[None, :], u.dt)[0, k])
    rhs = float(_cumtrapz(rhs_int[None, :], u.dt)[0, k])
    return abs(lhs - rhs)


def trial_log(sys: StateSpace, pi: MultiplierPi, n_trials: int, seed: int = 0,
              dt: Optional[float] = None, horizon: Optional[float] = None):
    """Per-trial rows (trial_id, input_class, T, z, iqc_value) for CSV export."""
    rows = []
    for tb, offset in _run_trials(sys, n_trials, seed, None, dt, horizon):
        iqc = pi.a * tb.yy + 2.0 * pi.b * tb.uy + pi.c * tb.uu
        for r in range(len(tb.T)):
            ue, ye, ip = tb.uu[r], tb.yy[r], tb.uy[r]
            if ue < 1e-12:
                continue
            rho = math.sqrt(max(ye, 0.0) / ue)
            theta = 0.0 if ye <= 0 else math.acos(
                min(1.0, max(-1.0, ip / math.sqrt(ue * ye))))
            z = rho * complex(math.cos(theta), math.sin(theta))
            rows.append((offset + r, tb.classes[r], float(tb.T[r]), z,
                         float(iqc[r])))
    return rows


@dataclass
class EquivalenceReport:
    certified: bool
    n_trials: int
    min_normalized_iqc: float
    violations: int
    tol: float
    counterexample: Optional[dict] = None
    certificate: Optional[CertResult] = None

    @property
    def passed(self) -> bool:
        return self.certified and self.violations == 0

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "certified": self.certified,
            "n_trials": self.n_trials,
            "min_normalized_iqc": self.min_normalized_iqc,
            "violations": self.violations,
            "tol": self.tol,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


def equivalence_trial(sys: StateSpace, pi: MultiplierPi, n_trials: int,
                      seed: int = 0, tol: float = 1e-6,
                      dt: Optional[float] = None,
                      horizon: Optional[float] = None,
                      backend: Optional[str] = None) -> EquivalenceReport:
    """Empirical truncated-constraint check behind a soft containment certificate.

    Certifies soft containment by the free-P LMI, then evaluates the
    truncated quadratic constraint on ``n_trials`` random (input, horizon)
    draws: if containment holds and the multiplier is positive-negative, no
    normalized value may fall below -tol. Any violation is reported with its
    trial provenance; with a certified multiplier it would indicate an
    implementation fault, and with an uncertified one it demonstrates
    detector sensitivity.
    """
    hw = is_hurwitz(sys)
    if not hw.stable:
        raise ValueError("equivalence trials require a stable system")
    if not is_positive_negative(pi):
        raise ValueError("equivalence trials require a positive-negative multiplier")
    cert = certify_multiplier(sys, pi, backend=backend)
    min_norm = math.inf
    violations = 0
    counterexample = None
    for tb, offset in _run_trials(sys, n_trials, seed, None, dt, horizon):
        energy = np.maximum(tb.uu, 1e-12)
        vals = (pi.a * tb.yy + 2.0 * pi.b * tb.uy + pi.c * tb.uu) / energy
        k = int(np.argmin(vals))
        if vals[k] < min_norm:
            min_norm = float(vals[k])
        bad = vals < -tol
        if np.any(bad):
            violations += int(bad.sum())
            if counterexample is None:
                j = int(np.argmin(vals))
                counterexample = {
                    "trial": offset + j,
                    "input_class": tb.classes[j],
                    "T": float(tb.T[j]),
                    "normalized_iqc": float(vals[j]),
                }
    return EquivalenceReport(
        certified=cert.hard_containment,
        n_trials=n_trials,
        min_normalized_iqc=min_norm,
        violations=violations,
        tol=tol,
        counterexample=counterexample,
        certificate=cert,
    )
