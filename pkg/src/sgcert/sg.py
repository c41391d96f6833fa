"""Scaled-graph point clouds of LTI systems.

A scaled-graph (SG) point is a gain-phase pair rho * exp(+-j theta) produced
by an input/output pair; for an LTI system the full SG is the hyperbolically
convex hull of the per-frequency SGs, so clouds are sampled frequency by
frequency over input directions. Clouds are closed under conjugation by
construction.

Per-frequency sampling of an n x n response matrix M uses the quadratic-form
identities rho^2 = u* M* M u / ||u||^2 and Re z = u* Hs u / ||u||^2 with Hs
the Hermitian part of M.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .lti import StateSpace, freq_response, hermitian_part, is_hurwitz
from .regions import bk_map

__all__ = [
    "GainPhasePoint",
    "SgCloud",
    "FrequencyGrid",
    "gain_phase",
    "sg_matrix_sample",
    "sg_system_sample",
    "invert_cloud",
    "cloud_distance",
    "cloud_diameter",
    "h_convex_hull",
    "export_csv",
    "import_csv",
]


@dataclass(frozen=True)
class GainPhasePoint:
    """One SG point: complex gain-phase value with sampling provenance."""

    z: complex
    omega: float = math.nan
    direction_index: int = 0


@dataclass(frozen=True)
class SgCloud:
    """Sampled SG points. ``omegas`` may contain inf (the frequency sentinel)
    or nan (points not tagged with a frequency)."""

    zs: np.ndarray
    omegas: np.ndarray
    dir_idx: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        zs = np.asarray(self.zs, dtype=complex).ravel()
        omegas = np.asarray(self.omegas, dtype=float).ravel()
        dir_idx = np.asarray(self.dir_idx, dtype=int).ravel()
        if not (len(zs) == len(omegas) == len(dir_idx)):
            raise ValueError("cloud arrays must have equal length")
        for arr, name in ((zs, "zs"), (omegas, "omegas"), (dir_idx, "dir_idx")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.zs)

    def point(self, i: int) -> GainPhasePoint:
        return GainPhasePoint(complex(self.zs[i]), float(self.omegas[i]),
                              int(self.dir_idx[i]))

    @property
    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.zs)

    @property
    def has_infinity(self) -> bool:
        return bool(np.any(~np.isfinite(self.zs)))

    def is_conjugate_closed(self, tol: float = 1e-12) -> bool:
        finite = self.zs[self.finite_mask]
        if finite.size == 0:
            return True
        tree = cKDTree(np.column_stack([finite.real, finite.imag]))
        d, _ = tree.query(np.column_stack([finite.real, -finite.imag]))
        return bool(np.max(d) <= tol * (1.0 + np.abs(finite).max()))


@dataclass(frozen=True)
class FrequencyGrid:
    """Log-spaced frequency grid with optional 0 and inf endpoints."""

    wmin: float = 1e-3
    wmax: float = 1e4
    count: int = 400
    include_zero: bool = True
    include_inf: bool = True

    def omegas(self) -> np.ndarray:
        ws = np.logspace(math.log10(self.wmin), math.log10(self.wmax), self.count)
        parts = []
        if self.include_zero:
            parts.append([0.0])
        parts.append(ws)
        if self.include_inf:
            parts.append([math.inf])
        return np.concatenate(parts)


def _as_omegas(grid) -> np.ndarray:
    if grid is None:
        return FrequencyGrid().omegas()
    if isinstance(grid, FrequencyGrid):
        return grid.omegas()
    return np.asarray(grid, dtype=float).ravel()


def gain_phase(u_energy: float, y_energy: float, inner: float):
    """Gain-phase pair rho * exp(+-j theta) from signal energies.

    rho = sqrt(y_energy / u_energy); theta = arccos(inner / sqrt(u_energy *
    y_energy)), defined as 0 when the output is zero. The inner product must
    satisfy Cauchy-Schwarz up to a 1e-12 relative slack (it is then clamped).
    """
    if u_energy <= 0.0:
        raise ValueError("SG undefined for zero input")
    if y_energy < 0.0:
        raise ValueError("negative output energy")
    rho = math.sqrt(y_energy / u_energy)
    if y_energy == 0.0:
        theta = 0.0
    else:
        bound = math.sqrt(u_energy * y_energy)
        if abs(inner) > bound * (1.0 + 1e-12):
            raise ValueError(
                f"inner product {inner} violates Cauchy-Schwarz bound {bound}"
            )
        theta = math.acos(min(1.0, max(-1.0, inner / bound)))
    z = rho * complex(math.cos(theta), math.sin(theta))
    return GainPhasePoint(z), GainPhasePoint(z.conjugate())


def _direction_set(n: int, n_dirs: int, rng: np.random.Generator) -> np.ndarray:
    """Structured directions (basis + pairwise phase combinations) plus
    seeded uniform random directions, as columns."""
    cols = [np.eye(n, dtype=complex)]
    for k in range(n):
        for l in range(k + 1, n):
            for ph in (1.0, 1.0j, -1.0, -1.0j):
                u = np.zeros((n, 1), dtype=complex)
                u[k, 0] = 1.0
                u[l, 0] = ph
                cols.append(u)
    z = rng.standard_normal((n, n_dirs)) + 1j * rng.standard_normal((n, n_dirs))
    cols.append(z)
    return np.hstack(cols)


def sg_matrix_sample(M: np.ndarray, n_dirs: int = 64, seed: int = 0,
                     omega: float = math.nan) -> SgCloud:
    """Sample the SG of one complex square matrix over input directions.

    A 1x1 matrix has the singleton SG {M, conj(M)} and is emitted exactly.
    All sampled points satisfy |z| <= sigma_max(M).
    """
    if n_dirs < 1:
        raise ValueError("n_dirs must be >= 1")
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError(f"matrix must be square, got {M.shape}")
    if n == 1:
        z = complex(M[0, 0])
        return SgCloud([z, z.conjugate()], [omega, omega], [0, 0],
                       {"n_dirs": n_dirs, "seed": seed})
    rng = np.random.default_rng(seed)
    U = _direction_set(n, n_dirs, rng)
    Hs = hermitian_part(M)
    MU = M @ U
    den = np.real(np.einsum("ji,ji->i", U.conj(), U))
    rho2 = np.real(np.einsum("ji,ji->i", MU.conj(), MU)) / den
    r = np.real(np.einsum("ji,jk,ki->i", U.conj(), Hs, U)) / den
    y = np.sqrt(np.maximum(rho2 - r * r, 0.0))
    zs = np.concatenate([r + 1j * y, r - 1j * y])
    k = U.shape[1]
    idx = np.concatenate([np.arange(k), np.arange(k)])
    return SgCloud(zs, np.full(2 * k, omega), idx,
                   {"n_dirs": n_dirs, "seed": seed})


def sg_system_sample(sys: StateSpace, grid=None, n_dirs: int = 64,
                     seed: int = 0, n_jobs: int = 1) -> SgCloud:
    """Frequency-domain SG cloud of a stable LTI system.

    Samples sg_matrix_sample(H(jw)) over the grid (0 and the inf sentinel
    included by default) with per-frequency seeds derived from ``seed``, so
    the result does not depend on evaluation order or on ``n_jobs``.
    """
    hw = is_hurwitz(sys)
    if not hw.stable:
        raise ValueError(
            f"SG sampling requires a stable system (spectral abscissa {hw.abscissa:.4g})"
        )
    ws = _as_omegas(grid)
    seeds = np.random.SeedSequence(seed).spawn(len(ws))

    def one(i: int) -> SgCloud:
        M = freq_response(sys, ws[i])
        return sg_matrix_sample(
            M, n_dirs=n_dirs, seed=int(seeds[i].generate_state(1)[0]),
            omega=ws[i],
        )

    if n_jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(one, range(len(ws))))
    else:
        parts = [one(i) for i in range(len(ws))]
    zs = np.concatenate([p.zs for p in parts])
    omegas = np.concatenate([p.omegas for p in parts])
    idx = np.concatenate([p.dir_idx for p in parts])
    meta = {"grid": _grid_meta(grid), "n_dirs": n_dirs, "seed": seed}
    return SgCloud(zs, omegas, idx, meta)


def _grid_meta(grid) -> dict:
    if grid is None:
        grid = FrequencyGrid()
    if isinstance(grid, FrequencyGrid):
        return {
            "wmin": grid.wmin, "wmax": grid.wmax, "count": grid.count,
            "include_zero": grid.include_zero, "include_inf": grid.include_inf,
        }
    return {"explicit": len(np.asarray(grid).ravel())}


def invert_cloud(cloud: SgCloud) -> SgCloud:
    """Pointwise inversion z -> 1/z; zero maps to the infinity marker."""
    zs = cloud.zs
    out = np.empty_like(zs)
    zero = zs == 0
    finite = np.isfinite(zs) & ~zero
    out[zero] = complex(math.inf, 0.0)
    out[~np.isfinite(zs)] = 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[finite] = 1.0 / zs[finite]
    return SgCloud(out, cloud.omegas, cloud.dir_idx, dict(cloud.meta))


def cloud_distance(a: SgCloud, b: SgCloud) -> float:
    """Infimum of |p - q| over point pairs; exact on finite clouds.

    Clouds that both carry an infinity marker are at distance zero. A cloud
    whose only points are infinity markers is infinitely far from any finite
    cloud.
    """
    if len(a) == 0 or len(b) == 0:
        raise ValueError("cloud_distance requires nonempty clouds")
    if a.has_infinity and b.has_infinity:
        return 0.0
    fa = a.zs[a.finite_mask]
    fb = b.zs[b.finite_mask]
    if fa.size == 0 or fb.size == 0:
        return math.inf
    tree = cKDTree(np.column_stack([fb.real, fb.imag]))
    d, _ = tree.query(np.column_stack([fa.real, fa.imag]))
    return float(np.min(d))


def cloud_diameter(cloud: SgCloud) -> float:
    finite = cloud.zs[cloud.finite_mask]
    if finite.size == 0:
        return 0.0
    # diameter of the convex hull equals the cloud diameter
    pts = np.column_stack([finite.real, finite.imag])
    try:
        hull = ConvexHull(pts)
        pts = pts[hull.vertices]
    except QhullError:
        pass
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((diff ** 2).sum(-1)).max())


def h_convex_hull(cloud: SgCloud, real_tol: float = 1e-9) -> SgCloud:
    """Vertex set of the hyperbolically convex hull of the cloud.

    Points of the open upper half-plane are mapped to the Beltrami-Klein disk
    where hyperbolic geodesics become straight chords; the Euclidean convex
    hull there selects the vertex points, which are returned unchanged (hull
    vertices are cloud members). Points within ``real_tol`` of the real axis
    degenerate under the map and are kept as-is. Conjugates are regenerated,
    so the result is again conjugate-closed.
    """
    finite = cloud.finite_mask
    zs, om, di = cloud.zs[finite], cloud.omegas[finite], cloud.dir_idx[finite]
    scale = 1.0 + (np.abs(zs).max() if zs.size else 0.0)
    upper = zs.imag > real_tol * scale
    real_axis = np.abs(zs.imag) <= real_tol * scale

    keep = np.where(real_axis)[0].tolist()
    up_idx = np.where(upper)[0]
    if len(up_idx) >= 3:
        w = np.array([bk_map(z) for z in zs[up_idx]])
        try:
            hull = ConvexHull(w)
            keep += [up_idx[v] for v in hull.vertices]
        except QhullError:
            keep += up_idx.tolist()
    else:
        keep += up_idx.tolist()
    keep = np.array(sorted(set(keep)), dtype=int)
    vz, vo, vd = zs[keep], om[keep], di[keep]
    # regenerate conjugates for the non-real vertices
    off_axis = np.abs(vz.imag) > real_tol * scale
    zs_out = np.concatenate([vz, vz[off_axis].conj()])
    om_out = np.concatenate([vo, vo[off_axis]])
    di_out = np.concatenate([vd, vd[off_axis]])
    return SgCloud(zs_out, om_out, di_out, dict(cloud.meta))


def export_csv(cloud: SgCloud, path) -> None:
    """Write the cloud as CSV with columns omega, re, im, direction_index."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("omega,re,im,direction_index\n")
        for i in range(len(cloud)):
            z = cloud.zs[i]
            fh.write(f"{cloud.omegas[i]:.17g},{z.real:.17g},{z.imag:.17g},"
                     f"{cloud.dir_idx[i]}\n")


def import_csv(path) -> SgCloud:
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    data = np.atleast_2d(data)
    if data.size == 0:
        return SgCloud(np.empty(0, complex), np.empty(0), np.empty(0, int))
    zs = data[:, 1] + 1j * data[:, 2]
    return SgCloud(zs, data[:, 0], data[:, 3].astype(int))
