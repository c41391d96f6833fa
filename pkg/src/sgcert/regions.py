"""Multiplier regions of the complex plane and their geometry.

Two families of regions are supported:

* circular regions S(Pi) generated by a symmetric 2x2 multiplier
  Pi = [[a, b], [b, c]] through the quadratic inequality
  ``a|z|^2 + 2b Re z + c >= 0`` (a disk, a disk exterior, or a half-plane);
* aligned conic regions C(Theta) generated by a symmetric 3x3 matrix with
  zero (1,2) and (2,3) entries through
  ``t11 x^2 + t22 y^2 + 2 t13 x + t33 <= 0`` with z = x + jy.

Sign conventions follow the generating inequalities: circular membership
values are >= 0 inside, conic membership values are <= 0 inside.
``containment_margin`` gives a uniform geometric margin (positive inside)
for set-containment checks.

Hyperbolic convexity of conic regions is decided through the Beltrami-Klein
disk model: the map ``bk_map`` sends the upper half-plane to the unit disk,
turning hyperbolic geodesics into straight chords, and an aligned conic into
the quadratic sublevel set q(w) <= 0 with constant curvature-numerator sign
along its boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "MultiplierPi",
    "JSpectralFactor",
    "ConicTheta",
    "BkQuadratic",
    "Disk",
    "ExteriorDisk",
    "HalfPlane",
    "ConicRegion",
    "EmptyRegion",
    "FullRegion",
    "RegionGeom",
    "pi_interior",
    "pi_exterior",
    "is_positive_negative",
    "j_spectral_factor",
    "region_of_multiplier",
    "multiplier_of_region",
    "invert_region",
    "negate_region",
    "scale_region",
    "region_distance",
    "membership",
    "containment_margin",
    "region_area",
    "bk_map",
    "bk_inverse",
    "bk_quadratic",
    "curvature_numerator",
    "is_h_convex",
    "is_indefinite",
    "region_to_json",
    "region_from_json",
]

UNBOUNDED = math.inf


@dataclass(frozen=True)
class MultiplierPi:
    """Symmetric 2x2 multiplier, stored by its three free entries."""

    a: float
    b: float
    c: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b, self.c]])


@dataclass(frozen=True)
class JSpectralFactor:
    """Invertible Psi with Psi^T J Psi equal to the source multiplier, J = diag(1, -1)."""

    psi: np.ndarray
    j_sig: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.psi.T @ self.j_sig @ self.psi


@dataclass(frozen=True)
class ConicTheta:
    """Aligned symmetric 3x3 multiplier (zero (1,2) and (2,3) entries)."""

    t11: float
    t22: float
    t13: float
    t33: float

    @property
    def alpha(self) -> float:
        return self.t11 - self.t22

    def as_matrix(self) -> np.ndarray:
        return np.array([
            [self.t11, 0.0, self.t13],
            [0.0, self.t22, 0.0],
            [self.t13, 0.0, self.t33],
        ])

    @property
    def indefinite(self) -> bool:
        return is_indefinite(self)

    def value(self, z):
        """Quadratic form value at z (<= 0 means inside); accepts arrays."""
        x, y = np.real(z), np.imag(z)
        v = self.t11 * x * x + self.t22 * y * y + 2.0 * self.t13 * x + self.t33
        return v if np.ndim(v) else float(v)


@dataclass(frozen=True)
class BkQuadratic:
    """Quadratic q(w) = w^T M w + 2 b^T w + c of a conic in Beltrami-Klein coordinates."""

    M: np.ndarray
    b: np.ndarray
    c: float

    def value(self, w):
        w_arr = np.atleast_2d(np.asarray(w, dtype=float))
        quad = np.einsum("ki,ij,kj->k", w_arr, self.M, w_arr)
        out = quad + 2.0 * (w_arr @ self.b) + self.c
        return float(out[0]) if np.ndim(w) == 1 else out


@dataclass(frozen=True)
class Disk:
    center: float
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("disk radius must be positive")


@dataclass(frozen=True)
class ExteriorDisk:
    center: float
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("disk radius must be positive")


@dataclass(frozen=True)
class HalfPlane:
    """Region {z : normal * Re z >= offset} with normal = +1 or -1."""

    normal: float
    offset: float

    def __post_init__(self):
        if self.normal not in (1.0, -1.0):
            raise ValueError("half-plane normal must be +1 or -1")


@dataclass(frozen=True)
class ConicRegion:
    theta: ConicTheta


@dataclass(frozen=True)
class EmptyRegion:
    pass


@dataclass(frozen=True)
class FullRegion:
    pass


RegionGeom = Union[Disk, ExteriorDisk, HalfPlane, ConicRegion, EmptyRegion, FullRegion]


def pi_interior(c: float, r: float) -> MultiplierPi:
    """Multiplier whose region is the closed disk of center c, radius r > 0."""
    if r <= 0:
        raise ValueError("radius must be positive")
    return MultiplierPi(-1.0, float(c), float(r * r - c * c))


def pi_exterior(c: float, r: float) -> MultiplierPi:
    """Multiplier whose region is the exterior of the disk (c, r)."""
    if r <= 0:
        raise ValueError("radius must be positive")
    return MultiplierPi(1.0, -float(c), float(c * c - r * r))


def is_positive_negative(pi: MultiplierPi, eps: float = 1e-9) -> bool:
    """Whether the (1,1) block is <= -eps and the (2,2) block is >= eps."""
    return pi.a <= -eps and pi.c >= eps


def j_spectral_factor(pi: MultiplierPi) -> JSpectralFactor:
    """Closed-form factorization Pi = Psi^T J Psi with J = diag(1, -1).

    Requires a positive-negative multiplier; the construction
    Psi = [[b/sqrt(c), sqrt(c)], [sqrt(b^2/c - a), 0]] is invertible because
    both sqrt factors are strictly positive. The reconstruction is verified
    to 1e-10 before returning.
    """
    if not is_positive_negative(pi):
        raise ValueError("multiplier is not positive-negative; no factorization issued")
    sc = math.sqrt(pi.c)
    lower = math.sqrt(pi.b * pi.b / pi.c - pi.a)
    psi = np.array([[pi.b / sc, sc], [lower, 0.0]])
    j_sig = np.diag([1.0, -1.0])
    factor = JSpectralFactor(psi, j_sig)
    err = np.abs(factor.reconstruct() - pi.as_matrix()).max()
    if err > 1e-10:
        raise ArithmeticError(f"factorization residual {err:.2e} exceeds 1e-10")
    return factor


def region_of_multiplier(pi: MultiplierPi) -> RegionGeom:
    """Geometric classification of {z : a|z|^2 + 2b Re z + c >= 0}."""
    a, b, c = pi.a, pi.b, pi.c
    if a == 0.0:
        if b == 0.0:
            return FullRegion() if c >= 0 else EmptyRegion()
        # 2b Re z + c >= 0
        normal = 1.0 if b > 0 else -1.0
        return HalfPlane(normal, -c / (2.0 * abs(b)))
    disc = b * b - a * c
    if a < 0.0:
        if disc <= 0.0:
            return EmptyRegion()
        return Disk(-b / a, math.sqrt(disc) / abs(a))
    if disc <= 0.0:
        return FullRegion()
    return ExteriorDisk(-b / a, math.sqrt(disc) / a)


def multiplier_of_region(region: RegionGeom) -> MultiplierPi:
    """Inverse of region_of_multiplier for the circular family."""
    if isinstance(region, Disk):
        return pi_interior(region.center, region.radius)
    if isinstance(region, ExteriorDisk):
        return pi_exterior(region.center, region.radius)
    if isinstance(region, HalfPlane):
        # normal * Re z - offset >= 0  <=>  2b Re z + c >= 0, b = normal/2, c = -offset
        return MultiplierPi(0.0, region.normal / 2.0, -region.offset)
    if isinstance(region, FullRegion):
        return MultiplierPi(0.0, 0.0, 1.0)
    if isinstance(region, EmptyRegion):
        return MultiplierPi(0.0, 0.0, -1.0)
    raise ValueError(f"no 2x2 multiplier represents {type(region).__name__}")


def _transform_circular(region: RegionGeom, map_pi) -> RegionGeom:
    return region_of_multiplier(map_pi(multiplier_of_region(region)))


def invert_region(region: RegionGeom) -> RegionGeom:
    """Image of the region under z -> 1/z.

    Swapping the outer multiplier entries (a, c) realizes the inversion for
    the whole circular family: a disk containing 0 maps to a disk exterior, a
    disk avoiding 0 maps to a disk, a set with 0 on its boundary maps to a
    half-plane. Conic regions are not closed under inversion (the image is a
    quartic) and are rejected.
    """
    if isinstance(region, ConicRegion):
        raise ValueError("inversion of a conic region is not a conic region")
    return _transform_circular(
        region, lambda pi: MultiplierPi(pi.c, pi.b, pi.a)
    )


def negate_region(region: RegionGeom) -> RegionGeom:
    """Image of the region under z -> -z."""
    if isinstance(region, ConicRegion):
        t = region.theta
        return ConicRegion(ConicTheta(t.t11, t.t22, -t.t13, t.t33))
    return _transform_circular(
        region, lambda pi: MultiplierPi(pi.a, -pi.b, pi.c)
    )


def scale_region(region: RegionGeom, tau: float) -> RegionGeom:
    """Image of the region under z -> tau z, tau > 0."""
    if tau <= 0:
        raise ValueError("scale factor must be positive")
    if isinstance(region, ConicRegion):
        t = region.theta
        return ConicRegion(
            ConicTheta(t.t11, t.t22, t.t13 * tau, t.t33 * tau * tau)
        )
    return _transform_circular(
        region, lambda pi: MultiplierPi(pi.a, pi.b * tau, pi.c * tau * tau)
    )


def membership(region: RegionGeom, z: complex) -> float:
    """Signed membership value in the region's native convention.

    Circular-family regions return the generating quadratic value
    ``a|z|^2 + 2b Re z + c`` (>= 0 means inside); conic regions return the
    aligned quadratic value (<= 0 means inside). Empty is always outside
    (-1), Full always inside (+1).
    """
    if isinstance(region, ConicRegion):
        return region.theta.value(z)
    if isinstance(region, EmptyRegion):
        return -1.0
    if isinstance(region, FullRegion):
        return 1.0
    pi = multiplier_of_region(region)
    az = abs(z)
    return float(pi.a * az * az + 2.0 * pi.b * np.real(z) + pi.c)


def containment_margin(region: RegionGeom, z) -> np.ndarray:
    """Geometric margin, positive inside, in complex-plane distance units.

    Disk: r - |z - c|; exterior: |z - c| - r; half-plane: normal*Re z - offset.
    Conic regions use the negated quadratic value normalized by the local
    gradient magnitude (an approximate signed distance). Accepts scalars or
    arrays of points.
    """
    z = np.asarray(z, dtype=complex)
    if isinstance(region, Disk):
        return region.radius - np.abs(z - region.center)
    if isinstance(region, ExteriorDisk):
        return np.abs(z - region.center) - region.radius
    if isinstance(region, HalfPlane):
        return region.normal * np.real(z) - region.offset
    if isinstance(region, FullRegion):
        return np.full(z.shape, math.inf) if z.shape else np.array(math.inf)
    if isinstance(region, EmptyRegion):
        return np.full(z.shape, -math.inf) if z.shape else np.array(-math.inf)
    t = region.theta
    x, y = np.real(z), np.imag(z)
    val = t.t11 * x * x + t.t22 * y * y + 2.0 * t.t13 * x + t.t33
    grad = np.hypot(2.0 * t.t11 * x + 2.0 * t.t13, 2.0 * t.t22 * y)
    return -val / np.maximum(grad, 1e-12)


def region_area(region: RegionGeom) -> float:
    """Euclidean area; math.inf marks unbounded regions, 0.0 the empty region.

    Bounded aligned conics are ellipses: completing the square gives
    t11 (x + t13/t11)^2 + t22 y^2 <= t13^2/t11 - t33, with area
    pi * R / sqrt(t11 t22) for R = t13^2/t11 - t33 > 0.
    """
    if isinstance(region, Disk):
        return math.pi * region.radius ** 2
    if isinstance(region, EmptyRegion):
        return 0.0
    if isinstance(region, (ExteriorDisk, HalfPlane, FullRegion)):
        return UNBOUNDED
    t = region.theta
    if t.t11 > 0 and t.t22 > 0:
        rhs = t.t13 * t.t13 / t.t11 - t.t33
        if rhs <= 0:
            return 0.0
        return math.pi * rhs / math.sqrt(t.t11 * t.t22)
    return UNBOUNDED


# --- distances ---------------------------------------------------------------


def _conic_boundary_points(theta: ConicTheta, n: int = 4096) -> np.ndarray:
    """Dense complex sample of the conic boundary (both half-planes).

    Sweeps x solving for y and vice versa. When the swept variable is
    confined to a bounded window (elliptic cases) the window is computed
    exactly from the discriminant, so small conics stay well resolved.
    """
    t11, t22, t13, t33 = theta.t11, theta.t22, theta.t13, theta.t33
    pts = []
    span = min(max(10.0, 10.0 * (1.0 + abs(t13) + abs(t33))), 1e4)

    # x-sweep: t22 y^2 = -(t11 x^2 + 2 t13 x + t33)
    if abs(t22) > 1e-14:
        xlo, xhi = -span, span
        if t11 * t22 > 0:
            # rhs/t22 >= 0 on a bounded x-window: roots of t11 x^2 + 2 t13 x + t33
            disc = t13 * t13 - t11 * t33
            if disc >= 0:
                root = math.sqrt(disc)
                xlo = (-t13 - root) / t11
                xhi = (-t13 + root) / t11
                if xlo > xhi:
                    xlo, xhi = xhi, xlo
        xs = np.linspace(xlo, xhi, n)
        y2 = -(t11 * xs * xs + 2 * t13 * xs + t33) / t22
        ok = y2 >= 0
        y = np.sqrt(y2[ok])
        pts.append(xs[ok] + 1j * y)
        pts.append(xs[ok] - 1j * y)

    # y-sweep: t11 x^2 + 2 t13 x + (t22 y^2 + t33) = 0
    ylo, yhi = -span, span
    if t11 * t22 > 0:
        lim = (t13 * t13 - t11 * t33) / (t11 * t22)
        if lim < 0:
            lim = 0.0
        yhi = math.sqrt(lim)
        ylo = -yhi
    ys = np.linspace(ylo, yhi, n)
    if abs(t11) > 1e-14:
        disc = 4 * t13 * t13 - 4 * t11 * (t22 * ys * ys + t33)
        ok = disc >= 0
        root = np.sqrt(disc[ok])
        for sgn in (+1.0, -1.0):
            pts.append((-2 * t13 + sgn * root) / (2 * t11) + 1j * ys[ok])
    elif abs(t13) > 1e-14:
        pts.append(-(t22 * ys * ys + t33) / (2 * t13) + 1j * ys)
    if not pts:
        return np.empty(0, dtype=complex)
    out = np.concatenate(pts)
    return out[np.isfinite(out)]


def _point_region_distance(region: RegionGeom, z) -> np.ndarray:
    """Distance from points to a circular-family region (0 if inside)."""
    return np.maximum(0.0, -containment_margin(region, z))


def region_distance(r1: RegionGeom, r2: RegionGeom) -> float:
    """Euclidean distance between two regions (0 when they intersect).

    Closed forms cover all circular-family pairs; any pair involving a conic
    falls back to boundary sampling with golden-section refinement, accurate
    to about 1e-6 on well-scaled regions.
    """
    for r in (r1, r2):
        if isinstance(r, EmptyRegion):
            raise ValueError("distance to an empty region is undefined")
    if isinstance(r1, FullRegion) or isinstance(r2, FullRegion):
        return 0.0
    if isinstance(r2, ConicRegion) and not isinstance(r1, ConicRegion):
        return region_distance(r2, r1)
    if isinstance(r1, ConicRegion):
        return _conic_distance(r1, r2)

    pair = (type(r1), type(r2))
    if pair == (Disk, Disk):
        return max(0.0, abs(r1.center - r2.center) - r1.radius - r2.radius)
    if pair == (ExteriorDisk, ExteriorDisk):
        return 0.0  # both reach infinity
    if pair == (Disk, ExteriorDisk) or pair == (ExteriorDisk, Disk):
        disk, ext = (r1, r2) if pair[0] is Disk else (r2, r1)
        gap = ext.radius - abs(ext.center - disk.center) - disk.radius
        return max(0.0, gap)
    if pair == (HalfPlane, HalfPlane):
        if r1.normal == r2.normal:
            return 0.0
        # opposing half-planes Re z >= o1 and -Re z >= o2: gap o1 + o2
        o1 = r1.offset if r1.normal > 0 else r2.offset
        o2 = r2.offset if r1.normal > 0 else r1.offset
        return max(0.0, o1 + o2)
    if HalfPlane in pair and Disk in pair:
        hp, disk = (r1, r2) if pair[0] is HalfPlane else (r2, r1)
        return max(0.0, hp.offset - hp.normal * disk.center - disk.radius)
    if HalfPlane in pair and ExteriorDisk in pair:
        return 0.0  # an exterior reaches every half-plane
    raise TypeError(f"unsupported region pair {pair}")


def _region_probes(region: RegionGeom) -> np.ndarray:
    """A few representative interior points, used for overlap detection."""
    if isinstance(region, Disk):
        return np.array([region.center], dtype=complex)
    if isinstance(region, ExteriorDisk):
        far = abs(region.center) + region.radius + 1e5
        return np.array([far, -far, 1j * far, -1j * far], dtype=complex)
    if isinstance(region, HalfPlane):
        deep = region.normal * (abs(region.offset) + 1e5)
        return np.array([deep, deep + 1e5j, deep - 1e5j], dtype=complex)
    if isinstance(region, ConicRegion):
        bnd = _conic_boundary_points(region.theta, n=64)
        return bnd
    return np.empty(0, dtype=complex)


def _refine_along(bnd: np.ndarray, i: int, f) -> float:
    """Golden-section refinement of f over the boundary segment around index i."""
    lo, hi = max(0, i - 1), min(len(bnd) - 1, i + 1)
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a_, b_ = 0.0, 1.0
    seg = lambda t: bnd[lo] + t * (bnd[hi] - bnd[lo])
    x1, x2 = b_ - gr, a_ + gr
    f1, f2 = f(seg(x1)), f(seg(x2))
    for _ in range(40):
        if f1 < f2:
            b_, x2, f2 = x2, x1, f1
            x1 = b_ - gr * (b_ - a_)
            f1 = f(seg(x1))
        else:
            a_, x1, f1 = x1, x2, f2
            x2 = a_ + gr * (b_ - a_)
            f2 = f(seg(x2))
    return float(min(f1, f2, f(bnd[i])))


def _conic_distance(conic: ConicRegion, other: RegionGeom) -> float:
    th = conic.theta
    bnd = _conic_boundary_points(th)
    if bnd.size == 0:
        # sublevel set has no boundary inside the window: empty or everything
        if th.value(0.0) <= 0 or th.value(1.0) <= 0 or th.value(1j) <= 0:
            return 0.0
        raise ValueError("conic region is empty; distance undefined")
    # overlap: some interior point of `other` inside the conic, or vice versa
    probes = _region_probes(other)
    if probes.size and np.any(th.value(probes) <= 0):
        return 0.0
    if isinstance(other, ExteriorDisk) and region_area(conic) == UNBOUNDED:
        return 0.0  # both regions reach infinity
    if isinstance(other, ConicRegion):
        bnd2 = _conic_boundary_points(other.theta)
        if bnd2.size == 0:
            raise ValueError("conic region is empty; distance undefined")
        if np.any(other.theta.value(bnd) <= 1e-15) or np.any(th.value(bnd2) <= 1e-15):
            return 0.0
        s1 = bnd[:: max(1, len(bnd) // 1500)]
        s2 = bnd2[:: max(1, len(bnd2) // 1500)]
        d = np.abs(s1[:, None] - s2[None, :])
        i, j = np.unravel_index(np.argmin(d), d.shape)
        # alternate golden refinement on each boundary around the nearest pair
        p2 = s2[j]
        best = float(d[i, j])
        for _ in range(3):
            best = _refine_along(s1, int(i), lambda p: abs(p - p2))
            i = int(np.argmin(np.abs(s1 - p2)))
            p1 = s1[i]
            best = min(best, _refine_along(s2, int(j), lambda p: abs(p - p1)))
            j = int(np.argmin(np.abs(s2 - p1)))
            p2 = s2[j]
        return best
    vals = _point_region_distance(other, bnd)
    i = int(np.argmin(vals))
    if vals[i] <= 0:
        return 0.0
    return _refine_along(bnd, i, lambda p: float(_point_region_distance(other, p)))


# --- Beltrami-Klein machinery ------------------------------------------------


def bk_map(z: complex) -> tuple:
    """Map a point of the open upper half-plane into the open unit disk.

    Returns coordinates (eta, phi) with
    eta = (x^2 + y^2 - 1) / (1 + x^2 + y^2), phi = -2x / (1 + x^2 + y^2).
    """
    x, y = float(np.real(z)), float(np.imag(z))
    if y <= 0:
        raise ValueError(f"bk_map requires Im z > 0, got Im z = {y}")
    s = x * x + y * y
    denom = 1.0 + s
    return (s - 1.0) / denom, -2.0 * x / denom


def bk_inverse(eta: float, phi: float) -> complex:
    """Inverse of bk_map: x = -phi/(1-eta), y = sqrt(1-eta^2-phi^2)/(1-eta)."""
    rad = 1.0 - eta * eta - phi * phi
    if rad <= 0:
        raise ValueError("bk_inverse requires eta^2 + phi^2 < 1")
    x = -phi / (1.0 - eta)
    y = math.sqrt(rad) / (1.0 - eta)
    return complex(x, y)


def bk_quadratic(theta: ConicTheta) -> BkQuadratic:
    """Quadratic form of the conic's image in Beltrami-Klein coordinates."""
    M = np.array([
        [theta.t33 - theta.t22, theta.t13],
        [theta.t13, theta.t11 - theta.t22],
    ])
    b = np.array([-theta.t33, -theta.t13])
    return BkQuadratic(M, b, theta.t22 + theta.t33)


def is_indefinite(theta: ConicTheta, tol: float = 1e-10) -> bool:
    """Whether the 3x3 matrix has eigenvalues of both signs (beyond tol)."""
    eigs = np.linalg.eigvalsh(theta.as_matrix())
    return bool(eigs[0] < -tol and eigs[-1] > tol)


def curvature_numerator(theta: ConicTheta) -> float:
    """Signed curvature numerator of the conic's Beltrami-Klein boundary arc.

    Constant along the boundary and equal to 8 * t22^2 * (t11 - t22); its sign
    decides convexity of the image, hence hyperbolic convexity of the region.
    """
    if not is_indefinite(theta):
        raise ValueError("curvature numerator requires an indefinite multiplier")
    if theta.t22 == 0.0:
        raise ValueError("degenerate multiplier (t22 = 0); use is_h_convex")
    return 8.0 * theta.t22 ** 2 * theta.alpha


def is_h_convex(theta: ConicTheta) -> bool:
    """Whether the conic region is hyperbolically convex.

    Valid only for indefinite multipliers (otherwise the region is empty or
    the whole plane). Equivalent to t11 >= t22; the degenerate t22 = 0 case
    (a condition on x alone) follows the same sign test: a vertical strip or
    half-plane when t11 >= 0, a disconnected interval exterior when t11 < 0.
    """
    if not is_indefinite(theta):
        raise ValueError("region empty or all of C: multiplier must be indefinite")
    return theta.t11 >= theta.t22


# --- JSON --------------------------------------------------------------------


def region_to_json(region: RegionGeom) -> dict:
    if isinstance(region, Disk):
        return {"kind": "disk", "c": region.center, "r": region.radius}
    if isinstance(region, ExteriorDisk):
        return {"kind": "ext_disk", "c": region.center, "r": region.radius}
    if isinstance(region, HalfPlane):
        return {"kind": "half_plane", "normal": region.normal, "offset": region.offset}
    if isinstance(region, ConicRegion):
        t = region.theta
        return {"kind": "conic", "t11": t.t11, "t22": t.t22, "t13": t.t13, "t33": t.t33}
    if isinstance(region, EmptyRegion):
        return {"kind": "empty"}
    return {"kind": "full"}


def region_from_json(obj: dict) -> RegionGeom:
    kind = obj.get("kind")
    if kind == "disk":
        return Disk(obj["c"], obj["r"])
    if kind == "ext_disk":
        return ExteriorDisk(obj["c"], obj["r"])
    if kind == "half_plane":
        return HalfPlane(obj["normal"], obj["offset"])
    if kind == "conic":
        return ConicRegion(ConicTheta(obj["t11"], obj["t22"], obj["t13"], obj["t33"]))
    if kind == "empty":
        return EmptyRegion()
    if kind == "full":
        return FullRegion()
    raise ValueError(f"unknown region kind {kind!r}")
