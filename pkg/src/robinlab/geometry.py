"""Star-shaped planar domains sampled in polar coordinates.

A domain is a polygon with K vertices center + r_j * (cos theta_j, sin theta_j)
on the equally spaced angles theta_j = 2 pi j / K. Area and perimeter are the
exact polygon values; the Fraenkel asymmetry min_z |Omega symdiff B(z)| / |Omega|
is minimized over centers of the area-equivalent disk.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

logger = logging.getLogger(__name__)

MIN_VERTICES = 16


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(2)
        center.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0.0) or not np.all(np.isfinite(center)):
            raise ValueError("ball needs a finite center and radius > 0")


@dataclass(frozen=True)
class StarDomain:
    """Polar polygon: radii sampled on K >= 16 equally spaced angles."""

    center: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(2)
        radii = np.asarray(self.radii, dtype=float).reshape(-1)
        if radii.size < MIN_VERTICES:
            raise ValueError(f"need at least {MIN_VERTICES} radii, got {radii.size}")
        if not np.all(np.isfinite(radii)) or np.any(radii <= 0.0):
            raise ValueError("radii must be finite and positive")
        if not np.all(np.isfinite(center)):
            raise ValueError("center must be finite")
        center.setflags(write=False)
        radii.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radii", radii)

    @property
    def K(self) -> int:
        return self.radii.size

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.K) / self.K

    def vertices(self) -> np.ndarray:
        th = self.angles
        return self.center + self.radii[:, None] * np.stack(
            [np.cos(th), np.sin(th)], axis=1
        )

    def translated(self, shift) -> "StarDomain":
        return StarDomain(self.center + np.asarray(shift, dtype=float), self.radii)

    def scaled(self, t: float) -> "StarDomain":
        if not t > 0.0:
            raise ValueError("scale factor must be positive")
        return StarDomain(self.center, t * self.radii)


@dataclass(frozen=True)
class GeoReport:
    area: float
    perimeter: float
    asymmetry: float
    best_ball: Ball
    iso_deficit: float


# ---------------------------------------------------------------------------
# generators


def disk(R: float = 1.0, K: int = 512) -> StarDomain:
    return StarDomain(np.zeros(2), np.full(K, float(R)))


def ellipse(a: float, b: float | None = None, K: int = 512) -> StarDomain:
    """Ellipse x^2/a^2 + y^2/b^2 = 1; b defaults to 1/a (area pi)."""
    if b is None:
        b = 1.0 / a
    th = 2.0 * np.pi * np.arange(K) / K
    r = a * b / np.sqrt((b * np.cos(th)) ** 2 + (a * np.sin(th)) ** 2)
    return StarDomain(np.zeros(2), r)


def perturbed(R: float = 1.0, a: float = 0.05, k: int = 2, K: int = 512) -> StarDomain:
    """Cosine-perturbed disk r(theta) = R (1 + a cos(k theta)); needs |a| < 1."""
    if abs(a) >= 1.0:
        raise ValueError("perturbation amplitude must satisfy |a| < 1")
    th = 2.0 * np.pi * np.arange(K) / K
    return StarDomain(np.zeros(2), R * (1.0 + a * np.cos(k * th)))


def stadium(L: float, R: float, K: int = 512) -> StarDomain:
    """Rectangle L x 2R capped by half-disks of radius R, centered at the origin."""
    if L < 0 or R <= 0:
        raise ValueError("stadium needs L >= 0 and R > 0")
    th = 2.0 * np.pi * np.arange(K) / K
    ct, st = np.cos(th), np.sin(th)
    # flat walls y = +-R are hit while |x| <= L/2 along the ray
    with np.errstate(divide="ignore"):
        t_wall = np.where(np.abs(st) > 0, R / np.abs(st), np.inf)
    on_wall = np.abs(t_wall * ct) <= L / 2.0
    # cap centered at (sign(cos th) * L/2, 0)
    half = L / 2.0
    bq = -2.0 * half * np.abs(ct)
    cq = half * half - R * R
    disc = np.maximum(bq * bq - 4.0 * cq, 0.0)
    t_cap = (-bq + np.sqrt(disc)) / 2.0
    r = np.where(on_wall, t_wall, t_cap)
    return StarDomain(np.zeros(2), r)


# ---------------------------------------------------------------------------
# measures


def area(d: StarDomain) -> float:
    """Signed polygon area (positive: vertices are counterclockwise)."""
    v = d.vertices() - d.center
    x, y = v[:, 0], v[:, 1]
    xs, ys = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * ys - xs * y))


def perimeter(d: StarDomain) -> float:
    v = d.vertices()
    return float(np.sum(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)))


def equivalent_ball_radius(d: StarDomain) -> float:
    return math.sqrt(area(d) / math.pi)


def iso_deficit(d: StarDomain) -> float:
    """|Omega|^(-1/2) (Per(Omega) - Per(B)) with |B| = |Omega|; >= 0 up to
    polygonal discretization."""
    A = area(d)
    return (perimeter(d) - 2.0 * math.sqrt(math.pi * A)) / math.sqrt(A)


def boundary_radius(d: StarDomain, theta) -> np.ndarray:
    """Exact polygon boundary radius about the domain center at angles theta.

    The ray at angle theta meets the edge of the sector containing theta in
    rho = cross(P_j, P_{j+1}) / cross(e, P_{j+1} - P_j), all offsets from the
    center.
    """
    th = np.mod(np.asarray(theta, dtype=float), 2.0 * np.pi)
    K = d.K
    j = np.minimum((th * K / (2.0 * np.pi)).astype(int), K - 1)
    ang = d.angles
    r = d.radii
    p1 = np.stack([r[j] * np.cos(ang[j]), r[j] * np.sin(ang[j])], axis=-1)
    j2 = (j + 1) % K
    p2 = np.stack([r[j2] * np.cos(ang[j2]), r[j2] * np.sin(ang[j2])], axis=-1)
    e = np.stack([np.cos(th), np.sin(th)], axis=-1)
    dvec = p2 - p1
    num = p1[..., 0] * p2[..., 1] - p1[..., 1] * p2[..., 0]
    den = e[..., 0] * dvec[..., 1] - e[..., 1] * dvec[..., 0]
    return num / den


def _overlap_area(rho_bdy: np.ndarray, dtheta: float, cos_t, sin_t, w, R: float) -> float:
    """|Omega ∩ B(center + w, R)| by the angular midpoint rule; per angle the
    radial slice of the disk is the chord [t-, t+], integrated in closed form."""
    wd = w[0] * cos_t + w[1] * sin_t
    disc = wd * wd - (w[0] * w[0] + w[1] * w[1]) + R * R
    hit = disc > 0.0
    sq = np.sqrt(np.maximum(disc, 0.0))
    lo = np.maximum(wd - sq, 0.0)
    hi = np.minimum(wd + sq, rho_bdy)
    seg = np.where(hit, np.maximum(hi * hi - lo * lo, 0.0), 0.0)
    return 0.5 * float(np.sum(seg)) * dtheta


def fraenkel_asymmetry(
    d: StarDomain,
    n_angles: int = 4096,
    coarse_grid: int = 21,
    refine_tol: float = 1e-6,
) -> tuple[float, Ball]:
    """min over equal-area disk centers of |Omega symdiff B| / |Omega|.

    Coarse center grid over the vertex bounding box, then Nelder-Mead
    refinement of the best cell. Ties between coarse cells within 1e-6 are
    logged; the first minimizer wins.
    """
    A = area(d)
    R = math.sqrt(A / math.pi)
    dtheta = 2.0 * np.pi / n_angles
    th = (np.arange(n_angles) + 0.5) * dtheta
    rho_bdy = boundary_radius(d, th)
    cos_t, sin_t = np.cos(th), np.sin(th)

    def sym_diff_frac(w):
        inter = _overlap_area(rho_bdy, dtheta, cos_t, sin_t, w, R)
        return 2.0 * (A - inter) / A

    v = d.vertices() - d.center
    lo, hi = v.min(axis=0), v.max(axis=0)
    xs = np.linspace(lo[0], hi[0], coarse_grid)
    ys = np.linspace(lo[1], hi[1], coarse_grid)
    vals = np.empty((coarse_grid, coarse_grid))
    for i, x in enumerate(xs):
        for jj, y in enumerate(ys):
            vals[i, jj] = sym_diff_frac((x, y))
    best = np.unravel_index(np.argmin(vals), vals.shape)
    best_val = vals[best]
    if np.sum(vals <= best_val + 1e-6) > 1:
        logger.warning(
            "asymmetry center search: coarse grid ties within 1e-6, keeping the first minimizer"
        )

    res = minimize(
        sym_diff_frac,
        x0=np.array([xs[best[0]], ys[best[1]]]),
        method="Nelder-Mead",
        options={"xatol": refine_tol, "fatol": refine_tol * 1e-2, "maxiter": 500},
    )
    if not res.success and res.fun > best_val:
        logger.warning("asymmetry center refinement did not converge: %s", res.message)
    w = res.x if res.fun <= best_val else np.array([xs[best[0]], ys[best[1]]])
    val = float(min(res.fun, best_val))
    return val, Ball(d.center + w, R)


def report(d: StarDomain, n_angles: int = 4096) -> GeoReport:
    asym, ball = fraenkel_asymmetry(d, n_angles=n_angles)
    return GeoReport(
        area=area(d),
        perimeter=perimeter(d),
        asymmetry=asym,
        best_ball=ball,
        iso_deficit=iso_deficit(d),
    )
