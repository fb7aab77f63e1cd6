"""Radial solver for the semilinear Robin energy on balls and annuli.

Profiles solve psi'' + (n-1)/r psi' + (psi + c)^(q-1) = 0 with psi'(0) = 0 and
the boundary law psi'(R) + beta (psi(R) + c (1+eps) psi(R)^eps) = 0 (outer
normal; the inner boundary of an annulus flips the sign of psi'). Shooting on
the center value a = psi(0) with a fixed-step RK4 integrator; the first step
uses the even series psi ~ a - A r^2/(2n) + B r^4 to clear the (n-1)/r
singularity, with A = (a+c)^(q-1) and B = (q-1) A^2 / (8 n (n+2) (a+c)).

The ball energy is
    E = 1/2 int |psi'|^2 + (beta/2) Per(B_R) (psi_R^2 + 2 c psi_R^(1+eps))
        - int Theta(psi),   Theta(v) = ((c+v)^q - c^q)/q,
with volume integrals int_0^R f(r) n omega_n r^(n-1) dr by composite Simpson.
For c = 0, q < 2 the scale-invariant eigenvalue follows from
lambda_q = (2q/(q-2) E)^((q-2)/q).

Along any solution the Hamiltonian H = psi'^2/2 + (c+psi)^q / q satisfies
H' = -(n-1) psi'^2 / r <= 0. For an annulus profile meeting both boundary
laws, the volume-preserving stationarity residual reduces to
H(r1) - H(r2) + (beta/2)(n-1) [ (psi_1^2 + 2 c psi_1^(1+eps))/r1
                              + (psi_2^2 + 2 c psi_2^(1+eps))/r2 ],
strictly positive by the monotonicity of H: no annulus is stationary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .reports import InequalityReport, make_report

DEFAULT_STEPS = 4096
_COARSE_STEPS = 512
BC_TOL = 1e-9
ODE_RESIDUAL_TOL = 1e-8


def unit_ball_volume(n: int) -> float:
    """omega_n by the recurrence omega_n = omega_{n-2} * 2 pi / n."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if n == 1:
        return 2.0
    if n == 2:
        return math.pi
    return unit_ball_volume(n - 2) * 2.0 * math.pi / n


def ball_surface(n: int, R: float) -> float:
    return n * unit_ball_volume(n) * R ** (n - 1)


def _pospow(x: float, e: float) -> float:
    if e == 0.0:
        return 1.0 if x > 0.0 else 0.0
    return x**e if x > 0.0 else 0.0


@dataclass(frozen=True)
class RadialParams:
    n: int = 2
    q: float = 1.0
    beta: float = 1.0
    c: float = 0.0
    eps: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        for name in ("q", "beta", "c", "eps"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.n < 2:
            raise ValueError("n must be an integer >= 2")
        if not 1.0 <= self.q <= 2.0:
            raise ValueError("q must lie in [1, 2]")
        if not self.beta > 0.0:
            raise ValueError("beta must be positive")
        if self.c < 0.0:
            raise ValueError("c must be nonnegative")
        if not 0.0 <= self.eps < 1.0:
            raise ValueError("eps must lie in [0, 1)")


MODES = ("robin", "modified_robin", "obstacle_contact")


def _fd4(y: np.ndarray, h: float) -> np.ndarray:
    """4th-order central first derivative at nodes 2..len-3."""
    return (-y[4:] + 8.0 * y[3:-1] - 8.0 * y[1:-3] + y[:-4]) / (12.0 * h)


@dataclass(frozen=True)
class RadialProfile:
    """Validated radial solution on a uniform grid over [0, R]."""

    params: RadialParams
    grid: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    bc_residual: float
    mode: str

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        psi = np.asarray(self.psi, dtype=float)
        dpsi = np.asarray(self.dpsi, dtype=float)
        for arr in (grid, psi, dpsi):
            arr.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "dpsi", dpsi)
        self._validate()

    @property
    def R(self) -> float:
        return float(self.grid[-1])

    @property
    def M(self) -> int:
        return self.grid.size - 1

    def hamiltonian(self) -> np.ndarray:
        p = self.params
        base = np.maximum(self.psi + p.c, 0.0)
        return 0.5 * self.dpsi**2 + base**p.q / p.q

    def _validate(self):
        p = self.params
        grid, psi, dpsi = self.grid, self.psi, self.dpsi
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        M = grid.size - 1
        if M < 16 or M % 2 != 0 or psi.size != M + 1 or dpsi.size != M + 1:
            raise ValueError("grid must hold an even M >= 16 with matching arrays")
        if grid[0] != 0.0 or dpsi[0] != 0.0:
            raise ValueError("profile must start at r = 0 with psi'(0) = 0")
        h = grid[1] - grid[0]
        if np.max(np.abs(np.diff(grid) - h)) > 1e-12 * grid[-1]:
            raise ValueError("grid must be uniform")
        if np.min(psi) < -1e-12:
            raise ValueError("psi must be nonnegative")
        if abs(self.bc_residual) > BC_TOL:
            raise ValueError(f"boundary residual {self.bc_residual:.3e} exceeds {BC_TOL}")
        # ODE residual on the stored grid: differentiate stored dpsi (4th-order
        # central); second differences of psi would amplify rounding past 1e-8.
        inner = slice(2, M - 1)
        d2 = _fd4(dpsi, h)
        base = psi + p.c
        if p.q == 1.0:
            src = np.ones_like(psi)
        else:
            src = np.where(base > 0.0, np.maximum(base, 0.0) ** (p.q - 1.0), 0.0)
        res = d2 + (p.n - 1) * dpsi[inner] / grid[inner] + src[inner]
        if np.max(np.abs(res)) > ODE_RESIDUAL_TOL:
            raise ValueError(
                f"ODE residual {np.max(np.abs(res)):.3e} exceeds {ODE_RESIDUAL_TOL}"
            )
        scale = max(1.0, float(np.max(np.abs(dpsi))))
        if np.max(np.abs(_fd4(psi, h) - dpsi[inner])) > 1e-9 * scale:
            raise ValueError("stored dpsi inconsistent with psi")
        H = self.hamiltonian()
        if np.max(np.diff(H)) > 1e-10:
            raise ValueError("Hamiltonian must be nonincreasing along the profile")
        if self.mode == "obstacle_contact":
            if abs(psi[-1]) > BC_TOL:
                raise ValueError("contact profile must vanish at the boundary")
            if dpsi[-1] + p.beta * p.c < -BC_TOL:
                raise ValueError("contact profile violates the slope condition")


@dataclass(frozen=True)
class BallEnergy:
    E: float
    dirichlet: float
    boundary: float
    bulk: float
    lambda_q: float | None = None

    def __post_init__(self):
        total = self.dirichlet + self.boundary + self.bulk
        if abs(self.E - total) > 1e-12 * max(1.0, abs(self.E)):
            raise ValueError("E must equal the sum of its breakdown")
        if not self.E < 0.0:
            raise ValueError("minimizer energy must be negative")


# ---------------------------------------------------------------------------
# shooting integrator


def _series_step(n, q, c, a, h):
    A = _pospow(a + c, q - 1.0)
    if q == 1.0 or a + c <= 0.0 or A == 0.0:
        B = 0.0
    else:
        B = (q - 1.0) * A * A / (8.0 * n * (n + 2) * (a + c))
    psi = a - A * h * h / (2.0 * n) + B * h**4
    s = -A * h / n + 4.0 * B * h**3
    return psi, s


def _shoot_ball(n, q, c, R, M, a, store=False):
    """Integrate from the center with psi(0)=a; returns (psi(R), psi'(R)) and,
    when store=True, the full (grid, psi, dpsi) arrays."""
    h = R / M
    nm1 = float(n - 1)
    qm1 = q - 1.0
    linear = q == 1.0
    if store:
        psi_arr = np.empty(M + 1)
        s_arr = np.empty(M + 1)
        psi_arr[0] = a
        s_arr[0] = 0.0
    psi, s = _series_step(n, q, c, a, h)
    if store:
        psi_arr[1] = psi
        s_arr[1] = s
    h2 = 0.5 * h
    h6 = h / 6.0
    for i in range(1, M):
        r = i * h
        if linear:
            f1 = -nm1 * s / r - 1.0
            s2 = s + h2 * f1
            p2 = psi + h2 * s
            f2 = -nm1 * s2 / (r + h2) - 1.0
            s3 = s + h2 * f2
            p3 = psi + h2 * s2
            f3 = -nm1 * s3 / (r + h2) - 1.0
            s4 = s + h * f3
            p4 = psi + h * s3
            f4 = -nm1 * s4 / (r + h) - 1.0
        else:
            b = psi + c
            f1 = -nm1 * s / r - (b**qm1 if b > 0.0 else 0.0)
            s2 = s + h2 * f1
            p2 = psi + h2 * s
            b = p2 + c
            f2 = -nm1 * s2 / (r + h2) - (b**qm1 if b > 0.0 else 0.0)
            s3 = s + h2 * f2
            p3 = psi + h2 * s2
            b = p3 + c
            f3 = -nm1 * s3 / (r + h2) - (b**qm1 if b > 0.0 else 0.0)
            s4 = s + h * f3
            p4 = psi + h * s3
            b = p4 + c
            f4 = -nm1 * s4 / (r + h) - (b**qm1 if b > 0.0 else 0.0)
        psi += h6 * (s + 2.0 * (s2 + s3) + s4)
        s += h6 * (f1 + 2.0 * (f2 + f3) + f4)
        if store:
            psi_arr[i + 1] = psi
            s_arr[i + 1] = s
    if store:
        return psi, s, (np.arange(M + 1) * h, psi_arr, s_arr)
    return psi, s


def _shoot_annulus(n, q, beta, c, eps, r1, r2, M, a, store=False):
    """Integrate outward from r1 with psi(r1)=a and the inner boundary law
    -psi'(r1) + beta (a + c(1+eps) a^eps) = 0."""
    h = (r2 - r1) / M
    nm1 = float(n - 1)
    qm1 = q - 1.0
    linear = q == 1.0
    psi = a
    s = beta * (a + c * (1.0 + eps) * _pospow(a, eps))
    if store:
        psi_arr = np.empty(M + 1)
        s_arr = np.empty(M + 1)
        psi_arr[0] = psi
        s_arr[0] = s
    h2 = 0.5 * h
    h6 = h / 6.0
    for i in range(M):
        r = r1 + i * h
        if linear:
            f1 = -nm1 * s / r - 1.0
            s2 = s + h2 * f1
            p2 = psi + h2 * s
            f2 = -nm1 * s2 / (r + h2) - 1.0
            s3 = s + h2 * f2
            p3 = psi + h2 * s2
            f3 = -nm1 * s3 / (r + h2) - 1.0
            s4 = s + h * f3
            p4 = psi + h * s3
            f4 = -nm1 * s4 / (r + h) - 1.0
        else:
            b = psi + c
            f1 = -nm1 * s / r - (b**qm1 if b > 0.0 else 0.0)
            s2 = s + h2 * f1
            p2 = psi + h2 * s
            b = p2 + c
            f2 = -nm1 * s2 / (r + h2) - (b**qm1 if b > 0.0 else 0.0)
            s3 = s + h2 * f2
            p3 = psi + h2 * s2
            b = p3 + c
            f3 = -nm1 * s3 / (r + h2) - (b**qm1 if b > 0.0 else 0.0)
            s4 = s + h * f3
            p4 = psi + h * s3
            b = p4 + c
            f4 = -nm1 * s4 / (r + h) - (b**qm1 if b > 0.0 else 0.0)
        psi += h6 * (s + 2.0 * (s2 + s3) + s4)
        s += h6 * (f1 + 2.0 * (f2 + f3) + f4)
        if store:
            psi_arr[i + 1] = psi
            s_arr[i + 1] = s
    if store:
        return psi, s, (r1 + np.arange(M + 1) * h, psi_arr, s_arr)
    return psi, s


def _bisect(g, lo, hi, g_lo, g_hi, atol, max_iter=200):
    """Plain bisection keeping g(lo) < 0 <= g(hi)."""
    for _ in range(max_iter):
        if hi - lo <= atol:
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm < 0.0:
            lo, g_lo = mid, gm
        else:
            hi, g_hi = mid, gm
    return lo, hi, g_lo, g_hi


def _two_stage_bisect(residual_at, lo, hi, g_lo, g_hi, M):
    """Bisection at a coarse step count first, then at the full M. The root
    shift between step counts is O(M^-4), far below the coarse bracket."""
    scale = max(1.0, hi)
    if M > _COARSE_STEPS:
        g_c = lambda a: residual_at(a, _COARSE_STEPS)
        lo_c, hi_c = lo, hi
        gl = g_c(lo_c) if g_lo is None else g_lo
        gh = g_c(hi_c) if g_hi is None else g_hi
        lo_c, hi_c, _, _ = _bisect(g_c, lo_c, hi_c, gl, gh, atol=1e-9 * scale)
        pad = 1e-6 * scale
        lo_f = max(lo, lo_c - pad)
        hi_f = min(hi, hi_c + pad)
        g_f = lambda a: residual_at(a, M)
        gl_f, gh_f = g_f(lo_f), g_f(hi_f)
        if not (gl_f < 0.0 <= gh_f):
            lo_f, hi_f = lo, hi
            gl_f, gh_f = g_f(lo_f), g_f(hi_f)
            if not (gl_f < 0.0 <= gh_f):
                raise SolverError("shooting bracket lost between step counts")
    else:
        g_f = lambda a: residual_at(a, M)
        lo_f, hi_f, gl_f, gh_f = lo, hi, g_lo, g_hi
        if gl_f is None:
            gl_f = g_f(lo_f)
        if gh_f is None:
            gh_f = g_f(hi_f)
    lo_f, hi_f, gl_f, gh_f = _bisect(
        g_f, lo_f, hi_f, gl_f, gh_f, atol=max(4e-16 * scale, 1e-15)
    )
    return hi_f, gh_f


def shoot_once(params: RadialParams, R: float, a: float, M: int = DEFAULT_STEPS):
    """Single shot from the center with psi(0) = a; returns (psi(R), psi'(R)).

    No boundary condition is imposed, so the discretization error of the
    integrator is visible directly; step-halving studies use this entry point.
    """
    p = params
    if not R > 0.0:
        raise ValueError("R must be positive")
    if M < 16:
        raise ValueError("M must be >= 16")
    psiR, sR = _shoot_ball(p.n, p.q, p.c, float(R), int(M), float(a))
    return psiR, sR


def solve_ball(params: RadialParams, R: float, M: int = DEFAULT_STEPS) -> RadialProfile:
    """Shoot for the radial minimizer profile on the ball of radius R.

    Bisection on the center value against the boundary residual
    psi'(R) + beta (psi(R) + c (1+eps) psi(R)^eps). When eps = 0 and c is
    large the residual stays positive while psi(R) -> 0; the solve then
    switches to a Dirichlet shot psi(R) = 0 and verifies the contact slope
    condition psi'(R) + beta c >= -1e-9 (mode 'obstacle_contact').
    """
    p = params
    R = float(R)
    if not R > 0.0:
        raise ValueError("R must be positive")
    if M < 16 or M % 2 != 0:
        raise ValueError("M must be an even integer >= 16")
    if p.q == 2.0:
        raise ValueError(
            "q = 2 has no nontrivial energy minimizer on the ball; "
            "use eigenvalue_q2_ball for the linear problem"
        )

    def bc_residual(psiR, sR):
        return sR + p.beta * (psiR + p.c * (1.0 + p.eps) * _pospow(psiR, p.eps))

    def g_at(a, steps):
        psiR, sR = _shoot_ball(p.n, p.q, p.c, R, steps, a)
        return bc_residual(psiR, sR)

    hi = 10.0 * (R / (p.n * p.beta) + R * R / (2.0 * p.n) + p.c)
    lo = 0.0 if (p.c > 0.0 or p.q == 1.0) else 1e-10 * hi
    g_lo = g_at(lo, M)
    g_hi = g_at(hi, M)
    widen = 0
    while g_hi <= 0.0 and widen < 60:
        hi *= 2.0
        g_hi = g_at(hi, M)
        widen += 1
    if g_hi <= 0.0:
        raise SolverError("boundary residual bracket exhausted (never positive)")

    contact_candidate = g_lo >= 0.0
    if not contact_candidate:
        a_root, g_root = _two_stage_bisect(g_at, lo, hi, g_lo, g_hi, M)
        psiR, sR, (grid, psi, dpsi) = _shoot_ball(p.n, p.q, p.c, R, M, a_root, store=True)
        res = bc_residual(psiR, sR)
        if abs(res) <= BC_TOL and psiR >= -1e-12:
            mode = "robin" if p.c == 0.0 else "modified_robin"
            return RadialProfile(p, grid, psi, dpsi, float(res), mode)
        contact_candidate = True

    if p.c > 0.0 and p.eps == 0.0:
        # complementarity branch: Dirichlet shot psi(R) = 0
        def h_at(a, steps):
            psiR, _ = _shoot_ball(p.n, p.q, p.c, R, steps, a)
            return psiR

        h_lo = h_at(0.0, M)
        if h_lo >= 0.0:
            raise SolverError("contact shot found no sign change at a = 0")
        h_hi = h_at(hi, M)
        widen = 0
        while h_hi <= 0.0 and widen < 60:
            hi *= 2.0
            h_hi = h_at(hi, M)
            widen += 1
        a_root, _ = _two_stage_bisect(h_at, 0.0, hi, h_lo, h_hi, M)
        psiR, sR, (grid, psi, dpsi) = _shoot_ball(p.n, p.q, p.c, R, M, a_root, store=True)
        if sR + p.beta * p.c < -BC_TOL:
            raise SolverError("contact slope condition violated at the Dirichlet root")
        return RadialProfile(p, grid, psi, dpsi, float(psiR), "obstacle_contact")
    if p.c > 0.0:
        raise SolverError(
            "root search pinched at psi(R) -> 0 with eps > 0; no admissible profile"
        )
    raise SolverError("no boundary-residual root found for c = 0")


# ---------------------------------------------------------------------------
# energies


def _simpson(values: np.ndarray, h: float) -> float:
    n = values.size - 1
    if n % 2 != 0:
        raise ValueError("Simpson rule needs an even interval count")
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(np.dot(w, values)) * h / 3.0


def theta_potential(v: np.ndarray, q: float, c: float) -> np.ndarray:
    """Theta(v) = ((c+v)^q - c^q)/q."""
    return (np.maximum(c + v, 0.0) ** q - c**q) / q


def ball_energy(profile: RadialProfile) -> BallEnergy:
    """Quadrature energy of a ball profile, split into Dirichlet, boundary,
    and bulk parts; fills lambda_q when c = 0 and q < 2."""
    p = profile.params
    r = profile.grid
    h = r[1] - r[0]
    R = profile.R
    surf = p.n * unit_ball_volume(p.n) * r ** (p.n - 1)
    dirichlet = 0.5 * _simpson(profile.dpsi**2 * surf, h)
    bulk = -_simpson(theta_potential(profile.psi, p.q, p.c) * surf, h)
    psiR = profile.psi[-1]
    boundary = (
        0.5
        * p.beta
        * ball_surface(p.n, R)
        * (psiR**2 + 2.0 * p.c * _pospow(psiR, 1.0 + p.eps))
    )
    E = dirichlet + boundary + bulk
    lam = None
    if p.c == 0.0 and p.q < 2.0 and p.eps == 0.0:
        lam = lambda_from_energy(E, p.q)
    return BallEnergy(E=E, dirichlet=dirichlet, boundary=boundary, bulk=bulk, lambda_q=lam)


def lambda_from_energy(E: float, q: float) -> float:
    """Invert E = ((q-2)/2q) lambda^(q/(q-2)) for q in [1, 2)."""
    if not q < 2.0:
        raise ValueError("the energy-eigenvalue relation needs q < 2")
    if not E < 0.0:
        raise ValueError("the relation needs E < 0")
    return (2.0 * q / (q - 2.0) * E) ** ((q - 2.0) / q)


# ---------------------------------------------------------------------------
# linear (q = 2) eigenvalue


def eigenvalue_q2_ball(
    n: int, beta: float, R: float, M: int = DEFAULT_STEPS, return_profile: bool = False
):
    """Smallest Robin eigenvalue of the ball: psi'' + (n-1)/r psi' + lam psi = 0,
    psi'(0) = 0, psi'(R) + beta psi(R) = 0. Scan-then-bisect on the boundary
    residual in lam; the scan isolates the first sign change so the smallest
    eigenvalue is returned."""
    n = int(n)
    beta = float(beta)
    R = float(R)
    if n < 2 or beta <= 0.0 or R <= 0.0:
        raise ValueError("need n >= 2, beta > 0, R > 0")

    def shoot(lam, steps, store=False):
        h = R / steps
        psi = 1.0 - lam * h * h / (2.0 * n)
        s = -lam * h / n
        if store:
            psi_arr = np.empty(steps + 1)
            s_arr = np.empty(steps + 1)
            psi_arr[0], s_arr[0] = 1.0, 0.0
            psi_arr[1], s_arr[1] = psi, s
        nm1 = float(n - 1)
        h2, h6 = 0.5 * h, h / 6.0
        for i in range(1, steps):
            r = i * h
            f1 = -nm1 * s / r - lam * psi
            p2 = psi + h2 * s
            s2 = s + h2 * f1
            f2 = -nm1 * s2 / (r + h2) - lam * p2
            p3 = psi + h2 * s2
            s3 = s + h2 * f2
            f3 = -nm1 * s3 / (r + h2) - lam * p3
            p4 = psi + h * s3
            s4 = s + h * f3
            f4 = -nm1 * s4 / (r + h) - lam * p4
            psi += h6 * (s + 2.0 * (s2 + s3) + s4)
            s += h6 * (f1 + 2.0 * (f2 + f3) + f4)
            if store:
                psi_arr[i + 1], s_arr[i + 1] = psi, s
        if store:
            return psi, s, (np.arange(steps + 1) * h, psi_arr, s_arr)
        return psi, s

    def res_at(lam, steps):
        psi, s = shoot(lam, steps)
        return s + beta * psi

    # residual(0) = beta > 0; march until the first sign change
    step = (math.pi / (2.0 * R)) ** 2 / 4.0
    lo, g_lo = 0.0, beta
    hi = None
    k = 1
    while k < 100000:
        lam = k * step
        g = res_at(lam, _COARSE_STEPS)
        if g < 0.0:
            hi, g_hi = lam, g
            break
        lo, g_lo = lam, g
        k += 1
    if hi is None:
        raise SolverError("no sign change found while scanning for the eigenvalue")

    # bisection keeps residual(lo) > 0 > residual(hi): flip signs for _bisect
    neg = lambda lam_steps: None
    flip = lambda lam, steps: -res_at(lam, steps)
    lam_root, _ = _two_stage_bisect(flip, lo, hi, -g_lo, -g_hi, M)
    if not return_profile:
        return lam_root
    _, _, (grid, psi, dpsi) = shoot(lam_root, M, store=True)
    return lam_root, (grid, psi, dpsi)


# ---------------------------------------------------------------------------
# structural checks


def hamiltonian_monotonicity(profile: RadialProfile) -> InequalityReport:
    """H nonincreasing along the profile (slack 1e-10) and the derivative
    identity dH/dr = -(n-1) psi'^2 / r within 1e-6 at interior nodes. The
    report's deficit is the worst of the two margins."""
    p = profile.params
    H = profile.hamiltonian()
    r = profile.grid
    h = r[1] - r[0]
    mono_margin = float(np.min(-np.diff(H)))
    inner = slice(2, r.size - 2)
    dH = _fd4(H, h)
    ident_err = float(np.max(np.abs(dH + (p.n - 1) * profile.dpsi[inner] ** 2 / r[inner])))
    deficit = min(mono_margin, 1e-6 - ident_err)
    return make_report(
        name="hamiltonian_monotonicity",
        lhs=deficit,
        rhs=0.0,
        tolerance=1e-10,
        inputs={
            "n": p.n,
            "q": p.q,
            "beta": p.beta,
            "c": p.c,
            "eps": p.eps,
            "R": profile.R,
            "identity_sup_error": ident_err,
            "min_decrement": mono_margin,
        },
        term_provenance={
            "lhs": "min(worst grid decrement of H, 1e-6 - sup |dH/dr + (n-1) psi'^2/r|)",
            "rhs": "zero",
        },
    )


def annulus_exclusion(
    params: RadialParams, r1: float, r2: float, M: int = DEFAULT_STEPS
) -> InequalityReport:
    """Search for an annulus profile meeting both boundary laws and evaluate
    the volume-preserving stationarity residual
    H(r1) - H(r2) + (beta/2)(n-1) [ (psi1^2 + 2c psi1^(1+eps))/r1 + (outer) ].
    Positive residual excludes a stationary annulus. When no admissible
    positive profile exists the exclusion holds vacuously (reported as pass
    with infinite margin)."""
    p = params
    r1, r2 = float(r1), float(r2)
    if not 0.0 < r1 < r2:
        raise ValueError("need 0 < r1 < r2")

    def outer_residual(a, steps):
        psi2, s2 = _shoot_annulus(p.n, p.q, p.beta, p.c, p.eps, r1, r2, steps, a)
        return s2 + p.beta * (psi2 + p.c * (1.0 + p.eps) * _pospow(psi2, p.eps))

    base_inputs = {
        "n": p.n,
        "q": p.q,
        "beta": p.beta,
        "c": p.c,
        "eps": p.eps,
        "r1": r1,
        "r2": r2,
    }

    def vacuous(reason):
        return make_report(
            name="annulus_exclusion",
            lhs=math.inf,
            rhs=1e-4,
            tolerance=1e-12,
            inputs=dict(base_inputs, admissible=False, reason=reason),
            term_provenance={
                "lhs": "stationarity residual (no admissible profile: +inf)",
                "rhs": "required strict-positivity margin 1e-4",
            },
        )

    hi = 10.0 * (r2 / (p.n * p.beta) + r2 * r2 / (2.0 * p.n) + p.c)
    grid_a = np.linspace(hi * 1e-6, hi, 48)
    vals = [outer_residual(a, _COARSE_STEPS) for a in grid_a]
    bracket = None
    for i in range(len(vals) - 1):
        if vals[i] < 0.0 <= vals[i + 1]:
            bracket = (grid_a[i], grid_a[i + 1], vals[i], vals[i + 1])
            break
    if bracket is None:
        return vacuous("no sign change of the outer residual in the amplitude scan")
    lo_a, hi_a, g_lo, g_hi = bracket
    a_root, _ = _two_stage_bisect(outer_residual, lo_a, hi_a, None, None, M)
    psi2, s2, (grid, psi, dpsi) = _shoot_annulus(
        p.n, p.q, p.beta, p.c, p.eps, r1, r2, M, a_root, store=True
    )
    if np.min(psi) <= 0.0:
        return vacuous("profile leaves the positive cone")

    def boundary_term(v):
        return v * v + 2.0 * p.c * _pospow(v, 1.0 + p.eps)

    psi1, s1 = psi[0], dpsi[0]
    H1 = 0.5 * s1 * s1 + _pospow(psi1 + p.c, p.q) / p.q
    H2 = 0.5 * s2 * s2 + _pospow(psi2 + p.c, p.q) / p.q
    residual = (
        H1
        - H2
        + 0.5 * p.beta * (p.n - 1) * (boundary_term(psi1) / r1 + boundary_term(psi2) / r2)
    )
    return make_report(
        name="annulus_exclusion",
        lhs=residual,
        rhs=1e-4,
        tolerance=1e-12,
        inputs=dict(
            base_inputs,
            admissible=True,
            psi_inner=float(psi1),
            psi_outer=float(psi2),
            H_inner=float(H1),
            H_outer=float(H2),
        ),
        term_provenance={
            "lhs": "H(r1) - H(r2) + (beta/2)(n-1) sum of boundary terms / r_i",
            "rhs": "required strict-positivity margin 1e-4",
        },
    )


def penalized_ball_argmin(
    params: RadialParams,
    m: float,
    k: float,
    n_grid: int = 24,
    M: int = DEFAULT_STEPS,
) -> tuple[float, InequalityReport]:
    """Minimize rho -> E(B_rho) + 2 k |B_rho| over a grid in (0, r_m],
    r_m = (m / omega_n)^(1/n). Verifies on the grid: (a) E(B_rho) strictly
    decreasing, (b) dE/drho <= n E / rho + 1e-6 by central differences,
    (c) argmin at r_m whenever k <= k0 = -E(B_{r_m}) / (2 |B_{r_m}|)."""
    p = params
    if p.c != 0.0 or p.eps != 0.0:
        raise ValueError("the penalized ball problem is posed at c = 0, eps = 0")
    if not m > 0.0 or k < 0.0 or n_grid < 8:
        raise ValueError("need m > 0, k >= 0, n_grid >= 8")
    omega = unit_ball_volume(p.n)
    r_m = (m / omega) ** (1.0 / p.n)
    rho = np.linspace(r_m / 8.0, r_m, n_grid)
    E = np.array([ball_energy(solve_ball(p, float(rr), M=M)).E for rr in rho])
    vol = omega * rho**p.n
    penalized = E + 2.0 * k * vol
    i_star = int(np.argmin(penalized))
    rho_star = float(rho[i_star])

    mono_margin = float(np.min(E[:-1] - E[1:]))  # strict decrease of E itself
    d = rho[1] - rho[0]
    dE = (E[2:] - E[:-2]) / (2.0 * d)
    bound_margin = float(np.min(p.n * E[1:-1] / rho[1:-1] + 1e-6 - dE))
    k0 = -E[-1] / (2.0 * vol[-1])
    above = k > k0
    argmin_margin = 0.0 if (above or i_star == n_grid - 1) else -1.0
    deficit = min(mono_margin, bound_margin, argmin_margin)
    report = make_report(
        name="penalized_ball_argmin",
        lhs=deficit,
        rhs=0.0,
        tolerance=1e-12,
        inputs={
            "n": p.n,
            "q": p.q,
            "beta": p.beta,
            "m": m,
            "k": k,
            "k_threshold": float(k0),
            "k_above_threshold": bool(above),
            "rho_star": rho_star,
            "r_m": float(r_m),
            "grid_points": n_grid,
            "E_at_r_m": float(E[-1]),
        },
        term_provenance={
            "lhs": "min(margin of strict E decrease, margin of dE/drho <= nE/rho + 1e-6, "
            "argmin-at-r_m indicator when k <= threshold)",
            "rhs": "zero",
        },
    )
    return rho_star, report


# ---------------------------------------------------------------------------
# serialization


def profile_to_csv(profile: RadialProfile, path) -> None:
    """Columns r, psi, dpsi, H with 12 significant digits, LF endings."""
    H = profile.hamiltonian()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("r,psi,dpsi,H\n")
        for r, ps, dp, hh in zip(profile.grid, profile.psi, profile.dpsi, H):
            fh.write(f"{r:.12g},{ps:.12g},{dp:.12g},{hh:.12g}\n")
