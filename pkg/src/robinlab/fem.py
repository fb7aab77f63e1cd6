"""P1 finite elements on structured polar meshes of star-shaped planar domains.

Discretizes the energy
    E(u) = 1/2 u'Ku + (beta/2) u'Bu - (1/q) sum_i w_i u_i^q
with K the P1 stiffness form, B the boundary mass assembled edgewise with
exact linear-trace quadrature, and w the lumped bulk weights (row sums of the
consistent mass). Minimization over {u >= c} runs a damped sublinear fixed
point: the linearized Robin system is solved subject to the obstacle (exact
primal-dual active-set step), then relaxed with factor omega. A projected
gradient step with backtracking takes over whenever the energy would rise.

With the obstacle level c > 0 the reported energy is the shifted functional
    E_c(u) = E(u) - (beta/2) c^2 Per + (c^q/q) |domain|
evaluated with the mesh's own boundary length and area, which equals the
v = u - c form 1/2 v'Kv + (beta/2)(v'Bv + 2c 1'Bv) - sum_i w_i Theta(v_i)
identically; the report's breakdown lists the v-form terms so they sum to E.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import SolverError
from .geometry import StarDomain, boundary_radius
from .radial import RadialParams, lambda_from_energy, theta_potential

MAX_OUTER = 500
MAX_ACTIVE_SET = 60
OMEGA_DEFAULT = 0.7


@dataclass(frozen=True)
class Mesh:
    """Conforming triangulation with an oriented boundary loop.

    Triangles must be positively oriented; boundary_edges must trace a single
    closed counterclockwise loop, and each must belong to exactly one
    triangle.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    n_r: int
    n_theta: int

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=float))
        t = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int64))
        b = np.ascontiguousarray(np.asarray(self.boundary_edges, dtype=np.int64))
        for arr in (v, t, b):
            arr.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        object.__setattr__(self, "boundary_edges", b)
        if v.ndim != 2 or v.shape[1] != 2 or not np.all(np.isfinite(v)):
            raise ValueError("vertices must be a finite (N, 2) array")
        if t.ndim != 2 or t.shape[1] != 3:
            raise ValueError("triangles must be an (T, 3) index array")
        if t.min() < 0 or t.max() >= v.shape[0]:
            raise ValueError("triangle indices out of range")
        areas = self.triangle_areas()
        worst = int(np.argmin(areas))
        if areas[worst] <= 0.0:
            raise ValueError(f"triangle {worst} has nonpositive area {areas[worst]:.3e}")
        # boundary loop: consecutive, closed, no repeated start vertex
        if b.ndim != 2 or b.shape[1] != 2 or b.shape[0] < 3:
            raise ValueError("boundary_edges must be an (E, 2) index array, E >= 3")
        if not np.array_equal(b[:, 1], np.roll(b[:, 0], -1)):
            raise ValueError("boundary_edges must chain into a closed loop")
        if np.unique(b[:, 0]).size != b.shape[0]:
            raise ValueError("boundary loop must visit each vertex once")
        # each boundary edge lies in exactly one triangle
        tri_edges = np.sort(t[:, [[0, 1], [1, 2], [2, 0]]].reshape(-1, 2), axis=1)
        uniq, counts = np.unique(tri_edges, axis=0, return_counts=True)
        rim = {tuple(e) for e in uniq[counts == 1]}
        for e in np.sort(b, axis=1):
            if tuple(e) not in rim:
                raise ValueError(f"boundary edge {tuple(e)} is not a rim edge of the triangulation")
        if len(rim) != b.shape[0]:
            raise ValueError("triangulation rim does not match the boundary loop")

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def triangle_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def area(self) -> float:
        return float(np.sum(self.triangle_areas()))

    def boundary_length(self) -> float:
        seg = self.vertices[self.boundary_edges[:, 1]] - self.vertices[self.boundary_edges[:, 0]]
        return float(np.sum(np.hypot(seg[:, 0], seg[:, 1])))


@dataclass(frozen=True)
class ScalarField:
    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.mesh.n_vertices,):
            raise ValueError("one value per mesh vertex required")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")


@dataclass(frozen=True)
class EnergyReport:
    E: float
    dirichlet: float
    boundary: float
    bulk: float
    inf_u: float
    sup_u: float
    iterations: int
    converged: bool
    lambda_q: float | None = None

    def __post_init__(self):
        total = self.dirichlet + self.boundary + self.bulk
        if abs(self.E - total) > 1e-12 * max(1.0, abs(self.E)):
            raise ValueError("E must equal the sum of its breakdown")
        if self.inf_u > self.sup_u:
            raise ValueError("inf_u must not exceed sup_u")


def mesh_star(d: StarDomain, n_r: int, n_theta: int) -> Mesh:
    """Structured polar mesh: rings rho_i = i/n_r mapped through the domain's
    boundary radius, a fan at the center, quads split along the shorter
    diagonal (ties split uniformly so symmetric domains mesh symmetrically)."""
    n_r, n_theta = int(n_r), int(n_theta)
    if n_r < 4:
        raise ValueError("n_r must be >= 4")
    if n_theta < 16:
        raise ValueError("n_theta must be >= 16")
    theta = np.arange(n_theta) * (2.0 * math.pi / n_theta)
    rho_bdy = boundary_radius(d, theta)
    ray = np.column_stack([np.cos(theta), np.sin(theta)]) * rho_bdy[:, None]

    verts = np.empty((1 + n_r * n_theta, 2))
    verts[0] = d.center
    for i in range(1, n_r + 1):
        verts[1 + (i - 1) * n_theta : 1 + i * n_theta] = d.center + (i / n_r) * ray

    def idx(i, j):
        return 1 + (i - 1) * n_theta + (j % n_theta)

    j = np.arange(n_theta)
    tris = [np.column_stack([np.zeros(n_theta, dtype=np.int64), idx(1, j), idx(1, j + 1)])]
    for i in range(1, n_r):
        # counterclockwise quad: inner j, outer j, outer j+1, inner j+1
        a, b = idx(i, j), idx(i + 1, j)
        cc, dd = idx(i + 1, j + 1), idx(i, j + 1)
        d1 = np.sum((verts[a] - verts[cc]) ** 2, axis=1)
        d2 = np.sum((verts[b] - verts[dd]) ** 2, axis=1)
        # relative tie tolerance keeps the split pattern rotation-invariant
        use1 = d1 <= d2 * (1.0 + 1e-12)
        t1 = np.column_stack([a, b, cc])
        t2 = np.column_stack([a, cc, dd])
        s1 = np.column_stack([a, b, dd])
        s2 = np.column_stack([b, cc, dd])
        tris.append(np.where(use1[:, None], t1, s1))
        tris.append(np.where(use1[:, None], t2, s2))
    triangles = np.vstack(tris)

    p = verts[triangles]
    areas = 0.5 * (
        (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
        - (p[:, 1, 1] - p[:, 0, 1]) * (p[:, 2, 0] - p[:, 0, 0])
    )
    floor = 1e-14 * abs(float(np.sum(areas)))
    bad = np.nonzero(areas <= floor)[0]
    if bad.size:
        raise ValueError(f"triangle {int(bad[0])} is degenerate (area {areas[bad[0]]:.3e})")

    boundary = np.column_stack([idx(n_r, j), idx(n_r, j + 1)])
    return Mesh(verts, triangles, boundary, n_r=n_r, n_theta=n_theta)


def assemble(mesh: Mesh):
    """(stiffness, boundary_mass, bulk_quadrature): P1 stiffness, edgewise
    boundary mass, lumped bulk weights."""
    pts = mesh.vertices
    tri = mesh.triangles
    N = mesh.n_vertices
    p = pts[tri]
    areas = mesh.triangle_areas()
    # edge vector opposite each local vertex
    e = p[:, [2, 0, 1], :] - p[:, [1, 2, 0], :]
    rows, cols, vals = [], [], []
    for i in range(3):
        for j in range(3):
            rows.append(tri[:, i])
            cols.append(tri[:, j])
            vals.append(np.sum(e[:, i] * e[:, j], axis=1) / (4.0 * areas))
    K = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(N, N)
    ).tocsr()

    be = mesh.boundary_edges
    seg = pts[be[:, 1]] - pts[be[:, 0]]
    L = np.hypot(seg[:, 0], seg[:, 1])
    rows = np.concatenate([be[:, 0], be[:, 1], be[:, 0], be[:, 1]])
    cols = np.concatenate([be[:, 0], be[:, 1], be[:, 1], be[:, 0]])
    vals = np.concatenate([L / 3.0, L / 3.0, L / 6.0, L / 6.0])
    B = sp.coo_matrix((vals, (rows, cols)), shape=(N, N)).tocsr()

    w = np.zeros(N)
    np.add.at(w, tri.ravel(), np.repeat(areas / 3.0, 3))
    return K, B, w


def _consistent_mass(mesh: Mesh) -> sp.csr_matrix:
    tri = mesh.triangles
    N = mesh.n_vertices
    areas = mesh.triangle_areas()
    rows, cols, vals = [], [], []
    for i in range(3):
        for j in range(3):
            rows.append(tri[:, i])
            cols.append(tri[:, j])
            vals.append(areas * ((2.0 if i == j else 1.0) / 12.0))
    return sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(N, N)
    ).tocsr()


def _obstacle_solve(A, lu_full, r, c, scale):
    """Exact minimizer of 1/2 u'Au - r'u over {u >= c} by a primal-dual
    active set iteration; lu_full factors A and serves the unconstrained
    first pass."""
    u = lu_full.solve(r)
    if np.min(u) >= c - 1e-14 * scale:
        return np.maximum(u, c)
    N = u.size
    active = u < c
    Acsc = A.tocsc()
    ones = np.ones(N)
    for _ in range(MAX_ACTIVE_SET):
        free = ~active
        if not active.any():
            u = lu_full.solve(r)
        else:
            idx_f = np.nonzero(free)[0]
            rhs = r[idx_f] - c * np.asarray(Acsc[idx_f][:, np.nonzero(active)[0]].sum(axis=1)).ravel()
            sub = Acsc[idx_f][:, idx_f]
            u = np.full(N, c)
            u[idx_f] = splu(sub).solve(rhs)
        mu = A @ u - r
        new_active = mu > (u - c)
        if np.array_equal(new_active, active):
            break
        active = new_active
    else:
        raise SolverError("active-set iteration for the obstacle failed to settle")
    return np.maximum(u, c)


def _energy_terms(K, B, w, params, u):
    """v-form shifted energy terms for the field u >= c."""
    p = params
    v = u - p.c
    Bv = B @ v
    dirichlet = 0.5 * float(v @ (K @ v))
    boundary = 0.5 * p.beta * (float(v @ Bv) + 2.0 * p.c * float(np.sum(Bv)))
    bulk = -float(w @ theta_potential(v, p.q, p.c))
    return dirichlet, boundary, bulk


def minimize_energy(
    mesh: Mesh, params: RadialParams, omega: float = OMEGA_DEFAULT
) -> tuple[ScalarField, EnergyReport]:
    """Minimize the discrete shifted energy over nodal fields u >= c.

    Damped sublinear fixed point: solve the linearized Robin system under the
    obstacle, relax with factor omega, and fall back to projected gradient
    with backtracking on any energy increase. Stops when the relative energy
    decrease drops below 1e-12 and the max nodal update below 1e-10.
    """
    p = params
    if p.eps != 0.0:
        raise ValueError("the FEM path has no eps-regularized boundary term")
    if p.n != 2:
        raise ValueError("meshes are planar; params.n must be 2")
    if not p.q < 2.0:
        raise ValueError("q must lie in [1, 2); use lambda_2 for the linear problem")
    if not 0.0 < omega <= 1.0:
        raise ValueError("omega must lie in (0, 1]")
    K, B, w = assemble(mesh)
    A = (K + p.beta * B).tocsr()
    lu = splu(A.tocsc())
    scale = max(1.0, float(np.max(np.abs(w))) / max(p.beta, 1e-12))

    def energy(u):
        return sum(_energy_terms(K, B, w, p, u))

    u = np.maximum(lu.solve(w), p.c)
    E = energy(u)
    converged = False
    iterations = 0
    cached_target = None
    for k in range(1, MAX_OUTER + 1):
        iterations = k
        if p.q == 1.0:
            if cached_target is None:
                cached_target = _obstacle_solve(A, lu, w, p.c, scale)
            target = cached_target
        else:
            r = w * u ** (p.q - 1.0)
            target = _obstacle_solve(A, lu, r, p.c, scale)
        u_next = (1.0 - omega) * u + omega * target
        E_next = energy(u_next)
        if E_next > E + 1e-15 * max(1.0, abs(E)):
            # projected gradient with backtracking
            g = A @ u - w * u ** (p.q - 1.0)
            step = 1.0
            while step > 1e-16:
                cand = np.maximum(u - step * g, p.c)
                E_cand = energy(cand)
                if E_cand <= E - 1e-4 * step * float(g @ g):
                    u_next, E_next = cand, E_cand
                    break
                step *= 0.5
            else:
                u_next, E_next = u, E
        dE = E - E_next
        du = float(np.max(np.abs(u_next - u)))
        u, E = u_next, E_next
        if dE < 1e-12 * max(1.0, abs(E)) and du < 1e-10:
            converged = True
            break

    if p.c == 0.0 and np.min(u) <= 0.0:
        raise SolverError("minimizer has a nonpositive nodal value at c = 0")
    dirichlet, boundary, bulk = _energy_terms(K, B, w, p, u)
    E = dirichlet + boundary + bulk
    lam = None
    if p.c == 0.0 and p.q < 2.0 and E < 0.0:
        lam = lambda_from_energy(E, p.q)
    report = EnergyReport(
        E=E,
        dirichlet=dirichlet,
        boundary=boundary,
        bulk=bulk,
        inf_u=float(np.min(u)),
        sup_u=float(np.max(u)),
        iterations=iterations,
        converged=converged,
        lambda_q=lam,
    )
    return ScalarField(mesh, u), report


def lambda_q(mesh: Mesh, q: float, beta: float) -> float:
    """Scale-invariant level from the minimum energy at c = 0."""
    if not q < 2.0:
        raise ValueError("q must lie in [1, 2); use lambda_2 for q = 2")
    _, rep = minimize_energy(mesh, RadialParams(n=2, q=q, beta=beta))
    if not rep.converged:
        raise SolverError("energy minimization hit the iteration cap")
    if rep.E >= 0.0:
        raise SolverError("nonnegative minimum energy; no eigenvalue to report")
    return lambda_from_energy(rep.E, q)


def lambda_2(
    mesh: Mesh,
    beta: float,
    tol: float = 1e-10,
    max_iter: int = 5000,
    return_field: bool = False,
):
    """Smallest eigenvalue of (stiffness + beta boundary_mass) u = lam M u
    with the consistent mass M, by inverse power iteration. With
    return_field=True also returns the sign-normalized eigenfunction."""
    beta = float(beta)
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    K, B, _ = assemble(mesh)
    A = (K + beta * B).tocsc()
    M = _consistent_mass(mesh)
    lu = splu(A)
    absA = abs(A)
    x = np.ones(mesh.n_vertices)
    x /= math.sqrt(float(x @ (M @ x)))
    lam = float(x @ (A @ x))
    for _ in range(max_iter):
        y = lu.solve(M @ x)
        y /= math.sqrt(float(y @ (M @ y)))
        lam_new = float(y @ (A @ y))
        x = y
        # rounding floor of the quadratic form itself; tiny beta pushes the
        # eigenvalue below what the Rayleigh quotient can resolve relatively
        noise = 1e-14 * float(np.abs(x) @ (absA @ np.abs(x)))
        if abs(lam_new - lam) <= tol * abs(lam_new) + noise:
            if return_field:
                if x.sum() < 0.0:
                    x = -x
                return lam_new, ScalarField(mesh, x)
            return lam_new
        lam = lam_new
    raise SolverError("inverse iteration failed to settle within the cap")


# ---------------------------------------------------------------------------
# serialization


def mesh_to_csv(mesh: Mesh, vertices_path, triangles_path) -> None:
    with open(vertices_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,y\n")
        for x, y in mesh.vertices:
            fh.write(f"{x:.12g},{y:.12g}\n")
    with open(triangles_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("v0,v1,v2\n")
        for a, b, c in mesh.triangles:
            fh.write(f"{a},{b},{c}\n")


def field_to_csv(field: ScalarField, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,y,value\n")
        for (x, y), v in zip(field.mesh.vertices, field.values):
            fh.write(f"{x:.12g},{y:.12g},{v:.12g}\n")
