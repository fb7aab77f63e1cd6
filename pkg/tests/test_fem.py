import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from robinlab import geometry as geo
from robinlab.fem import (
    EnergyReport,
    Mesh,
    ScalarField,
    assemble,
    field_to_csv,
    lambda_2,
    lambda_q,
    mesh_star,
    mesh_to_csv,
    minimize_energy,
)
from robinlab.radial import RadialParams, ball_energy, eigenvalue_q2_ball, solve_ball


@pytest.fixture(scope="module")
def disk_mesh():
    return mesh_star(geo.disk(1.0), 64, 128)


@pytest.fixture(scope="module")
def disk_q1(disk_mesh):
    return minimize_energy(disk_mesh, RadialParams(n=2, q=1.0, beta=1.0))


def test_mesh_counts():
    mesh = mesh_star(geo.disk(1.0), 32, 64)
    assert mesh.n_vertices == 1 + 32 * 64
    assert mesh.triangles.shape[0] == 32 * 64 * 2 - 64
    assert mesh.boundary_edges.shape[0] == 64


def test_mesh_area_and_boundary_agree_with_polygon():
    d = geo.disk(1.0)
    mesh = mesh_star(d, 32, 64)
    # the mesh boundary resamples the domain at n_theta angles, so its area
    # is the matching-resolution polygon area, O(n_theta^-2) off the domain
    ref = geo.area(geo.disk(1.0, K=64))
    assert abs(mesh.area() - ref) / ref < 1e-3
    assert abs(mesh.area() - math.pi) / math.pi < 2e-3
    bl1 = mesh_star(d, 32, 64).boundary_length()
    bl2 = mesh_star(d, 64, 128).boundary_length()
    assert abs(bl2 - bl1) / bl1 < 1e-3
    assert abs(bl2 - geo.perimeter(d)) / geo.perimeter(d) < 1e-3


def test_mesh_star_validation():
    d = geo.disk(1.0)
    with pytest.raises(ValueError):
        mesh_star(d, 3, 64)
    with pytest.raises(ValueError):
        mesh_star(d, 8, 8)


def test_mesh_invariants_rejected():
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    good = dict(n_r=4, n_theta=16)
    with pytest.raises(ValueError, match="area"):
        Mesh(verts, np.array([[0, 2, 1]]), np.array([[0, 1], [1, 2], [2, 0]]), **good)
    with pytest.raises(ValueError, match="loop"):
        Mesh(verts, np.array([[0, 1, 2]]), np.array([[0, 1], [2, 0], [1, 2]]), **good)
    ok = Mesh(verts, np.array([[0, 1, 2]]), np.array([[0, 1], [1, 2], [2, 0]]), **good)
    assert abs(ok.area() - 0.5) < 1e-15


def test_assembly_identities(disk_mesh):
    K, B, w = assemble(disk_mesh)
    one = np.ones(disk_mesh.n_vertices)
    assert abs(one @ (K @ one)) < 1e-12 * disk_mesh.n_vertices
    assert abs(one @ (B @ one) - disk_mesh.boundary_length()) < 1e-12
    assert abs(w.sum() - disk_mesh.area()) < 1e-12


def test_disk_q1_energy_matches_closed_form(disk_mesh, disk_q1, disk_closed_form):
    field, rep = disk_q1
    assert rep.converged
    assert abs(rep.E - disk_closed_form["E"]) / abs(disk_closed_form["E"]) < 1e-3
    assert abs(rep.inf_u - 0.5) < 1e-3
    assert abs(rep.lambda_q - disk_closed_form["lambda1"]) < 2e-3
    rr = np.hypot(disk_mesh.vertices[:, 0], disk_mesh.vertices[:, 1])
    exact = 0.5 + (1.0 - rr**2) / 4.0
    assert np.max(np.abs(field.values - exact)) < 1e-3
    # minimum sits on the boundary of this convex domain
    bidx = np.unique(disk_mesh.boundary_edges)
    assert field.values[bidx].min() == rep.inf_u


def test_ring_symmetry(disk_mesh, disk_q1):
    field, _ = disk_q1
    n_theta = disk_mesh.n_theta
    for ring in (1, 17, 64):
        vals = field.values[1 + (ring - 1) * n_theta : 1 + ring * n_theta]
        assert vals.max() - vals.min() < 1e-9


def test_obstacle_energies(disk_mesh):
    # E_c on the unit disk at q=1, beta=1: -pi/8 at c=1/4, -pi/16 from the
    # contact threshold c=1/2 onward
    for c, target in ((0.25, -math.pi / 8), (0.5, -math.pi / 16), (1.0, -math.pi / 16)):
        field, rep = minimize_energy(disk_mesh, RadialParams(n=2, q=1.0, beta=1.0, c=c))
        assert rep.converged
        assert abs(rep.E - target) < 1e-3, c
        if c >= 0.5:
            bidx = np.unique(disk_mesh.boundary_edges)
            assert np.max(field.values[bidx] - c) < 1e-6


def test_shift_identity_on_c_grid(disk_mesh):
    # below the contact level the shifted energy equals the plain energy
    # plus its geometric corrections, with the mesh's own area and perimeter
    per, vol = disk_mesh.boundary_length(), disk_mesh.area()
    for q in (1.0, 1.5):
        p0 = RadialParams(n=2, q=q, beta=1.0)
        _, rep0 = minimize_energy(disk_mesh, p0)
        for c in np.linspace(0.0, rep0.inf_u, 5):
            _, rep = minimize_energy(disk_mesh, RadialParams(n=2, q=q, beta=1.0, c=float(c)))
            rhs = rep0.E - 0.5 * c**2 * per + (c**q / q) * vol
            assert abs(rep.E - rhs) < 1e-8, (q, c)
        c2 = 2.0 * rep0.inf_u
        _, rep2 = minimize_energy(disk_mesh, RadialParams(n=2, q=q, beta=1.0, c=c2))
        rhs2 = rep0.E - 0.5 * c2**2 * per + (c2**q / q) * vol
        assert rep2.E - rhs2 > 1e-4


def test_energy_decreases_under_refinement():
    d = geo.disk(1.0)
    p = RadialParams(n=2, q=1.0, beta=1.0)
    Es = [minimize_energy(mesh_star(d, nr, 2 * nr), p)[1].E for nr in (16, 32, 64)]
    assert Es[0] > Es[1] > Es[2]


def test_lambda_q_against_radial_oracle():
    d2 = geo.disk(2.0)
    lam_fem = lambda_q(mesh_star(d2, 48, 96), 1.0, 1.0)
    lam_rad = ball_energy(solve_ball(RadialParams(n=2, q=1.0, beta=1.0), 2.0)).lambda_q
    assert abs(lam_fem - lam_rad) / lam_rad < 2e-3
    lam15 = lambda_q(mesh_star(geo.disk(1.0), 48, 96), 1.5, 1.0)
    rad15 = ball_energy(solve_ball(RadialParams(n=2, q=1.5, beta=1.0), 1.0)).lambda_q
    assert abs(lam15 - rad15) / rad15 < 5e-3
    with pytest.raises(ValueError, match="lambda_2"):
        lambda_q(mesh_star(d2, 16, 32), 2.0, 1.0)


def test_lambda_2_matches_shooting_oracle():
    d = geo.disk(1.0)
    oracle = eigenvalue_q2_ball(2, 1.0, 1.0)
    e1 = abs(lambda_2(mesh_star(d, 32, 64), 1.0) - oracle)
    e2 = abs(lambda_2(mesh_star(d, 64, 128), 1.0) - oracle)
    assert e2 / oracle < 5e-3
    assert 3.5 <= e1 / e2 <= 4.5
    assert lambda_2(mesh_star(d, 16, 32), 1e-8) < 1e-6


def test_minimize_energy_validation(disk_mesh):
    with pytest.raises(ValueError):
        minimize_energy(disk_mesh, RadialParams(n=2, q=1.0, beta=1.0, c=0.1, eps=0.5))
    with pytest.raises(ValueError):
        minimize_energy(disk_mesh, RadialParams(n=3, q=1.0, beta=1.0))
    with pytest.raises(ValueError):
        minimize_energy(disk_mesh, RadialParams(n=2, q=2.0, beta=1.0))
    with pytest.raises(ValueError):
        minimize_energy(disk_mesh, RadialParams(n=2, q=1.0, beta=1.0), omega=0.0)


def test_report_and_field_validation(disk_mesh):
    with pytest.raises(ValueError):
        EnergyReport(E=-1.0, dirichlet=1.0, boundary=1.0, bulk=-2.0,
                     inf_u=0.1, sup_u=0.2, iterations=1, converged=True)
    with pytest.raises(ValueError):
        EnergyReport(E=0.0, dirichlet=1.0, boundary=1.0, bulk=-2.0,
                     inf_u=0.3, sup_u=0.2, iterations=1, converged=True)
    with pytest.raises(ValueError):
        ScalarField(disk_mesh, np.ones(3))
    bad = np.ones(disk_mesh.n_vertices)
    bad[0] = np.inf
    with pytest.raises(ValueError):
        ScalarField(disk_mesh, bad)


def test_mesh_field_csv_round_trip(tmp_path):
    mesh = mesh_star(geo.ellipse(1.2), 8, 16)
    field, _ = minimize_energy(mesh, RadialParams(n=2, q=1.0, beta=1.0))
    vp, tp, fp = tmp_path / "v.csv", tmp_path / "t.csv", tmp_path / "f.csv"
    mesh_to_csv(mesh, vp, tp)
    field_to_csv(field, fp)
    verts = np.genfromtxt(vp, delimiter=",", names=True)
    tris = np.genfromtxt(tp, delimiter=",", names=True, dtype=np.int64)
    vals = np.genfromtxt(fp, delimiter=",", names=True)
    assert verts.shape[0] == mesh.n_vertices
    assert tris.shape[0] == mesh.triangles.shape[0]
    assert np.max(np.abs(vals["value"] - field.values)) < 1e-10


@settings(max_examples=5)
@given(
    a=st.floats(min_value=1.05, max_value=1.4),
    q=st.sampled_from([1.0, 1.5]),
)
def test_minimizer_properties_on_ellipses(a, q):
    mesh = mesh_star(geo.ellipse(a, K=128), 12, 24)
    field, rep = minimize_energy(mesh, RadialParams(n=2, q=q, beta=1.0))
    assert rep.converged
    assert rep.E < 0.0
    assert rep.inf_u > 0.0
    c = 0.3 * rep.inf_u
    _, repc = minimize_energy(mesh, RadialParams(n=2, q=q, beta=1.0, c=c))
    rhs = rep.E - 0.5 * c**2 * mesh.boundary_length() + (c**q / q) * mesh.area()
    assert abs(repc.E - rhs) < 1e-8
