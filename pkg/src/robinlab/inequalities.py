"""Shape-functional inequalities evaluated as numerical deficits.

Each check compares an energy or eigenvalue on a star-shaped domain against
its value on the equal-area ball and reports lhs, rhs, deficit = lhs - rhs,
and a tolerance. The side asserted to dominate is always `lhs` (see
reports). Tolerances are estimated by recomputing both sides at half
resolution and summing the observed shifts (a Richardson-style error gauge);
with estimation disabled a fixed fraction of the reference scale is used.

The domain side is conforming P1, so E(Omega) is overestimated and the
ball side is a radial quadrature oracle: a pass is evidence, not proof. The
bias direction is recorded in each report's inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import fem, geometry, radial
from .errors import ConfigError
from .geometry import StarDomain
from .radial import RadialParams, RadialProfile
from .reports import InequalityReport, SweepResult, make_report

CHECKS = ("intermediate", "quantitative", "ec_ball", "trace_poincare")
FAMILIES = ("disk", "ellipse", "perturbed", "stadium")
ASYMMETRY_CUTOFF = 1e-3


@dataclass(frozen=True)
class Resolution:
    """Discretization knobs shared by every check.

    estimate_tolerance=True recomputes each side at half resolution (mesh,
    radial grid, boundary sampling) and uses the observed shifts as the
    report tolerance; otherwise the fallback is default_tol x reference
    scale.
    """

    n_r: int = 48
    n_theta: int = 96
    M: int = 4096
    n_angles: int = 4096
    estimate_tolerance: bool = True
    default_tol: float = 1e-3

    def __post_init__(self):
        if self.estimate_tolerance and (
            self.n_r < 8 or self.n_theta < 32 or self.M < 64 or self.n_angles < 64
        ):
            raise ValueError("resolution too coarse to halve")
        if self.n_r < 4 or self.n_theta < 16 or self.M < 32 or self.n_angles < 32:
            raise ValueError("resolution below the documented floor")
        if not 0.0 < self.default_tol < 1.0:
            raise ValueError("default_tol must lie in (0, 1)")

    def halved(self) -> "Resolution":
        return replace(
            self,
            n_r=self.n_r // 2,
            n_theta=self.n_theta // 2,
            M=self.M // 2,
            n_angles=self.n_angles // 2,
            estimate_tolerance=False,
        )


def _half_domain(d: StarDomain) -> StarDomain:
    if d.K % 2 != 0 or d.K < 32:
        return d
    return StarDomain(center=d.center, radii=d.radii[::2])


@dataclass(frozen=True)
class _Sides:
    lhs: float
    rhs: float
    context: dict


def _with_tolerance(name, sides_at, d, res: Resolution, scale_ref, inputs, provenance):
    """Evaluate lhs/rhs at the working resolution, then either gauge the
    tolerance from a half-resolution recomputation or fall back to the
    default fraction of the reference scale."""
    fine = sides_at(d, res)
    if res.estimate_tolerance:
        coarse = sides_at(_half_domain(d), res.halved())
        tol = abs(fine.lhs - coarse.lhs) + abs(fine.rhs - coarse.rhs) + 1e-9 * scale_ref(fine)
    else:
        tol = res.default_tol * scale_ref(fine)
    merged = dict(inputs)
    merged.update(fine.context)
    return make_report(
        name=name,
        lhs=fine.lhs,
        rhs=fine.rhs,
        tolerance=tol,
        inputs=merged,
        term_provenance=provenance,
    )


def _ball_radius(d: StarDomain) -> float:
    return geometry.equivalent_ball_radius(d)


def check_intermediate(
    d: StarDomain, q: float, beta: float, res: Resolution = Resolution()
) -> InequalityReport:
    """Energy deficit dominates the weighted perimeter deficit:
    E(Omega) - E(B) >= (beta/2) (inf u)^2 (Per(Omega) - Per(B)) with B the
    equal-area ball."""

    def sides(dom, r):
        mesh = fem.mesh_star(dom, r.n_r, r.n_theta)
        _, rep = fem.minimize_energy(mesh, RadialParams(n=2, q=q, beta=beta))
        R = _ball_radius(dom)
        ball = radial.ball_energy(radial.solve_ball(RadialParams(n=2, q=q, beta=beta), R, M=r.M))
        per = geometry.perimeter(dom)
        per_ball = 2.0 * math.pi * R
        lhs = rep.E - ball.E
        rhs = 0.5 * beta * rep.inf_u**2 * (per - per_ball)
        return _Sides(
            lhs,
            rhs,
            {
                "E_domain": rep.E,
                "E_ball": ball.E,
                "inf_u": rep.inf_u,
                "per": per,
                "per_ball": per_ball,
                "ball_radius": R,
                "conforming_bias": "lhs overestimated (conforming fem)",
            },
        )

    return _with_tolerance(
        "intermediate",
        sides,
        d,
        res,
        scale_ref=lambda s: max(1e-6, abs(s.context["E_ball"])),
        inputs={"q": q, "beta": beta},
        provenance={
            "lhs": "fem energy minus radial ball energy",
            "rhs": "(beta/2) inf_u^2 (perimeter minus ball perimeter), geometry",
        },
    )


def check_quantitative(
    d: StarDomain, q: float, beta: float, res: Resolution = Resolution()
) -> InequalityReport:
    """Eigenvalue-level stability: lambda_q(Omega) - lambda_q(B) >= 0, with
    the ratio against squared Fraenkel asymmetry recorded for constant
    estimation whenever the asymmetry is meaningfully positive."""

    def sides(dom, r):
        mesh = fem.mesh_star(dom, r.n_r, r.n_theta)
        lam = fem.lambda_q(mesh, q, beta)
        R = _ball_radius(dom)
        lam_ball = radial.ball_energy(
            radial.solve_ball(RadialParams(n=2, q=q, beta=beta), R, M=r.M)
        ).lambda_q
        asym, _ = geometry.fraenkel_asymmetry(dom, n_angles=r.n_angles)
        lhs = lam - lam_ball
        ctx = {
            "lambda_domain": lam,
            "lambda_ball": lam_ball,
            "asymmetry": asym,
            "ball_radius": R,
            "conforming_bias": "lhs overestimated (conforming fem)",
        }
        if asym > ASYMMETRY_CUTOFF:
            ctx["ratio"] = lhs / asym**2
        return _Sides(lhs, 0.0, ctx)

    return _with_tolerance(
        "quantitative",
        sides,
        d,
        res,
        scale_ref=lambda s: max(1e-6, abs(s.context["lambda_ball"])),
        inputs={"q": q, "beta": beta},
        provenance={
            "lhs": "fem lambda_q minus radial ball lambda_q",
            "rhs": "zero (nonnegativity case of the stability bound)",
        },
    )


def check_ec_ball_minimality(
    d: StarDomain, params: RadialParams, res: Resolution = Resolution()
) -> InequalityReport:
    """Shifted-energy minimality of the ball: E_c(Omega) >= E_c(B) at equal
    area, the obstacle level c fixed by the caller."""
    if params.eps != 0.0:
        raise ValueError("the FEM comparison side has no eps-regularized term")

    def sides(dom, r):
        mesh = fem.mesh_star(dom, r.n_r, r.n_theta)
        _, rep = fem.minimize_energy(mesh, params)
        R = _ball_radius(dom)
        ball = radial.ball_energy(radial.solve_ball(params, R, M=r.M))
        return _Sides(
            rep.E,
            ball.E,
            {
                "inf_u": rep.inf_u,
                "ball_radius": R,
                "ball_mode": "contact" if ball.boundary == 0.0 else "robin-type",
                "conforming_bias": "lhs overestimated (conforming fem)",
            },
        )

    return _with_tolerance(
        "ec_ball",
        sides,
        d,
        res,
        scale_ref=lambda s: max(1e-6, abs(s.rhs)),
        inputs={"q": params.q, "beta": params.beta, "c": params.c},
        provenance={
            "lhs": "fem shifted energy on the domain",
            "rhs": "radial shifted energy on the equal-area ball",
        },
    )


def check_trace_poincare(
    d: StarDomain,
    q: float,
    beta: float,
    field: fem.ScalarField,
    res: Resolution = Resolution(),
) -> InequalityReport:
    """Sharp-constant trace inequality: for any nonnegative field u on the
    domain, u'Ku + beta u'Bu >= lambda_q(B^m) (sum w u^q)^(2/q), m the mesh
    area. The boundary weight is beta, not beta/2: the inequality bounds the
    full quadratic form, not the halved energy term. Equality is attained by
    the ball minimizer."""
    if not 1.0 <= q <= 2.0:
        raise ValueError("q must lie in [1, 2]")
    if np.min(field.values) < 0.0:
        raise ValueError("field must be nonnegative")
    if float(np.max(np.abs(field.values))) == 0.0:
        raise ValueError("field must be nontrivial")
    mesh = field.mesh
    K, B, w = fem.assemble(mesh)
    u = field.values
    energy_form = float(u @ (K @ u)) + beta * float(u @ (B @ u))
    qnorm = float(w @ np.maximum(u, 0.0) ** q) ** (2.0 / q)

    def level(area, M):
        R = math.sqrt(area / math.pi)
        if q == 2.0:
            return radial.eigenvalue_q2_ball(2, beta, R, M=M)
        return radial.ball_energy(
            radial.solve_ball(RadialParams(n=2, q=q, beta=beta), R, M=M)
        ).lambda_q

    lam = level(mesh.area(), res.M)
    rhs = lam * qnorm
    if res.estimate_tolerance:
        # the field is fixed; the uncertain factor is the ball level at the
        # mesh's area, gauged against a half-resolution radial solve and the
        # mesh-vs-polygon area gap
        lam_half = level(geometry.area(d), res.M // 2)
        tol = abs(lam - lam_half) * qnorm + res.default_tol * max(energy_form, rhs)
    else:
        tol = res.default_tol * max(energy_form, rhs)
    return make_report(
        name="trace_poincare",
        lhs=energy_form,
        rhs=rhs,
        tolerance=tol,
        inputs={
            "q": q,
            "beta": beta,
            "lambda_ball": lam,
            "qnorm_sq": qnorm,
            "area": mesh.area(),
            "conforming_bias": "none (both sides evaluated on the same field)",
        },
        term_provenance={
            "lhs": "stiffness + beta boundary quadratic form of the field",
            "rhs": "radial equal-area ball level times the bulk q-norm squared",
        },
    )


def check_scaling(profile: RadialProfile, t: float) -> InequalityReport:
    """Strict sub-homogeneity of the shifted energy under dilation: for
    t > 1, the energy of the profile stretched to B_{tR} sits strictly below
    t^n times the original energy. By the change of variables the stretched
    energy is t^(n-2) dirichlet + t^(n-1) boundary + t^n bulk, so the gap is
    (t^n - t^(n-2)) dirichlet + (t^n - t^(n-1)) boundary > 0."""
    t = float(t)
    if not t > 1.0:
        raise ValueError("t must exceed 1")
    if float(np.max(np.abs(profile.psi))) == 0.0:
        raise ValueError("profile must be nontrivial")
    n = profile.params.n
    e = radial.ball_energy(profile)
    dilated = t ** (n - 2) * e.dirichlet + t ** (n - 1) * e.boundary + t**n * e.bulk
    return make_report(
        name="scaling",
        lhs=t**n * e.E,
        rhs=dilated,
        tolerance=1e-10,
        inputs={
            "n": n,
            "q": profile.params.q,
            "beta": profile.params.beta,
            "c": profile.params.c,
            "eps": profile.params.eps,
            "t": t,
            "R": profile.R,
            "dirichlet": e.dirichlet,
            "boundary": e.boundary,
            "bulk": e.bulk,
        },
        term_provenance={
            "lhs": "t^n times the profile energy",
            "rhs": "dilated-profile energy via the termwise power decomposition",
        },
    )


# ---------------------------------------------------------------------------
# sweeps


def _make_domain(family: str, value: float, k: int, K: int):
    try:
        if family == "disk":
            return geometry.disk(value, K=K)
        if family == "ellipse":
            return geometry.ellipse(value, K=K)
        if family == "perturbed":
            return geometry.perturbed(1.0, a=value, k=k, K=K)
        if family == "stadium":
            return geometry.stadium(value, 1.0, K=K)
    except ValueError as ex:
        raise ConfigError(f"family {family!r} rejects parameter {value!r}: {ex}") from ex
    raise ConfigError(f"unknown family {family!r}; choose from {FAMILIES}")


def sweep(
    family: str,
    grid,
    check: str,
    q: float,
    beta: float,
    res: Resolution = Resolution(),
    k: int = 2,
    c_factor: float = 0.0,
    domain_K: int = 512,
) -> SweepResult:
    """Run one check across a one-parameter shape family.

    grid: family parameter values (ellipse axis, perturbation amplitude,
    stadium length, disk radius). For ec_ball the obstacle level per shape
    is c_factor times the shape's computed inf_u. Rows never raise on a
    failed inequality; failures are counted and recorded.
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise ConfigError("parameter grid must be nonempty")
    if check not in CHECKS:
        raise ConfigError(f"unknown check {check!r}; choose from {CHECKS}")
    if family not in FAMILIES:
        raise ConfigError(f"unknown family {family!r}; choose from {FAMILIES}")
    if not 1.0 <= q < 2.0:
        # every sweep row is built on the nonlinear minimizer; the q = 2
        # linear endpoint has its own direct path (check_trace_poincare on a
        # lambda_2 eigenfield)
        raise ConfigError(f"q = {q} not sweepable; sweep checks need q in [1, 2)")
    rows = []
    ratios = []
    for value in grid:
        d = _make_domain(family, value, k, domain_K)
        mesh = fem.mesh_star(d, res.n_r, res.n_theta)
        base_field, base = fem.minimize_energy(mesh, RadialParams(n=2, q=q, beta=beta))
        if check == "intermediate":
            rep = check_intermediate(d, q, beta, res)
        elif check == "quantitative":
            rep = check_quantitative(d, q, beta, res)
        elif check == "ec_ball":
            params = RadialParams(n=2, q=q, beta=beta, c=c_factor * base.inf_u)
            rep = check_ec_ball_minimality(d, params, res)
        else:
            rep = check_trace_poincare(d, q, beta, base_field, res)
        asym = rep.inputs.get("asymmetry")
        if asym is None:
            asym, _ = geometry.fraenkel_asymmetry(d, n_angles=res.n_angles)
        row = {
            "family": family,
            "param": value,
            "k": k if family == "perturbed" else "",
            "q": q,
            "beta": beta,
            "c": rep.inputs.get("c", 0.0),
            "check": check,
            "lhs": rep.lhs,
            "rhs": rep.rhs,
            "deficit": rep.deficit,
            "tolerance": rep.tolerance,
            "passed": rep.passed,
            "lambda_q": base.lambda_q if base.lambda_q is not None else "",
            "E": base.E,
            "inf_u": base.inf_u,
            "per": geometry.perimeter(d),
            "area": geometry.area(d),
            "asymmetry": asym,
        }
        rows.append(row)
        if "ratio" in rep.inputs:
            ratios.append(rep.inputs["ratio"])
    n_pass = sum(1 for r in rows if r["passed"])
    constant = min(ratios) if ratios else None
    notes = {}
    if family == "ellipse" and check == "quantitative" and len(rows) >= 2:
        lhs_seq = [r["lhs"] for r in rows]
        asym_seq = [r["asymmetry"] for r in rows]
        increasing = all(a < b for a, b in zip(lhs_seq, lhs_seq[1:])) and all(
            a < b for a, b in zip(asym_seq, asym_seq[1:])
        )
        notes["monotone_family_heuristic"] = increasing
    return SweepResult(
        family=family,
        rows=rows,
        n_pass=n_pass,
        n_fail=len(rows) - n_pass,
        empirical_constant=constant,
        notes=notes,
    )


SWEEP_COLUMNS = (
    "family",
    "param",
    "k",
    "q",
    "beta",
    "c",
    "check",
    "lhs",
    "rhs",
    "deficit",
    "tolerance",
    "passed",
    "lambda_q",
    "E",
    "inf_u",
    "per",
    "area",
    "asymmetry",
)


def _format_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def rows_to_csv(rows, path) -> None:
    """One row per (shape, parameter combination); 12 significant digits,
    LF endings, UTF-8."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(row[c]) for c in SWEEP_COLUMNS) + "\n")


def sweep_to_csv(result: SweepResult, path) -> None:
    rows_to_csv(result.rows, path)
