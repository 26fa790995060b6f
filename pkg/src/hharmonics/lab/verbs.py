"""Experiment verbs: identity suites, convergence, maximal, audit, tables."""
from __future__ import annotations

import math

import numpy as np

from .. import kernels, specfun
from ..intertwine import make_v_operator, v_apply
from ..kernels import (cesaro_majorant, cesaro_profile, dlvp_coeffs,
                       dlvp_profile, jacobi_poisson_profile, poisson_profile)
from ..maximal import CapAverageTable, ThetaGrid, majorization_audit
from ..quadrature import (WeightSpec, ball_lift, ball_rule, domain_rule,
                          gauss_jacobi, simplex_lift, simplex_rule, sphere_rule)
from ..specfun import JacobiParams
from ..transform import (MeanRequest, bernstein_durrmeyer, convolve,
                         projection_table, summation_mean, translate)
from .catalog import catalog_field, evaluation_points, random_polynomial
from .config import ConfigError, ExperimentConfig
from .reports import Report

__all__ = ["verify_identities", "run_convergence", "run_maximal", "run_audit",
           "kernel_table", "expand"]


# ---------------------------------------------------------------------------
# verify-identities


def _suite_dlvp_closed_form() -> float:
    theta = np.linspace(0.0, math.pi, 41)
    t = np.cos(theta)
    worst = 0.0
    for lam in (0.5, 1.0, 2.3):
        for n in (4, 8, 12, 16):
            coeffs = dlvp_coeffs(n, lam)
            table = specfun.gegenbauer_table(n, lam, t)
            scale = (np.arange(n + 1) + lam) / lam
            series = (coeffs * scale) @ table
            closed = dlvp_profile(n, lam).evaluate(t)
            worst = max(worst, float(np.max(np.abs(series - closed))))
    return worst


def _suite_quadratic_transformation() -> float:
    t = np.linspace(-1.0, 1.0, 41)
    worst = 0.0
    for lam in (0.7, 1.5):
        params = JacobiParams(lam - 0.5, -0.5)
        for n in range(16):
            lhs = (2.0 * n + lam) / lam * specfun.gegenbauer(2 * n, lam, t)
            rhs = (specfun.jacobi_at_one(n, params)
                   * specfun.jacobi_orthonormal(n, params, 2.0 * t * t - 1.0))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def _suite_weight_integral_reduction(spec: WeightSpec, seed: int,
                                     corruption: float) -> float:
    """Sphere integral of a smeared zonal function reduces to one angle."""
    rng = np.random.default_rng(seed)
    rule = sphere_rule(spec, 10)
    op = make_v_operator("sphere", spec, degree=10)
    x = evaluation_points("sphere", spec, 1, seed + 1)[0]
    lam = spec.index
    line = gauss_jacobi(32, JacobiParams(lam - 0.5, lam - 0.5))
    worst = 0.0
    for _ in range(4):
        gc = rng.uniform(-1.0, 1.0, size=9)

        def g(t):
            return np.polynomial.polynomial.polyval(t, gc)

        smeared = np.array([
            v_apply(op, lambda pts, xx=node: g(pts @ x), node, degree=8)
            for node in rule.points
        ])
        lhs = float(rule.weights @ smeared) * corruption
        rhs = float(line.weights @ g(line.nodes))
        worst = max(worst, abs(lhs - rhs))
    return worst


def _suite_sphere_ball_transfer(spec: WeightSpec, seed: int) -> float:
    """Sphere integral of V f equals the solid-ball moment integral."""
    rng = np.random.default_rng(seed)
    d = spec.d
    rule = sphere_rule(spec, 6)
    op = make_v_operator("sphere", spec, degree=6)
    gamma = spec.gamma
    if gamma > 0.0:
        solid_spec = WeightSpec(d + 1, tuple([0.0] * (d + 1)), gamma - 0.5)
        solid = ball_rule(solid_spec, 6)
    worst = 0.0
    for _ in range(10):
        f, deg = random_polynomial(d + 1, 6, rng)
        vf = np.array([v_apply(op, f, y, degree=deg) for y in rule.points])
        lhs = float(rule.weights @ vf)
        if gamma > 0.0:
            rhs = float(solid.weights @ f(solid.points))
        else:
            rhs = float(rule.weights @ f(rule.points))
        scale = max(abs(lhs), abs(rhs), 1e-30)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def _suite_simplex_kernel_two_route(seed: int) -> float:
    spec = WeightSpec(2, (0.5, 0.5), 0.5)
    rng = np.random.default_rng(seed)
    pairs = [(evaluation_points("simplex", spec, 1, seed + i)[0],
              evaluation_points("simplex", spec, 1, seed + 50 + i)[0])
             for i in range(3)]
    op_ball = make_v_operator("ball", spec, degree=12)
    op_simp = make_v_operator("simplex", spec, degree=12)
    signs = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
    worst = 0.0
    for x, y in pairs:
        xr, yr = np.sqrt(x), np.sqrt(y)
        for n in range(5):
            via_ball = np.mean([
                kernels.repro_kernel_ball(2 * n, spec, xr, eps * yr, op=op_ball)
                for eps in signs
            ])
            via_simplex = kernels.repro_kernel_simplex(n, spec, x, y, op=op_simp)
            worst = max(worst, abs(via_ball - via_simplex))
    return worst


def _suite_ball_lift_convolution(spec_ball: WeightSpec, seed: int) -> float:
    rng = np.random.default_rng(seed)
    d = spec_ball.d
    rule_b = ball_rule(spec_ball, 14)
    rule_s = sphere_rule(spec_ball.lifted(), 14)
    gc = rng.uniform(-1.0, 1.0, size=7)

    def g(t):
        return np.polynomial.polynomial.polyval(t, gc)

    f, _ = random_polynomial(d, 4, rng, "ball")

    def f_lift(pts):
        return f(np.atleast_2d(pts)[:, :d])

    x = evaluation_points("ball", spec_ball, 3, seed + 3)
    worst = 0.0
    for xi in x:
        lhs = convolve("ball", spec_ball, f, g, xi, rule_b, degree=14)
        X = ball_lift(xi[None, :])[0]
        rhs = convolve("sphere", spec_ball.lifted(), f_lift, g, X, rule_s, degree=14)
        worst = max(worst, abs(lhs - rhs))
    return worst


def _suite_simplex_square_convolution(spec_ball: WeightSpec, seed: int) -> float:
    rng = np.random.default_rng(seed)
    d = spec_ball.d
    rule_t = simplex_rule(spec_ball, 8)
    rule_b = ball_rule(spec_ball, 16)
    gc = rng.uniform(-1.0, 1.0, size=5)

    def g(t):
        return np.polynomial.polynomial.polyval(t, gc)

    f, _ = random_polynomial(d, 3, rng, "simplex")

    def f_psi(pts):
        return f(np.atleast_2d(pts) ** 2)

    def g_doubled(t):
        return g(2.0 * np.asarray(t) ** 2 - 1.0)

    xs = evaluation_points("ball", spec_ball, 3, seed + 5)
    worst = 0.0
    for x in xs:
        lhs = convolve("simplex", spec_ball, f, g, x**2, rule_t, degree=16)
        rhs = convolve("ball", spec_ball, f_psi, g_doubled, x, rule_b, degree=16)
        worst = max(worst, abs(lhs - rhs))
    return worst


def _suite_simplex_translation_reflection(spec_ball: WeightSpec, seed: int) -> float:
    rng = np.random.default_rng(seed)
    rule = simplex_rule(spec_ball, 10)
    f, deg = random_polynomial(spec_ball.d, 4, rng, "simplex")
    xs = evaluation_points("simplex", spec_ball, 3, seed + 7)
    worst = 0.0
    for x in xs:
        for theta in (0.3, 0.9, 1.4):
            a = translate("simplex", spec_ball, f, theta, x, rule, nmax=10, f_degree=deg)
            b = translate("simplex", spec_ball, f, math.pi - theta, x, rule,
                          nmax=10, f_degree=deg)
            worst = max(worst, abs(a - b))
    return worst


def _suite_bernstein_durrmeyer(seed: int) -> float:
    spec = WeightSpec(1, (0.5,), 0.5)
    rng = np.random.default_rng(seed)
    rule = simplex_rule(spec, 14)
    f, _ = random_polynomial(1, 5, rng, "simplex")
    pts = np.linspace(0.05, 0.95, 11)[:, None]
    lam = spec.index
    worst = 0.0
    for n in range(5):
        coeffs = dlvp_coeffs(n, lam)
        table = projection_table("simplex", spec, rule, f, pts, n)
        dlvp_vals = coeffs @ table
        for ip, x in enumerate(pts):
            bd = bernstein_durrmeyer(f, n, spec, x, rule)
            worst = max(worst, abs(bd - dlvp_vals[ip]))
    return worst


def verify_identities(cfg: ExperimentConfig) -> Report:
    """Run the operator identity suites at config sizes."""
    report = Report("verify-identities", cfg.echo())
    d = cfg.int_("d", 2)
    kappa = cfg.floats("kappa", "0.5,0.3,0")
    if len(kappa) != d + 1:
        raise ConfigError(f"verify-identities needs d+1 kappa entries, got {len(kappa)}")
    seed = cfg.seed
    corruption = cfg.float_("selftest_corruption", 1.0)
    spec_s = WeightSpec(d, kappa, 0.0)
    spec_b = WeightSpec(d, kappa[:d], kappa[d] if kappa[d] > 0 else 0.5)

    suites = [
        ("dlvp_closed_form", 1e-10, lambda: _suite_dlvp_closed_form()),
        ("quadratic_transformation", 1e-10, lambda: _suite_quadratic_transformation()),
        ("weight_integral_reduction", 1e-8,
         lambda: _suite_weight_integral_reduction(spec_s, seed, corruption)),
        ("sphere_ball_transfer", 1e-8,
         lambda: _suite_sphere_ball_transfer(spec_s, seed)),
        ("simplex_kernel_two_route", 1e-8,
         lambda: _suite_simplex_kernel_two_route(seed)),
        ("ball_lift_convolution", 1e-8,
         lambda: _suite_ball_lift_convolution(spec_b, seed)),
        ("simplex_square_convolution", 1e-8,
         lambda: _suite_simplex_square_convolution(spec_b, seed)),
        ("simplex_translation_reflection", 1e-8,
         lambda: _suite_simplex_translation_reflection(spec_b, seed)),
        ("bernstein_durrmeyer_identification", 1e-8,
         lambda: _suite_bernstein_durrmeyer(seed)),
    ]
    for name, tol, fn in suites:
        err = fn()
        report.add_verdict(name, err, tol)
        report.rows.append({"suite": name, "max_error": err, "tolerance": tol,
                            "passed": err <= tol})
    report.summary["suites"] = {v.name: v.max_error for v in report.verdicts}
    return report


# ---------------------------------------------------------------------------
# converge


def run_convergence(cfg: ExperimentConfig) -> Report:
    """Error-vs-parameter sweep for one summation method and function."""
    report = Report("converge", cfg.echo())
    domain = cfg.domain
    spec = cfg.weight_spec()
    method = cfg.str_("method", "poisson")
    default_sched = {"poisson": "0.5,0.75,0.9,0.99", "dlvp": "4,8,16,32",
                     "cesaro": "4,8,16,32"}.get(method, "")
    schedule = cfg.floats("schedule", default_sched)
    if method in ("dlvp", "cesaro"):
        schedule = tuple(int(v) for v in schedule)
    delta = cfg.float_("delta", spec.index + 0.5) if method == "cesaro" else None
    fname = cfg.str_("function", "smooth")
    dim = spec.d + 1 if domain == "sphere" else spec.d
    f = catalog_field(fname, domain, dim)
    n_pts = cfg.int_("points", 50)
    points = evaluation_points(domain, spec, n_pts, cfg.seed)
    nmax = cfg.int_("nmax", 32)
    exactness = cfg.int_("exactness", max(2 * nmax, 48))
    rule = domain_rule(domain, spec, exactness)

    req = MeanRequest(method, schedule, domain, spec, points, delta, nmax)
    records = summation_mean(req, f, rule)
    f_at_points = f(points)
    medians = []
    for param in schedule:
        errs = []
        for rec in records:
            if rec["param"] != param:
                continue
            ip = rec["point_id"]
            err = abs(rec["value"] - f_at_points[ip])
            errs.append(err)
            row = {"method": method, "param": param, "point_id": ip}
            row.update({f"coord_{i}": c for i, c in enumerate(points[ip])})
            row.update({"f_value": float(f_at_points[ip]),
                        "mean_value": rec["value"], "abs_error": err})
            report.rows.append(row)
        medians.append(float(np.median(errs)))
    decreasing = all(b <= a + 1e-12 for a, b in zip(medians, medians[1:]))
    report.add_verdict("median_error_decreasing", 0.0 if decreasing else 1.0, 0.5,
                       detail=f"medians={['%.3e' % m for m in medians]}",
                       passed=decreasing)
    if fname == "smooth":
        report.add_verdict("smooth_final_error", medians[-1], 1e-2)
    report.summary["medians"] = medians
    report.summary["schedule"] = list(schedule)
    return report


# ---------------------------------------------------------------------------
# maximal / audit


def _grid_from(cfg: ExperimentConfig) -> ThetaGrid:
    return ThetaGrid.default(cfg.int_("grid_angles", 64))


def run_maximal(cfg: ExperimentConfig) -> Report:
    """Maximal-function values over seeded points."""
    report = Report("maximal", cfg.echo())
    domain = cfg.domain
    spec = cfg.weight_spec()
    dim = spec.d + 1 if domain == "sphere" else spec.d
    f = catalog_field(cfg.str_("function", "smooth"), domain, dim)
    points = evaluation_points(domain, spec, cfg.int_("points", 20), cfg.seed)
    rule = domain_rule(domain, spec, cfg.int_("exactness", 36))
    grid = _grid_from(cfg)
    table = CapAverageTable(domain, spec, points, grid, rule)
    vals, arg = table.maximal(f)
    for ip in range(points.shape[0]):
        row = {"point_id": ip}
        row.update({f"coord_{i}": c for i, c in enumerate(points[ip])})
        row.update({"m_value": float(vals[ip]), "argmax_theta": float(arg[ip])})
        report.rows.append(row)
    sup_f = float(np.max(np.abs(f(rule.points))))
    excess = float(np.max(vals)) - sup_f
    report.add_verdict("sup_norm_bound", max(excess, 0.0), 1e-8,
                       detail="max M(f) vs max node |f|")
    report.summary["max_value"] = float(np.max(vals))
    return report


def run_audit(cfg: ExperimentConfig) -> Report:
    """Majorization audit: fitted c* per summation method."""
    report = Report("audit", cfg.echo())
    domain = cfg.domain
    spec = cfg.weight_spec()
    dim = spec.d + 1 if domain == "sphere" else spec.d
    f = catalog_field(cfg.str_("function", "abs_power"), domain, dim)
    points = evaluation_points(domain, spec, cfg.int_("points", 20), cfg.seed)
    rule = domain_rule(domain, spec, cfg.int_("exactness", 48))
    grid = _grid_from(cfg)
    methods = []
    for name in cfg.strs("methods", "poisson,dlvp"):
        if name == "poisson":
            methods.append(("poisson", cfg.floats("poisson_schedule", "0.5,0.7,0.9,0.95")))
        elif name == "dlvp":
            sched = tuple(int(v) for v in cfg.floats("dlvp_schedule", "8,16,32"))
            methods.append(("dlvp", sched))
        elif name == "cesaro":
            sched = tuple(int(v) for v in cfg.floats("cesaro_schedule", "8,16,32"))
            methods.append(("cesaro", sched, cfg.float_("delta", spec.index + 0.5)))
        else:
            raise ConfigError(f"unknown audit method {name!r}")
    audit = majorization_audit(domain, spec, f, methods, points, grid, rule,
                               nmax=cfg.int_("nmax", 80))
    for mname, data in audit["methods"].items():
        report.rows.append({"method": mname, "c_star": data["c_star"],
                            "schedule": "|".join(str(s) for s in data["schedule"])})
        if mname.startswith("poisson"):
            report.add_verdict("poisson_majorization_constant",
                               data["c_star"], 1.0 + 5e-3,
                               detail="sup |Q_r f| / M f over schedule and points")
        else:
            report.add_verdict(f"{mname}_c_star_finite",
                               0.0 if math.isfinite(data["c_star"]) else 1.0, 0.5,
                               detail=f"c*={data['c_star']:.3e}",
                               passed=math.isfinite(data["c_star"]))
    report.summary["c_star"] = {m: d["c_star"] for m, d in audit["methods"].items()}
    report.summary["flagged_points"] = audit["flagged_points"]
    return report


# ---------------------------------------------------------------------------
# kernel-table / expand


def kernel_table(cfg: ExperimentConfig) -> Report:
    """Dump (theta, q(cos theta), majorant) for one kernel profile."""
    report = Report("kernel-table", cfg.echo())
    family = cfg.str_("family", "poisson")
    spec = cfg.weight_spec()
    idx = spec.index
    if family == "poisson":
        profile = poisson_profile(cfg.float_("r", 0.7), idx)
    elif family == "dlvp":
        profile = dlvp_profile(cfg.int_("n", 8), idx)
    elif family == "cesaro":
        n = cfg.int_("n", 8)
        delta = cfg.float_("delta", idx + 0.5)
        profile = cesaro_profile(n, delta, idx)
        profile = KernelProfileWithMajorant(profile, cesaro_majorant(n, delta, idx))
    elif family == "jacobi_poisson":
        profile = jacobi_poisson_profile(cfg.float_("r", 0.7), idx)
    else:
        raise ConfigError(f"unknown kernel family {family!r}")
    theta = np.linspace(0.0, math.pi, cfg.int_("grid_points", 181))
    q = profile.evaluate(np.cos(theta))
    maj = profile.majorant(theta) if profile.majorant is not None else None
    for i, th in enumerate(theta):
        row = {"theta": float(th), "q": float(q[i])}
        if maj is not None:
            row["majorant"] = float(maj[i])
        report.rows.append(row)
    mass_err = abs(profile.mass() - 1.0)
    report.add_verdict("profile_mass", mass_err, 1e-8)
    return report


class KernelProfileWithMajorant:
    """Pair a profile with an externally fitted majorant (Cesaro case)."""

    def __init__(self, profile, majorant):
        self._profile = profile
        self.majorant = majorant

    def evaluate(self, t):
        return self._profile.evaluate(t)

    def mass(self, n_points=None):
        return self._profile.mass(n_points)


def expand(cfg: ExperimentConfig) -> Report:
    """Dump projection values proj_n f at seeded points."""
    report = Report("expand", cfg.echo())
    domain = cfg.domain
    spec = cfg.weight_spec()
    dim = spec.d + 1 if domain == "sphere" else spec.d
    f = catalog_field(cfg.str_("function", "smooth"), domain, dim)
    points = evaluation_points(domain, spec, cfg.int_("points", 10), cfg.seed)
    nmax = cfg.int_("nmax", 16)
    rule = domain_rule(domain, spec, cfg.int_("exactness", max(2 * nmax, 32)))
    table = projection_table(domain, spec, rule, f, points, nmax)
    for n in range(nmax + 1):
        for ip in range(points.shape[0]):
            row = {"n": n, "point_id": ip}
            row.update({f"coord_{i}": c for i, c in enumerate(points[ip])})
            row["proj_value"] = float(table[n, ip])
            report.rows.append(row)
    report.summary["nmax"] = nmax
    return report
