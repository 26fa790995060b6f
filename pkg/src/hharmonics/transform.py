"""Convolutions, projections, summation means, translations, cap averages.

All operators are realized against a fixed DomainRule, so integrals and
L^p norms share one discretization.  The zonal structure is exploited
throughout: for an evaluation point x and rule nodes y_j, the inner
intertwining integral only sees the scalars

    A[j, m] = <x, y_j o t_m>        (o = componentwise product)

so a single recurrence sweep over the (j, m) array yields every degree
of the Gegenbauer (or Jacobi) family at once.  Projections, partial
sums, summation means and translations are all linear combinations of
those sweeps.

Conventions
-----------
* Ball points lift to X = (x, sqrt(1 - |x|^2)); simplex points lift to
  X~ = (sqrt(x_1), ..., sqrt(x_d), sqrt(1 - |x|)).
* Simplex kernels live on the Jacobi side (parameters (l - 1/2, -1/2),
  l = lambda_kappa + mu) and take doubled-angle arguments 2 s^2 - 1.
  Simplex means are never derived from ball means: the quadratic change
  of variable does not commute with summability.
* The sphere/ball translation operator acts diagonally on projections
  with multiplier C_n^l(cos theta)/C_n^l(1); on the simplex the
  multiplier is p_n(cos 2 theta)/p_n(1).  The multiplier form is the
  unique continuous representative of the implicitly defined operator
  and is verified against the defining identity in the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sps

from . import specfun
from .intertwine import VOperator, make_v_operator
from .kernels import KernelProfile, dlvp_coeffs, cesaro_weights
from .quadrature import DomainRule, WeightSpec, ball_lift, simplex_lift
from .specfun import JacobiParams

__all__ = [
    "ScalarField",
    "MeanRequest",
    "TruncationError",
    "field_values",
    "convolve",
    "project",
    "projection_table",
    "partial_sum",
    "summation_mean",
    "method_coefficients",
    "translate",
    "translation_multipliers",
    "cap_average",
    "cap_average_two_forms",
    "quad_norm",
    "bernstein_durrmeyer",
]


class TruncationError(RuntimeError):
    """A truncated multiplier series did not converge to tolerance."""


@dataclass(frozen=True)
class ScalarField:
    """A real-valued function on one domain, consumed through sampling.

    ``func`` must be vectorized: it receives an (m, dim) array of points
    and returns m values.
    """

    domain: str
    func: object
    label: str = ""

    def __call__(self, points: np.ndarray) -> np.ndarray:
        vals = np.asarray(self.func(np.atleast_2d(points)), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ArithmeticError(f"field {self.label!r} is not finite at a rule node")
        return vals


@dataclass(frozen=True)
class MeanRequest:
    """A summation-method sweep: method, schedule and evaluation points."""

    method: str                      # poisson | dlvp | cesaro
    schedule: tuple
    domain: str
    weight_spec: WeightSpec
    points: np.ndarray
    delta: float | None = None       # cesaro order
    nmax: int = 32

    def __post_init__(self) -> None:
        sched = tuple(self.schedule)
        if len(sched) == 0:
            raise ValueError("empty schedule")
        if any(b <= a for a, b in zip(sched, sched[1:])):
            raise ValueError("schedule must increase strictly toward the limit")
        object.__setattr__(self, "schedule", sched)
        object.__setattr__(self, "points", np.atleast_2d(np.asarray(self.points, dtype=float)))
        if self.method not in ("poisson", "dlvp", "cesaro"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "cesaro" and (self.delta is None or self.delta <= 0.0):
            raise ValueError("cesaro request needs a positive delta")


def field_values(f, rule: DomainRule) -> np.ndarray:
    """Sample a field (ScalarField or plain vectorized callable) at rule nodes."""
    if isinstance(f, np.ndarray):
        return np.asarray(f, dtype=float)
    return np.asarray(f(rule.points), dtype=float)


def _lift_for(domain: str, points: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if domain == "sphere":
        return pts
    if domain == "ball":
        return ball_lift(pts)
    if domain == "simplex":
        return simplex_lift(pts)
    raise ValueError(f"unknown domain {domain!r}")


def _operator_kind(domain: str) -> str:
    return {"sphere": "sphere", "ball": "ball", "simplex": "simplex"}[domain]


def _op_spec(domain: str, spec: WeightSpec) -> WeightSpec:
    if domain == "sphere" and len(spec.kappa) == spec.d:
        return spec.lifted()
    return spec


def default_operator(domain: str, spec: WeightSpec, degree: int) -> VOperator:
    """Intertwining operator sized for degree-``degree`` kernels.

    Simplex kernels take doubled-angle arguments, so their inner
    integrands have twice the polynomial degree in the lifted
    coordinates.
    """
    inner = 2 * degree if domain == "simplex" else degree
    return make_v_operator(_operator_kind(domain), _op_spec(domain, spec), max(inner, 1))


def _zonal_args(op: VOperator, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """A[j, m] = <X, Y_j o t_m> for every node row Y_j and tensor row t_m."""
    return (Y * X[None, :]) @ op.tensor_nodes.T


def convolve(domain: str, spec: WeightSpec, f, q, x, rule: DomainRule,
             op: VOperator | None = None, degree: int | None = None) -> float:
    """(f * q)(x): weighted integral of f against the smeared kernel.

    ``q`` is a KernelProfile (or plain callable on [-1, 1]); on the
    simplex it is applied in the doubled-angle convention.
    """
    if op is None:
        op = default_operator(domain, spec, degree if degree is not None else 24)
    q_eval = q.evaluate if isinstance(q, KernelProfile) else q
    fv = field_values(f, rule)
    Y = _lift_for(domain, rule.points)
    X = _lift_for(domain, np.asarray(x, dtype=float)[None, :])[0]
    smeared = np.zeros(Y.shape[0])
    for eps in op.sign_vectors:
        A = _zonal_args(op, X * eps, Y)
        if domain == "simplex":
            A = 2.0 * A * A - 1.0
        smeared += np.asarray(q_eval(A), dtype=float) @ op.tensor_weights
    smeared /= op.sign_vectors.shape[0]
    return float(np.sum(rule.weights * fv * smeared))


def projection_table(domain: str, spec: WeightSpec, rule: DomainRule, f,
                     points, nmax: int, op: VOperator | None = None) -> np.ndarray:
    """proj_n f at each evaluation point for n = 0..nmax.

    Returns an array of shape (nmax + 1, n_points).  One recurrence
    sweep per evaluation point covers all degrees.
    """
    if op is None:
        op = default_operator(domain, spec, max(nmax, 1))
    lam = _op_spec(domain, spec).index
    fv = field_values(f, rule)
    wf = rule.weights * fv
    Y = _lift_for(domain, rule.points)
    pts = _lift_for(domain, points)
    W = op.tensor_weights
    out = np.empty((nmax + 1, pts.shape[0]))
    jacobi = domain == "simplex"
    if jacobi:
        params = JacobiParams(lam - 0.5, -0.5)
        norms = np.array([math.exp(-0.5 * specfun._jacobi_log_sq_norm(n, params))
                          for n in range(nmax + 1)])
        p_one = np.array([specfun.jacobi_at_one(n, params) for n in range(nmax + 1)])
        a, b = params.alpha, params.beta
    for ip in range(pts.shape[0]):
        acc = [np.zeros(Y.shape[0]) for _ in range(nmax + 1)]
        for eps in op.sign_vectors:
            A = _zonal_args(op, pts[ip] * eps, Y)
            if jacobi:
                A = 2.0 * A * A - 1.0
                prev = np.ones_like(A)
                cur = 0.5 * ((a + b + 2.0) * A + (a - b)) if nmax >= 1 else None
                acc[0] += prev @ W
                if nmax >= 1:
                    acc[1] += cur @ W
                for n in range(2, nmax + 1):
                    s = 2.0 * n + a + b
                    c1 = 2.0 * n * (n + a + b) * (s - 2.0)
                    c2 = (s - 1.0) * (a * a - b * b)
                    c3 = (s - 2.0) * (s - 1.0) * s
                    c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s
                    prev, cur = cur, ((c2 + c3 * A) * cur - c4 * prev) / c1
                    acc[n] += cur @ W
            else:
                prev = np.ones_like(A)
                cur = 2.0 * lam * A if nmax >= 1 else None
                acc[0] += prev @ W
                if nmax >= 1:
                    acc[1] += cur @ W
                for n in range(2, nmax + 1):
                    prev, cur = cur, (2.0 * (n + lam - 1.0) * A * cur
                                      - (n + 2.0 * lam - 2.0) * prev) / n
                    acc[n] += cur @ W
        n_sign = op.sign_vectors.shape[0]
        for n in range(nmax + 1):
            s_n = acc[n] / n_sign
            if jacobi:
                out[n, ip] = p_one[n] * norms[n] * float(wf @ s_n)
            else:
                out[n, ip] = (n + lam) / lam * float(wf @ s_n)
    return out


def project(domain: str, spec: WeightSpec, f, n: int, x, rule: DomainRule,
            op: VOperator | None = None) -> float:
    """Projection of f onto the degree-n orthogonal component, at x."""
    table = projection_table(domain, spec, rule, f,
                             np.asarray(x, dtype=float)[None, :], n, op)
    return float(table[n, 0])


def partial_sum(domain: str, spec: WeightSpec, f, nmax: int, points,
                rule: DomainRule, op: VOperator | None = None) -> np.ndarray:
    """sum_{n <= nmax} proj_n f at the evaluation points."""
    return projection_table(domain, spec, rule, f, points, nmax, op).sum(axis=0)


def method_coefficients(method: str, param, lam: float, nmax: int,
                        delta: float | None = None) -> np.ndarray:
    """Series coefficients a_0..a_nmax of one summation method."""
    if method == "poisson":
        return float(param) ** np.arange(nmax + 1)
    if method == "dlvp":
        return dlvp_coeffs(int(param), lam, nmax)
    if method == "cesaro":
        n = int(param)
        A = cesaro_weights(n, delta)
        out = np.zeros(nmax + 1)
        top = min(n, nmax)
        out[: top + 1] = A[n - np.arange(top + 1)] / A[n]
        return out
    raise ValueError(f"unknown method {method!r}")


def summation_mean(req: MeanRequest, f, rule: DomainRule,
                   op: VOperator | None = None) -> list[dict]:
    """Evaluate the requested summation means at the requested points.

    Returns one record per (parameter, point) with the mean value.  The
    series route is used: Q f = sum_n a_n(parameter) proj_n f, which on
    the simplex keeps the Jacobi-side kernels.
    """
    spec = req.weight_spec
    lam = _op_spec(req.domain, spec).index
    nmax = req.nmax
    if req.method in ("dlvp", "cesaro"):
        nmax = max(nmax, int(max(req.schedule)))
    table = projection_table(req.domain, spec, rule, f, req.points, nmax, op)
    records = []
    for param in req.schedule:
        coeffs = method_coefficients(req.method, param, lam, nmax, req.delta)
        vals = coeffs @ table
        for ip in range(req.points.shape[0]):
            records.append({
                "method": req.method, "param": param, "point_id": ip,
                "point": req.points[ip], "value": float(vals[ip]),
            })
    return records


def translation_multipliers(domain: str, spec: WeightSpec, theta: float,
                            nmax: int) -> np.ndarray:
    """Multipliers of the generalized translation at angle theta."""
    lam = _op_spec(domain, spec).index
    if domain == "simplex":
        params = JacobiParams(lam - 0.5, -0.5)
        tab = specfun.jacobi_orthonormal_table(nmax, params, np.array(math.cos(2.0 * theta)))
        ones = np.array([specfun.jacobi_at_one(n, params) for n in range(nmax + 1)])
        return tab.reshape(nmax + 1) / ones
    num = specfun.gegenbauer_table(nmax, lam, np.array(math.cos(theta))).reshape(nmax + 1)
    den = np.array([specfun.gegenbauer_at_one(n, lam) for n in range(nmax + 1)])
    return num / den


def translate(domain: str, spec: WeightSpec, f, theta: float, x,
              rule: DomainRule, nmax: int = 24, tail_tol: float = 1e-9,
              op: VOperator | None = None, f_degree: int | None = None) -> float:
    """Generalized translation T_theta f at x (truncated multiplier series).

    Exact for polynomial inputs of degree <= nmax (declare via
    ``f_degree`` to skip the tail check); otherwise signals
    TruncationError when the top retained terms are still above
    ``tail_tol`` relative to the result scale.
    """
    pts = np.asarray(x, dtype=float)[None, :]
    table = projection_table(domain, spec, rule, f, pts, nmax, op)
    mult = translation_multipliers(domain, spec, theta, nmax)
    terms = mult * table[:, 0]
    result = float(terms.sum())
    if f_degree is None or f_degree > nmax:
        tail = np.max(np.abs(terms[-2:])) if nmax >= 1 else 0.0
        if tail > tail_tol * max(1.0, abs(result)):
            raise TruncationError(
                f"translation series tail {tail:.2e} above tolerance at nmax={nmax}")
    return result


# ---------------------------------------------------------------------------
# cap averages


def _angular_exponent(domain: str, spec: WeightSpec) -> float:
    return 2.0 * _op_spec(domain, spec).index


def _cap_kind(domain: str) -> str:
    return {"sphere": "full_cap", "ball": "half_cap", "simplex": "orthant_cap"}[domain]


def cap_average(domain: str, spec: WeightSpec, f, theta: float, x,
                rule: DomainRule, tol: float = 1e-6,
                op: VOperator | None = None) -> float:
    """Cap average of f at x: ratio of weighted integrals against the
    smeared cap indicator (primary form)."""
    from .intertwine import CapSpec, v_indicator_batch

    if not 0.0 < theta <= math.pi:
        raise ValueError("cap angle must lie in (0, pi]")
    if op is None:
        op = default_operator(domain, spec, 2)
    center = _lift_for(domain, np.asarray(x, dtype=float)[None, :])[0]
    cap = CapSpec(center, theta, _cap_kind(domain))
    Y = _lift_for(domain, rule.points)
    v = v_indicator_batch(op, cap, Y, tol)
    den = float(rule.weights @ v)
    if den < 1e-13:
        raise ValueError(f"cap angle {theta:.3e} is below the rule's resolution")
    num = float((rule.weights * field_values(f, rule)) @ v)
    return num / den


def cap_average_two_forms(domain: str, spec: WeightSpec, f, theta: float, x,
                          rule: DomainRule, tol: float = 1e-6, nmax: int = 48,
                          op: VOperator | None = None,
                          quad_points: int = 96) -> tuple[float, float]:
    """Cap average by the indicator-ratio form and by averaging the
    translation over [0, theta]; the two agree within combined
    tolerances."""
    primary = cap_average(domain, spec, f, theta, x, rule, tol, op)

    pts = np.asarray(x, dtype=float)[None, :]
    table = projection_table(domain, spec, rule, f, pts, nmax, op)
    expo = _angular_exponent(domain, spec)
    nodes, weights = sps.roots_legendre(quad_points)
    phi = 0.5 * theta * (nodes + 1.0)
    w = 0.5 * theta * weights * np.sin(phi) ** expo
    mult = np.stack([translation_multipliers(domain, spec, p, nmax) for p in phi], axis=1)
    i_n = mult @ w
    secondary = float((i_n * table[:, 0]).sum() / i_n[0])
    return primary, secondary


def quad_norm(rule: DomainRule, values: np.ndarray, p: float = 1.0) -> float:
    """Quadrature L^p norm of node values against the rule's measure."""
    values = np.abs(np.asarray(values, dtype=float))
    if p == math.inf:
        return float(values.max())
    return float((rule.weights @ values**p) ** (1.0 / p))


# ---------------------------------------------------------------------------
# Bernstein basis operator on the simplex


def _multi_indices(d: int, n: int):
    if d == 0:
        yield ()
        return
    for head in range(n + 1):
        for rest in _multi_indices(d - 1, n - head):
            yield (head,) + rest


def bernstein_durrmeyer(f, n: int, spec: WeightSpec, x, rule: DomainRule) -> float:
    """Degree-n Bernstein basis integral operator on the simplex.

    sum over |alpha| <= n of [integral of f B_alpha W / integral of
    B_alpha W] B_alpha(x), with B_alpha the degree-n Bernstein basis.
    Denominators use Beta closed forms; numerators use the rule.
    """
    if len(spec.kappa) != spec.d:
        raise ValueError("simplex spec needs d kappa entries plus mu")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    fv = field_values(f, rule)
    pts = rule.points
    kappa = np.asarray(spec.kappa)
    lam_top = spec.gamma + spec.mu + (spec.d + 1) / 2.0
    log_norm_mass = (sum(sps.gammaln(k + 0.5) for k in spec.kappa)
                     + sps.gammaln(spec.mu + 0.5) - sps.gammaln(lam_top))

    last_pts = 1.0 - pts.sum(axis=1)
    last_x = 1.0 - x.sum()
    total = 0.0
    for alpha in _multi_indices(spec.d, n):
        a = np.asarray(alpha, dtype=float)
        rem = n - int(a.sum())
        log_multi = (sps.gammaln(n + 1.0) - sum(sps.gammaln(ai + 1.0) for ai in a)
                     - sps.gammaln(rem + 1.0))
        # integral of B_alpha against the normalized weight, closed form
        log_den = (log_multi
                   + sum(sps.gammaln(ai + ki + 0.5) for ai, ki in zip(a, kappa))
                   + sps.gammaln(rem + spec.mu + 0.5)
                   - sps.gammaln(n + lam_top) - log_norm_mass)
        den = math.exp(log_den)
        b_nodes = np.exp(log_multi
                         + (np.log(pts) @ a)
                         + rem * np.log(last_pts))
        num = float((rule.weights * fv) @ b_nodes)
        b_x = math.exp(log_multi + float(np.log(x) @ a) + rem * math.log(last_x)) \
            if np.all(x > 0.0) and last_x > 0.0 else \
            float(np.exp(log_multi) * np.prod(x**a) * last_x**rem)
        total += (num / den) * b_x
    return total
