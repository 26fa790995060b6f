"""Maximal functions and summation-method majorization audits.

The maximal function at x is the supremum over cap angles of the cap
averages of |f|; the supremum is realized on a finite angle grid, which
makes the computed value a certified lower bound of the true supremum.
All one-sided domination claims are therefore tested with the same grid
on both sides.  Caps are full caps on the sphere, upper half caps on the
ball (last lifted coordinate nonnegative) and orthant caps on the
simplex.

An audit evaluates a summation method over its schedule and reports the
fitted constant c* = sup over the schedule and points of |Q f| / M f
(0/0 resolving to 0); for the Poisson method the constant is exactly 1
up to grid and quadrature slack.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .intertwine import CapSpec, VOperator, v_indicator_batch
from .quadrature import DomainRule, WeightSpec
from .transform import (_cap_kind, _lift_for, _op_spec, default_operator,
                        field_values, method_coefficients, projection_table)

__all__ = [
    "ThetaGrid",
    "MaximalReport",
    "CapAverageTable",
    "maximal",
    "maximal_report",
    "majorization_audit",
]

_DEN_FLOOR = 1e-13
_RATIO_FLOOR = 1e-12


@dataclass(frozen=True)
class ThetaGrid:
    """Strictly increasing cap angles in (0, pi], pi included."""

    angles: np.ndarray
    descriptor: str = ""

    def __post_init__(self) -> None:
        a = np.asarray(self.angles, dtype=float)
        object.__setattr__(self, "angles", a)
        if a.size == 0 or np.any(np.diff(a) <= 0.0):
            raise ValueError("angles must be nonempty and strictly increasing")
        if not 0.0 < a[0] or abs(a[-1] - math.pi) > 1e-12:
            raise ValueError("angles must lie in (0, pi] and include pi")

    @staticmethod
    def default(n: int = 64, k_geo: int = 16) -> "ThetaGrid":
        """Geometric angles pi * 2^-k plus a uniform tail up to pi."""
        geo = math.pi * 2.0 ** (-np.arange(1, k_geo + 1, dtype=float))
        uni = np.linspace(math.pi / 16.0, math.pi, max(n - k_geo, 2))
        angles = np.unique(np.concatenate([geo, uni]))
        return ThetaGrid(angles, f"geometric(k<={k_geo}) + uniform({len(uni)})")


@dataclass(frozen=True)
class MaximalReport:
    """Grid-sup maximal values with per-point argmax angles."""

    points: np.ndarray
    values: np.ndarray
    argmax_theta: np.ndarray
    method: str = "indicator-ratio"
    grid: ThetaGrid | None = None


class CapAverageTable:
    """Precomputed smeared-cap geometry for fixed points, grid and rule.

    The per-(point, angle) indicator vectors are computed once; cap
    averages for any field are then weighted dot products, so audits
    over several fields reuse the expensive part.  Angles whose smeared
    cap carries no quadrature mass are masked out.
    """

    def __init__(self, domain: str, spec: WeightSpec, points, grid: ThetaGrid,
                 rule: DomainRule, tol: float = 1e-6,
                 op: VOperator | None = None):
        self.domain = domain
        self.spec = spec
        self.points = np.atleast_2d(np.asarray(points, dtype=float))
        self.grid = grid
        self.rule = rule
        self.tol = tol
        self.op = op if op is not None else default_operator(domain, spec, 2)
        kind = _cap_kind(domain)
        Y = _lift_for(domain, rule.points)
        centers = _lift_for(domain, self.points)
        n_pts, n_ang = self.points.shape[0], grid.angles.size
        self._num_weights = np.zeros((n_pts, n_ang, rule.points.shape[0]))
        self._den = np.zeros((n_pts, n_ang))
        for ip in range(n_pts):
            for ia, theta in enumerate(grid.angles):
                cap = CapSpec(centers[ip], float(theta), kind)
                v = v_indicator_batch(self.op, cap, Y, tol)
                self._num_weights[ip, ia] = rule.weights * v
                self._den[ip, ia] = float(rule.weights @ v)
        self.valid = self._den >= _DEN_FLOOR

    def averages(self, f) -> np.ndarray:
        """Cap averages of f: shape (n_points, n_angles), NaN where the
        angle is below the rule's resolution."""
        fv = field_values(f, self.rule)
        num = self._num_weights @ fv
        out = np.full(self._den.shape, np.nan)
        out[self.valid] = num[self.valid] / self._den[self.valid]
        return out

    def maximal(self, f) -> tuple[np.ndarray, np.ndarray]:
        """Grid-sup maximal values of |f| and the per-point argmax angle."""
        fv = np.abs(field_values(f, self.rule))
        avg = self.averages(fv)
        masked = np.where(np.isnan(avg), -np.inf, avg)
        idx = np.argmax(masked, axis=1)
        vals = masked[np.arange(masked.shape[0]), idx]
        return vals, self.grid.angles[idx]


def maximal(domain: str, spec: WeightSpec, f, x, grid: ThetaGrid,
            rule: DomainRule, tol: float = 1e-6,
            op: VOperator | None = None) -> float:
    """Maximal function of f at x: grid-sup of cap averages of |f|."""
    table = CapAverageTable(domain, spec, np.asarray(x, dtype=float)[None, :],
                            grid, rule, tol, op)
    vals, _ = table.maximal(f)
    return float(vals[0])


def maximal_report(domain: str, spec: WeightSpec, f, points, grid: ThetaGrid,
                   rule: DomainRule, tol: float = 1e-6,
                   op: VOperator | None = None) -> MaximalReport:
    table = CapAverageTable(domain, spec, points, grid, rule, tol, op)
    vals, arg = table.maximal(f)
    return MaximalReport(table.points, vals, arg, grid=grid)


def majorization_audit(domain: str, spec: WeightSpec, f, methods, points,
                       grid: ThetaGrid, rule: DomainRule, nmax: int = 48,
                       tol: float = 1e-6, op_degree: int | None = None) -> dict:
    """Fitted majorization constants c* per summation method.

    ``methods`` is a list of (name, schedule) or (name, schedule, delta)
    entries with name in {poisson, dlvp, cesaro}.  Returns a report dict
    with per-method c*, per-point ratios, and flags for points whose
    maximal value sits below the numeric floor.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    lam = _op_spec(domain, spec).index
    op = default_operator(domain, spec, max(nmax, op_degree or 0))
    table = CapAverageTable(domain, spec, points, grid, rule, tol)
    m_vals, m_arg = table.maximal(f)

    needed = nmax
    for entry in methods:
        name, schedule = entry[0], entry[1]
        if name in ("dlvp", "cesaro"):
            needed = max(needed, int(max(schedule)))
    proj = projection_table(domain, spec, rule, f, points, needed, op)

    flagged = [int(i) for i in np.nonzero(m_vals < _RATIO_FLOOR)[0]]
    report = {"methods": {}, "maximal": m_vals, "argmax_theta": m_arg,
              "flagged_points": flagged}
    for entry in methods:
        name, schedule = entry[0], entry[1]
        delta = entry[2] if len(entry) > 2 else None
        ratios = np.zeros(points.shape[0])
        for param in schedule:
            coeffs = method_coefficients(name, param, lam, needed, delta)
            q_vals = np.abs(coeffs @ proj)
            with np.errstate(invalid="ignore", divide="ignore"):
                r = np.where(m_vals > _RATIO_FLOOR, q_vals / np.maximum(m_vals, _RATIO_FLOOR),
                             np.where(q_vals > _RATIO_FLOOR, np.inf, 0.0))
            ratios = np.maximum(ratios, r)
        report["methods"][name if delta is None else f"{name}(delta={delta})"] = {
            "c_star": float(np.max(ratios)),
            "ratios": ratios,
            "schedule": tuple(schedule),
        }
    return report
