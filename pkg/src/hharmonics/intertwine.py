"""Explicit intertwining operators for the product (sign-flip) group.

``V`` on R^(d+1) is the integral operator with per-coordinate density
(1 + t_i)(1 - t_i^2)^(kappa_i - 1) on [-1, 1]^(d+1), applied to
f(x_1 t_1, ..., x_{d+1} t_{d+1}).  Coordinates with kappa_i = 0 collapse
to the point t_i = 1: the (1 + t) factor weights t = -1 by zero in the
small-exponent limit, which reproduces the identity operator at
kappa = 0.  The ball variant symmetrizes the last coordinate, replacing
its density by (1 - t^2)^(mu - 1) (limit: average of t = +-1); the
simplex variant averages the ball operator over the sign orbit of the
first d coordinates.

Smooth integrands are evaluated by tensor Gauss-Jacobi quadrature.  Cap
indicator functions are pushed through the operator by integrating the
induced half-space over the product measure: the innermost coordinate
uses the analytic distribution function, outer coordinates use adaptive
piecewise Gauss rules whose endpoint exponents match the density.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sps

from .quadrature import WeightSpec, gauss_jacobi
from .specfun import JacobiParams, log_beta

__all__ = [
    "CapSpec",
    "VOperator",
    "make_v_operator",
    "v_apply",
    "v_indicator",
    "v_indicator_batch",
    "ExactnessError",
    "SubdivisionBudgetError",
]

CAP_KINDS = ("full_cap", "half_cap", "orthant_cap")

_EPS = 1e-15


class ExactnessError(ValueError):
    """Declared polynomial degree exceeds the operator's inner exactness."""


class SubdivisionBudgetError(RuntimeError):
    """Adaptive indicator integration hit its depth budget before tol."""


@dataclass(frozen=True)
class CapSpec:
    """A cap region whose indicator is pushed through the operator.

    ``full_cap``: {u : <center, u> >= cos theta} in the solid ball.
    ``half_cap``: additionally u_{d+1} >= 0 (ball maximal function).
    ``orthant_cap``: additionally u_i >= 0 for all i (simplex).
    """

    center: np.ndarray
    theta: float
    kind: str = "full_cap"

    def __post_init__(self) -> None:
        c = np.asarray(self.center, dtype=float)
        object.__setattr__(self, "center", c)
        if abs(np.linalg.norm(c) - 1.0) > 1e-12:
            raise ValueError("cap center must be a unit vector")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError("cap angle must lie in [0, pi]")
        if self.kind not in CAP_KINDS:
            raise ValueError(f"unknown cap kind {self.kind!r}")


class _PointAtom:
    """Collapsed coordinate: finitely many t values with masses."""

    is_point = True

    def __init__(self, values, masses):
        self.values = np.asarray(values, dtype=float)
        self.masses = np.asarray(masses, dtype=float)
        self.rule_nodes = self.values
        self.rule_weights = self.masses


class _ContAtom:
    """Continuous coordinate with density (1-t)^a (1+t)^b / norm.

    asym kind (kappa > 0): (a, b) = (kappa - 1, kappa);
    sym kind (mu > 0): (a, b) = (mu - 1, mu - 1).
    """

    is_point = False

    def __init__(self, kind: str, param: float, n_points: int):
        self.kind = kind
        self.param = float(param)
        if kind == "asym":
            self.a, self.b = self.param - 1.0, self.param
        elif kind == "sym":
            self.a, self.b = self.param - 1.0, self.param - 1.0
        else:
            raise ValueError(kind)
        rule = gauss_jacobi(n_points, JacobiParams(self.a, self.b))
        self.rule_nodes = rule.nodes
        self.rule_weights = rule.weights
        self._log_norm = (self.a + self.b + 1.0) * math.log(2.0) + log_beta(self.a + 1.0, self.b + 1.0)

    def cdf(self, s):
        """Measure of [-1, s] under the normalized density."""
        s = np.clip(np.asarray(s, dtype=float), -1.0, 1.0)
        u = (1.0 + s) / 2.0
        if self.kind == "sym":
            return sps.betainc(self.param, self.param, u)
        k = self.param
        even = sps.betainc(k, k, u)
        odd = -((1.0 - s * s) ** k) / (2.0 * k * math.exp(log_beta(0.5, k)))
        return even + odd

    def interval_mass(self, lo, hi):
        return np.maximum(self.cdf(hi) - self.cdf(lo), 0.0)


@dataclass(frozen=True)
class VOperator:
    """Immutable intertwining operator with fixed inner quadrature.

    ``kind`` is one of "sphere", "ball", "simplex"; ``degree`` is the
    polynomial degree the inner rules integrate exactly.  Applying the
    operator to the constant 1 gives 1; nonnegative integrands give
    nonnegative values.
    """

    kind: str
    weight_spec: WeightSpec
    degree: int
    atoms: tuple
    tensor_nodes: np.ndarray
    tensor_weights: np.ndarray
    sign_vectors: np.ndarray


def make_v_operator(kind: str, spec: WeightSpec, degree: int = 12) -> VOperator:
    """Build the operator for one weight configuration.

    ``degree`` sizes the per-coordinate Gauss rules (exact for
    polynomial integrands of that total degree).
    """
    if kind not in ("sphere", "ball", "simplex"):
        raise ValueError(f"unknown operator kind {kind!r}")
    m = degree // 2 + 1
    atoms: list = []
    if kind == "sphere":
        exps = spec.full_kappa
        for k in exps:
            atoms.append(_ContAtom("asym", k, m) if k > 0.0 else _PointAtom([1.0], [1.0]))
    else:
        if len(spec.kappa) != spec.d:
            raise ValueError("ball/simplex operators need d kappa entries plus mu")
        for k in spec.kappa:
            atoms.append(_ContAtom("asym", k, m) if k > 0.0 else _PointAtom([1.0], [1.0]))
        if spec.mu > 0.0:
            atoms.append(_ContAtom("sym", spec.mu, m))
        else:
            atoms.append(_PointAtom([-1.0, 1.0], [0.5, 0.5]))
    grids = np.meshgrid(*[a.rule_nodes for a in atoms], indexing="ij")
    wgts = np.meshgrid(*[a.rule_weights for a in atoms], indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.ones(nodes.shape[0])
    for w in wgts:
        weights *= w.ravel()
    if kind == "simplex":
        signs = np.array(list(itertools.product((-1.0, 1.0), repeat=spec.d)))
        signs = np.hstack([signs, np.ones((signs.shape[0], 1))])
    else:
        signs = np.ones((1, spec.d + 1))
    return VOperator(kind, spec, degree, tuple(atoms), nodes, weights, signs)


def v_apply(op: VOperator, f, x, degree: int | None = None) -> float:
    """Evaluate V[f](x) by tensor Gauss quadrature.

    ``f`` must accept an (m, d+1) array of points and return m values.
    If ``degree`` declares f polynomial of higher degree than the inner
    rules support, an ExactnessError is raised; undeclared integrands
    are integrated at the operator's fixed resolution.
    """
    if degree is not None and degree > op.degree:
        raise ExactnessError(
            f"declared degree {degree} exceeds inner exactness {op.degree}")
    x = np.asarray(x, dtype=float)
    total = 0.0
    for eps in op.sign_vectors:
        pts = op.tensor_nodes * (eps * x)[None, :]
        total += float(op.tensor_weights @ np.asarray(f(pts), dtype=float))
    return total / op.sign_vectors.shape[0]


def _constrained_coords(op: VOperator, cap: CapSpec) -> tuple[int, ...]:
    n = len(op.atoms)
    if cap.kind == "half_cap":
        return (n - 1,)
    if cap.kind == "orthant_cap":
        return tuple(range(n))
    return ()


def _range_for(y: float, constrained: bool) -> tuple[float, float]:
    if not constrained or y == 0.0:
        return (-1.0, 1.0)
    return (0.0, 1.0) if y > 0.0 else (-1.0, 0.0)


# ---------------------------------------------------------------------------
# scalar half-space probability over a product of continuous atoms

_TS_CACHE: dict[float, tuple[np.ndarray, np.ndarray]] = {}


def _ts_level(h: float):
    """tanh-sinh nodes: z = (pi/2) sinh(u) and weights on u in [-3.8, 3.8]."""
    if h not in _TS_CACHE:
        u = np.arange(-3.8, 3.8 + h / 2.0, h)
        z = 0.5 * math.pi * np.sinh(u)
        w = h * 0.5 * math.pi * np.cosh(u) / np.cosh(z) ** 2
        _TS_CACHE[h] = (z, w)
    return _TS_CACHE[h]


def _piece_quad(atom: _ContAtom, p: float, q: float, g, h: float) -> float:
    """integral over [p, q] of g(t) * density(t) dt by tanh-sinh.

    The double-exponential map absorbs the density's algebraic endpoint
    singularities and any integrable kink behavior of g at p or q;
    endpoint distances are formed without cancellation.
    """
    z, w = _ts_level(h)
    length = q - p
    dist_q = length / (1.0 + np.exp(2.0 * z))   # q - t
    dist_p = length - dist_q                    # t - p
    t = p + dist_p
    one_minus_t = np.maximum((1.0 - q) + dist_q, 1e-300)
    one_plus_t = np.maximum((1.0 + p) + dist_p, 1e-300)
    dens = np.exp(atom.a * np.log(one_minus_t) + atom.b * np.log(one_plus_t)
                  - atom._log_norm)
    vals = np.asarray(g(t), dtype=float) * dens
    return 0.5 * length * float(w @ vals)


def _adaptive_piece(atom, p, q, g, tol, depth) -> float:
    coarse = _piece_quad(atom, p, q, g, 0.2)
    fine = _piece_quad(atom, p, q, g, 0.1)
    if abs(fine - coarse) <= tol or (q - p) < 1e-13:
        return fine
    if depth <= 0:
        raise SubdivisionBudgetError(
            "indicator integration exceeded its subdivision depth budget")
    mid = 0.5 * (p + q)
    return (_adaptive_piece(atom, p, mid, g, tol / 2.0, depth - 1)
            + _adaptive_piece(atom, mid, q, g, tol / 2.0, depth - 1))


def _integrate_measure(atom, lo, hi, g, tol, breakpoints=(), depth=18) -> float:
    if hi - lo <= _EPS:
        return 0.0
    cuts = sorted({lo, hi, *(b for b in breakpoints if lo < b < hi)})
    total = 0.0
    piece_tol = tol / max(len(cuts) - 1, 1)
    for p, q in zip(cuts[:-1], cuts[1:]):
        total += _adaptive_piece(atom, p, q, g, piece_tol, depth)
    return total


def _two_coord_prob_rows(a_in, atom_in, lo_in, hi_in,
                         a_o, atom_o, lo_o, hi_o, rhs, h: float = 0.08):
    """P(a_in t_in + a_o t_o >= rhs) vectorized over rows.

    Splits the outer range at the two kink lines, then applies one
    fixed-level tanh-sinh rule per smooth piece; the double-exponential
    map absorbs both the outer density's endpoint exponents and the
    inner tail's fractional-power kink behavior.
    """
    z, w = _ts_level(h)
    frac_hi = 1.0 / (1.0 + np.exp(2.0 * z))        # fraction of length from q
    n_rows = rhs.shape[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        k1 = (rhs - a_in * lo_in) / a_o
        k2 = (rhs - a_in * hi_in) / a_o
    kl = np.minimum(k1, k2)
    kh = np.maximum(k1, k2)
    b1 = np.clip(kl, lo_o, hi_o)
    b2 = np.clip(kh, lo_o, hi_o)
    bounds = np.stack([lo_o, b1, b2, hi_o], axis=1)
    total = np.zeros(n_rows)
    for ip in range(3):
        p = bounds[:, ip]
        q = bounds[:, ip + 1]
        length = (q - p)[:, None]
        ok = length[:, 0] > _EPS
        if not ok.any():
            continue
        dist_q = length * frac_hi[None, :]
        dist_p = length - dist_q
        t = p[:, None] + dist_p
        one_minus_t = np.maximum((1.0 - q)[:, None] + dist_q, 1e-300)
        one_plus_t = np.maximum((1.0 + p)[:, None] + dist_p, 1e-300)
        dens = np.exp(atom_o.a * np.log(one_minus_t) + atom_o.b * np.log(one_plus_t)
                      - atom_o._log_norm)
        s = (rhs[:, None] - a_o[:, None] * t) / a_in[:, None]
        s = np.clip(s, lo_in[:, None], hi_in[:, None])
        hi_b = np.broadcast_to(hi_in[:, None], s.shape)
        lo_b = np.broadcast_to(lo_in[:, None], s.shape)
        tail = atom_in.interval_mass(s, hi_b)
        head = atom_in.interval_mass(lo_b, s)
        g = np.where(a_in[:, None] > 0, tail, head)
        piece = 0.5 * length[:, 0] * ((g * dens) @ w)
        total += np.where(ok, piece, 0.0)
    return total


def _halfspace_prob(active, rhs, tol):
    """P(sum_i a_i t_i >= rhs), t_i independent with atom measures on ranges.

    ``active`` is a list of (a, atom, lo, hi) with a != 0.  The factor
    measures are *not* renormalized to their ranges; the caller folds
    range masses of inert coordinates separately.
    """
    if not active:
        return 1.0 if rhs <= _EPS else 0.0
    if len(active) == 1:
        a, atom, lo, hi = active[0]
        s = min(max(rhs / a, lo), hi)
        if a > 0:
            return float(atom.interval_mass(s, hi))
        return float(atom.interval_mass(lo, s))
    # innermost coordinate: largest slope, handled analytically inside
    order = sorted(range(len(active)), key=lambda i: abs(active[i][0]))
    outer_idx = order[0]
    a_o, atom_o, lo_o, hi_o = active[outer_idx]
    rest = [active[i] for i in range(len(active)) if i != outer_idx]

    breakpoints = []
    if len(rest) == 1:
        a_in, atom_in, lo_in, hi_in = rest[0]
        for s_star in (lo_in, hi_in):
            breakpoints.append((rhs - a_in * s_star) / a_o)

        def g(t_vec):
            s = (rhs - a_o * np.asarray(t_vec, dtype=float)) / a_in
            s = np.clip(s, lo_in, hi_in)
            if a_in > 0:
                return atom_in.interval_mass(s, hi_in)
            return atom_in.interval_mass(lo_in, s)
    else:
        def g(t_vec):
            return np.array([_halfspace_prob(rest, rhs - a_o * t, tol / 5.0)
                             for t in np.atleast_1d(t_vec)])

    return _integrate_measure(atom_o, lo_o, hi_o, g, tol, breakpoints)


# ---------------------------------------------------------------------------
# batched indicator evaluation

def _vb_indicator_rows(op: VOperator, cap: CapSpec, Y: np.ndarray, tol: float) -> np.ndarray:
    """Indicator through the sphere/ball operator, vectorized over rows of Y."""
    n_rows = Y.shape[0]
    constrained = set(_constrained_coords(op, cap))
    b = math.cos(cap.theta)
    A = Y * cap.center[None, :]

    cont_idx = [i for i, at in enumerate(op.atoms) if not at.is_point]
    active_pattern = np.abs(A[:, cont_idx]) > _EPS if cont_idx else np.zeros((n_rows, 0), bool)
    patterns = {tuple(row) for row in active_pattern}
    if len(patterns) > 1:
        # mixed activity across rows: split and recurse per pattern
        out = np.empty(n_rows)
        for pat in patterns:
            mask = np.all(active_pattern == np.asarray(pat, bool), axis=1)
            out[mask] = _vb_indicator_rows(op, cap, Y[mask], tol)
        return out

    if n_rows == 0:
        return np.zeros(0)
    active_cont = [i for j, i in enumerate(cont_idx) if active_pattern[0, j]]
    inert_cont = [i for i in cont_idx if i not in active_cont]
    point_idx = [i for i, at in enumerate(op.atoms) if at.is_point]

    values = np.zeros(n_rows)
    point_combos = itertools.product(*[
        list(zip(op.atoms[i].values, op.atoms[i].masses)) for i in point_idx
    ]) if point_idx else [()]

    for combo in point_combos:
        mass = 1.0
        b_eff = np.full(n_rows, b)
        ok = np.ones(n_rows, dtype=bool)
        for i, (tval, tmass) in zip(point_idx, combo):
            mass *= tmass
            b_eff -= A[:, i] * tval
            if i in constrained:
                ok &= Y[:, i] * tval >= -_EPS
        if mass == 0.0 or not ok.any():
            continue
        factor = np.full(n_rows, mass)
        for i in inert_cont:
            atom = op.atoms[i]
            if i in constrained:
                lo = np.where(Y[:, i] > 0.0, 0.0, -1.0)
                hi = np.where(Y[:, i] < 0.0, 0.0, 1.0)
                factor = factor * atom.interval_mass(lo, hi)
            # unconstrained inert coordinate has mass 1
        if len(active_cont) == 0:
            contrib = (b_eff <= _EPS).astype(float)
        elif len(active_cont) == 1:
            i = active_cont[0]
            atom = op.atoms[i]
            a = A[:, i]
            if i in constrained:
                lo = np.where(Y[:, i] > 0.0, 0.0, -1.0)
                hi = np.where(Y[:, i] < 0.0, 0.0, 1.0)
            else:
                lo = np.full(n_rows, -1.0)
                hi = np.full(n_rows, 1.0)
            s = b_eff / a
            s_cl = np.clip(s, lo, hi)
            tail = atom.interval_mass(s_cl, hi)
            head = atom.interval_mass(lo, s_cl)
            contrib = np.where(a > 0, tail, head)
        elif len(active_cont) == 2:
            ranges = []
            for i in active_cont:
                if i in constrained:
                    lo = np.where(Y[:, i] > 0.0, 0.0, -1.0)
                    hi = np.where(Y[:, i] < 0.0, 0.0, 1.0)
                else:
                    lo = np.full(n_rows, -1.0)
                    hi = np.full(n_rows, 1.0)
                ranges.append((lo, hi))
            # inner coordinate fixed across rows: the steeper one on median
            if np.median(np.abs(A[:, active_cont[0]])) >= np.median(np.abs(A[:, active_cont[1]])):
                i_in, i_o = active_cont
                (lo_in, hi_in), (lo_o, hi_o) = ranges
            else:
                i_o, i_in = active_cont
                (lo_o, hi_o), (lo_in, hi_in) = ranges
            contrib = _two_coord_prob_rows(A[:, i_in], op.atoms[i_in], lo_in, hi_in,
                                           A[:, i_o], op.atoms[i_o], lo_o, hi_o,
                                           b_eff)
        else:
            contrib = np.empty(n_rows)
            for r in range(n_rows):
                if not ok[r]:
                    contrib[r] = 0.0
                    continue
                active = []
                for i in active_cont:
                    if i in constrained:
                        lo_r, hi_r = _range_for(Y[r, i], True)
                    else:
                        lo_r, hi_r = -1.0, 1.0
                    active.append((A[r, i], op.atoms[i], lo_r, hi_r))
                contrib[r] = _halfspace_prob(active, float(b_eff[r]), tol)
        values += np.where(ok, factor * contrib, 0.0)
    return np.clip(values, 0.0, 1.0)


def v_indicator_batch(op: VOperator, cap: CapSpec, Y, tol: float = 1e-6) -> np.ndarray:
    """V[indicator of cap](y) for each row y of Y, clamped to [0, 1]."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if Y.shape[1] != len(op.atoms):
        raise ValueError("point dimension does not match the operator")
    total = np.zeros(Y.shape[0])
    for eps in op.sign_vectors:
        total += _vb_indicator_rows(op, cap, Y * eps[None, :], tol)
    return np.clip(total / op.sign_vectors.shape[0], 0.0, 1.0)


def v_indicator(op: VOperator, cap: CapSpec, y, tol: float = 1e-6) -> float:
    """V[indicator of cap](y) to absolute accuracy tol, in [0, 1]."""
    return float(v_indicator_batch(op, cap, np.asarray(y)[None, :], tol)[0])
