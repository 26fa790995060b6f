"""Reproducing kernels and univariate summability kernel profiles.

Degree-n reproducing kernels on the three domains are evaluated through
the intertwining operator:

    sphere   (n+l)/l * V[C_n^l(<., y>)](x),                l = lambda_kappa
    ball     (n+l)/l * V_B[C_n^l(<., Y>)](X),              l = lambda_kappa + mu
    simplex  p_n(1) * V_T[p_n(2 <., Y~>^2 - 1)](X~),       Jacobi (l - 1/2, -1/2)

with X, Y the ball lifts and X~, Y~ the simplex square-root lifts.

Profiles are univariate kernels q(t) on [-1, 1] driving the summation
methods: Poisson, de la Vallee Poussin (closed form), Cesaro (C, delta)
and the Jacobi-Poisson kernel used on the simplex.  Simplex profiles
carry the doubled-angle argument convention explicitly (the profile is
applied to 2 s^2 - 1), so call sites never re-derive it.  Each profile
has total mass one against its normalized weight; profiles with a known
decreasing pointwise bound expose it as a Majorant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .intertwine import make_v_operator, v_apply
from .quadrature import WeightSpec, ball_lift, gauss_jacobi, simplex_lift
from .specfun import GegenbauerIndex, JacobiParams, log_pochhammer

__all__ = [
    "KernelProfile",
    "Majorant",
    "poisson_profile",
    "dlvp_profile",
    "dlvp_coeffs",
    "cesaro_profile",
    "cesaro_majorant",
    "cesaro_weights",
    "jacobi_poisson_profile",
    "repro_kernel_sphere",
    "repro_kernel_ball",
    "repro_kernel_simplex",
]


@dataclass(frozen=True)
class Majorant:
    """Nonincreasing pointwise bound m(theta) >= |q(cos theta)|.

    ``grid`` is the certificate grid on which monotonicity and
    domination were checked at construction.
    """

    family: str
    fn: object
    grid: np.ndarray

    def __call__(self, theta):
        return np.asarray(self.fn(np.asarray(theta, dtype=float)), dtype=float)


@dataclass(frozen=True)
class KernelProfile:
    """Univariate summability kernel q(t) with its series coefficients.

    ``argument`` records the convention: "cos" profiles are applied to
    <x, y>-type arguments (sphere/ball, Gegenbauer series); "cos2"
    profiles to doubled-angle arguments 2 s^2 - 1 (simplex, Jacobi
    series).  ``coefficients(nmax)`` returns a_0..a_nmax with

        q(t) = sum_j a_j (j+l)/l C_j^l(t)          ("cos")
        q(t) = sum_j a_j p_j(1) p_j(t)             ("cos2")
    """

    family: str
    index: GegenbauerIndex
    param: tuple
    argument: str
    _eval: object
    majorant: Majorant | None = None

    def evaluate(self, t):
        return np.asarray(self._eval(np.asarray(t, dtype=float)), dtype=float)

    def coefficients(self, nmax: int) -> np.ndarray:
        lam = self.index.lam
        n_arr = np.arange(nmax + 1)
        if self.family in ("poisson", "jacobi_poisson"):
            return self.param[0] ** n_arr
        if self.family == "dlvp":
            return dlvp_coeffs(self.param[0], lam, nmax)
        if self.family == "cesaro":
            n, delta = self.param
            out = np.zeros(nmax + 1)
            top = min(n, nmax)
            A = cesaro_weights(n, delta)
            out[: top + 1] = A[n - np.arange(top + 1)] / A[n]
            return out
        raise ValueError(f"no series coefficients for family {self.family!r}")

    def mass(self, n_points: int | None = None) -> float:
        """Integral against the profile's normalized reference weight.

        "cos" profiles: c_l * integral of q(t) (1-t^2)^(l-1/2) dt;
        "cos2" profiles: the normalized Jacobi (l-1/2, -1/2) weight.
        Equals 1 for every well-formed profile.
        """
        lam = self.index.lam
        if n_points is None:
            n_points = 64
            if self.family in ("poisson", "jacobi_poisson"):
                n_points = max(64, int(12.0 / (1.0 - self.param[0])))
            elif self.family in ("dlvp", "cesaro"):
                n_points = max(64, self.param[0] + 8)
        if self.argument == "cos":
            rule = gauss_jacobi(n_points, JacobiParams(lam - 0.5, lam - 0.5))
        else:
            rule = gauss_jacobi(n_points, JacobiParams(lam - 0.5, -0.5))
        return float(rule.weights @ self.evaluate(rule.nodes))


def _certify_majorant(family: str, fn, profile_eval, grid_size: int = 721) -> Majorant:
    grid = np.linspace(0.0, math.pi, grid_size)
    m_vals = np.asarray(fn(grid), dtype=float)
    q_vals = np.abs(profile_eval(np.cos(grid)))
    if np.any(np.diff(m_vals) > 1e-12):
        raise ValueError("majorant candidate is not nonincreasing on the grid")
    if np.any(q_vals > m_vals + 1e-10):
        raise ValueError("majorant candidate does not dominate |q| on the grid")
    return Majorant(family, fn, grid)


def poisson_profile(r: float, idx) -> KernelProfile:
    """Poisson kernel q_r(t) = (1 - r^2) / (1 - 2 r t + r^2)^(l + 1).

    The kernel itself is nonnegative and nonincreasing in theta, so it
    is its own majorant.
    """
    idx = idx if isinstance(idx, GegenbauerIndex) else GegenbauerIndex(float(idx))
    if not 0.0 <= r < 1.0:
        raise ValueError("Poisson parameter must lie in [0, 1)")
    lam = idx.lam

    def q(t):
        return (1.0 - r * r) / (1.0 - 2.0 * r * t + r * r) ** (lam + 1.0)

    maj = _certify_majorant("poisson", lambda th: q(np.cos(th)), q)
    return KernelProfile("poisson", idx, (r,), "cos", q, maj)


def dlvp_coeffs(n: int, lam: float, nmax: int | None = None) -> np.ndarray:
    """de la Vallee Poussin coefficients mu_{k,n} for k = 0..nmax.

    mu_{k,n} = n!/(n-k)! * Gamma(n + 2l + 1)/Gamma(n + k + 2l + 1),
    evaluated in log space; zero for k > n.
    """
    if nmax is None:
        nmax = n
    k = np.arange(nmax + 1)
    out = np.zeros(nmax + 1)
    kk = k[k <= n]
    logs = (specfun.log_pochhammer(n - kk + 1.0, kk)
            - specfun.log_pochhammer(n + 2.0 * lam + 1.0, kk))
    out[: len(kk)] = np.exp(logs)
    return out


def dlvp_profile(n: int, idx) -> KernelProfile:
    """de la Vallee Poussin kernel, closed form

        q_n(cos theta) = (2l+1)_n / (l+1/2)_n * (cos(theta/2))^(2n).
    """
    idx = idx if isinstance(idx, GegenbauerIndex) else GegenbauerIndex(float(idx))
    if n < 0:
        raise ValueError("degree must be nonnegative")
    lam = idx.lam
    lead = math.exp(log_pochhammer(2.0 * lam + 1.0, n) - log_pochhammer(lam + 0.5, n))

    def q(t):
        return lead * ((1.0 + t) / 2.0) ** n

    maj = _certify_majorant("dlvp", lambda th: q(np.cos(th)), q)
    return KernelProfile("dlvp", idx, (n,), "cos", q, maj)


def cesaro_weights(n: int, delta: float) -> np.ndarray:
    """A_k^delta = binom(k + delta, k) for k = 0..n via the stable recurrence
    A_k = A_{k-1} (k + delta) / k."""
    k = np.arange(1, n + 1)
    return np.concatenate([[1.0], np.cumprod((k + delta) / k)])


def cesaro_profile(n: int, delta: float, idx) -> KernelProfile:
    """Cesaro (C, delta) kernel (A_n^d)^-1 sum_k A_{n-k}^d (k+l)/l C_k^l(t)."""
    idx = idx if isinstance(idx, GegenbauerIndex) else GegenbauerIndex(float(idx))
    if delta <= 0.0:
        raise ValueError("Cesaro order must be positive")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n > 4096:
        raise ValueError("Cesaro degree exceeds the coefficient budget")
    lam = idx.lam
    A = cesaro_weights(n, delta)
    coef = A[::-1] / A[n] * (np.arange(n + 1) + lam) / lam

    def q(t):
        t = np.asarray(t, dtype=float)
        table = specfun.gegenbauer_table(n, lam, t)
        return np.tensordot(coef, table, axes=(0, 0))

    return KernelProfile("cesaro", idx, (n, delta), "cos", q, None)


def cesaro_majorant(n: int, delta: float, idx,
                    fit_degrees: tuple = (8, 16, 32, 64),
                    grid_size: int = 721) -> Majorant:
    """Decreasing bound for the Cesaro kernel with a fitted constant.

    The bound's shape is n^(l-d) (n^-2 + theta^2)^((-l-d-1)/2) for
    d <= l+1 and n^-1 (n^-2 + theta^2)^(-l-1) otherwise; the constant is
    fitted as the largest shape ratio over ``fit_degrees``, so its
    stability across n is the checkable content of the asymptotic bound.
    """
    idx = idx if isinstance(idx, GegenbauerIndex) else GegenbauerIndex(float(idx))
    lam = idx.lam

    def shape(m: int, theta: np.ndarray) -> np.ndarray:
        base = m ** (-2.0) + theta**2
        if delta <= lam + 1.0:
            return m ** (lam - delta) * base ** ((-lam - delta - 1.0) / 2.0)
        return base ** (-lam - 1.0) / m

    grid = np.linspace(0.0, math.pi, grid_size)
    c_fit = 0.0
    for m in fit_degrees:
        q_vals = np.abs(cesaro_profile(m, delta, idx).evaluate(np.cos(grid)))
        c_fit = max(c_fit, float(np.max(q_vals / shape(m, grid))))
    c_fit *= 1.0 + 1e-9

    def fn(theta):
        return c_fit * shape(n, np.asarray(theta, dtype=float))

    return _certify_majorant("cesaro", fn, cesaro_profile(n, delta, idx).evaluate)


def jacobi_poisson_profile(r: float, idx) -> KernelProfile:
    """Poisson kernel of the Jacobi series with parameters (l-1/2, -1/2):

        P(r; t) = (1-r)(1+r)^(l+1) / (1 - 2 r t + r^2)^(l+1)
                  * 2F1(-(l+1)/2, -l/2; 1/2; 2 r (1+t)/(1+r)^2)

    where l is the working index.  The hypergeometric parameters follow
    from the even part of the Gegenbauer generating function through the
    quadratic transformation; the test suite pins this form against the
    term-by-term Jacobi series.  A "cos2"-convention profile: on the
    simplex it is applied to 2 s^2 - 1 arguments.
    """
    idx = idx if isinstance(idx, GegenbauerIndex) else GegenbauerIndex(float(idx))
    if not 0.0 <= r < 1.0:
        raise ValueError("Poisson parameter must lie in [0, 1)")
    lam = idx.lam

    def q(t):
        t = np.asarray(t, dtype=float)
        pref = ((1.0 - r) * (1.0 + r) ** (lam + 1.0)
                / (1.0 - 2.0 * r * t + r * r) ** (lam + 1.0))
        z = 2.0 * r * (1.0 + t) / (1.0 + r) ** 2
        return pref * specfun.hyp2f1(-(lam + 1.0) / 2.0, -lam / 2.0, 0.5, z)

    # bound by a Poisson-shaped decreasing profile with a fitted constant
    grid = np.linspace(0.0, math.pi, 721)

    def shape(theta):
        return (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(theta) + r * r) ** (lam + 1.0)

    c_fit = float(np.max(np.abs(q(np.cos(grid))) / shape(grid))) * (1.0 + 1e-9)
    maj = _certify_majorant("jacobi_poisson", lambda th: c_fit * shape(th), q)
    return KernelProfile("jacobi_poisson", idx, (r,), "cos2", q, maj)


# ---------------------------------------------------------------------------
# reproducing kernels


def repro_kernel_sphere(n: int, spec: WeightSpec, x, y, op=None) -> float:
    """Degree-n reproducing kernel on the sphere at (x, y)."""
    sspec = spec if len(spec.kappa) == spec.d + 1 else spec.lifted()
    lam = sspec.index
    if op is None:
        op = make_v_operator("sphere", sspec, degree=max(n, 1))
    y = np.asarray(y, dtype=float)

    def g(pts):
        return specfun.gegenbauer(n, lam, pts @ y)

    return (n + lam) / lam * v_apply(op, g, np.asarray(x, dtype=float), degree=n)


def repro_kernel_ball(n: int, spec: WeightSpec, x, y, op=None) -> float:
    """Degree-n reproducing kernel on the ball at (x, y)."""
    lam = spec.index
    if op is None:
        op = make_v_operator("ball", spec, degree=max(n, 1))
    X = ball_lift(x)[0]
    Y = ball_lift(y)[0]

    def g(pts):
        return specfun.gegenbauer(n, lam, pts @ Y)

    return (n + lam) / lam * v_apply(op, g, X, degree=n)


def repro_kernel_simplex(n: int, spec: WeightSpec, x, y, op=None) -> float:
    """Degree-n reproducing kernel on the simplex at (x, y)."""
    lam = spec.index
    if op is None:
        op = make_v_operator("simplex", spec, degree=max(2 * n, 1))
    X = simplex_lift(x)[0]
    Y = simplex_lift(y)[0]
    params = JacobiParams(lam - 0.5, -0.5)

    def g(pts):
        s = pts @ Y
        return specfun.jacobi_orthonormal(n, params, 2.0 * s * s - 1.0)

    return specfun.jacobi_at_one(n, params) * v_apply(op, g, X, degree=2 * n)
