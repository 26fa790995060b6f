"""Scalar special functions used throughout the library.

Provides Gegenbauer polynomials, Jacobi polynomials orthonormal with
respect to the probability-normalized weight, the Gauss hypergeometric
function on [0, 1), log-Gamma/Pochhammer arithmetic, and the
normalization constants of the product weights on the sphere, ball and
simplex.

Conventions
-----------
* ``w_lambda(t) = (1 - t^2)^(lambda - 1/2)`` on [-1, 1]; ``c_lambda`` is
  the reciprocal of its mass, so ``c_lambda * w_lambda`` is a probability
  density.
* Jacobi polynomials ``p_n`` are orthonormal against the
  probability-normalized weight ``c_{a,b} (1-t)^a (1+t)^b dt``.  This is
  the unique normalization for which the quadratic transformation

      (2n + lambda)/lambda * C_{2n}^lambda(t)
          = p_n(1) * p_n(2 t^2 - 1),      p_n = p_n^(lambda-1/2, -1/2)

  holds with no extra constant.
* All Gamma-ratio coefficients are evaluated in log space; degrees up to
  a few hundred stay finite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sps

__all__ = [
    "GegenbauerIndex",
    "JacobiParams",
    "NormConstants",
    "NonConvergenceError",
    "gegenbauer",
    "gegenbauer_table",
    "gegenbauer_at_one",
    "jacobi_orthonormal",
    "jacobi_orthonormal_table",
    "jacobi_at_one",
    "hyp2f1",
    "norm_constants",
    "log_pochhammer",
    "log_beta",
]

_T_SLACK = 1e-12


class NonConvergenceError(RuntimeError):
    """A series evaluation failed to reach tolerance within its term budget."""


@dataclass(frozen=True)
class GegenbauerIndex:
    """Gegenbauer parameter lambda > 0.

    The Chebyshev limit lambda = 0 is rejected: every in-scope weight
    configuration has a strictly positive index, and the limit needs
    separate formulas.
    """

    lam: float

    def __post_init__(self) -> None:
        if not self.lam > 0.0:
            raise ValueError(f"Gegenbauer index must be positive, got {self.lam}")


@dataclass(frozen=True)
class JacobiParams:
    """Jacobi weight exponents (alpha, beta), both > -1."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise ValueError(f"Jacobi parameters must exceed -1, got {self}")


@dataclass(frozen=True)
class NormConstants:
    """Reciprocal masses of the weighted measures for one configuration.

    Each constant turns the corresponding weight into a probability
    measure: ``c_lambda`` for ``w_lambda`` on [-1, 1], ``a_kappa`` for
    ``h_kappa^2 domega`` on the sphere, ``A_kappa`` for
    ``(1 - |x|^2)^(gamma - 1)`` on the solid ball of one higher
    dimension, and ``a_kappa_mu`` / ``a_kappa_mu_T`` for the ball and
    simplex product weights (these two coincide under the square map).
    ``A_kappa`` is ``inf`` when gamma = 0; that boundary case degenerates
    to the surface measure.
    """

    c_lambda: float
    a_kappa: float
    A_kappa: float
    a_kappa_mu: float
    a_kappa_mu_T: float
    gamma_kappa: float


def _as_lambda(idx) -> float:
    lam = idx.lam if isinstance(idx, GegenbauerIndex) else float(idx)
    if not lam > 0.0:
        raise ValueError(f"Gegenbauer index must be positive, got {lam}")
    return lam


def _check_t(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + _T_SLACK):
        raise ValueError("argument outside [-1, 1]")
    return np.clip(t, -1.0, 1.0)


def log_pochhammer(a: float, n: float) -> float:
    """log of the rising factorial (a)_n = Gamma(a+n)/Gamma(a), a > 0."""
    return sps.gammaln(a + n) - sps.gammaln(a)


def log_beta(a: float, b: float) -> float:
    return sps.gammaln(a) + sps.gammaln(b) - sps.gammaln(a + b)


def gegenbauer_table(nmax: int, lam, t) -> np.ndarray:
    """Gegenbauer polynomials C_0..C_nmax at t, stacked along axis 0.

    Three-term recurrence; t may be any ndarray.  Output shape is
    ``(nmax + 1,) + t.shape``.
    """
    lam = _as_lambda(lam)
    if nmax < 0:
        raise ValueError("degree must be nonnegative")
    t = _check_t(t)
    out = np.empty((nmax + 1,) + t.shape, dtype=float)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2.0 * lam * t
    for n in range(2, nmax + 1):
        out[n] = (2.0 * (n + lam - 1.0) * t * out[n - 1]
                  - (n + 2.0 * lam - 2.0) * out[n - 2]) / n
    return out


def gegenbauer(n: int, lam, t):
    """Gegenbauer polynomial C_n^lambda(t) via the three-term recurrence."""
    lam = _as_lambda(lam)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    t = _check_t(t)
    if n == 0:
        res = np.ones_like(t)
    elif n == 1:
        res = 2.0 * lam * t
    else:
        prev = np.ones_like(t)
        cur = 2.0 * lam * t
        for k in range(2, n + 1):
            prev, cur = cur, (2.0 * (k + lam - 1.0) * t * cur
                              - (k + 2.0 * lam - 2.0) * prev) / k
        res = cur
    return res if res.ndim else float(res)


def gegenbauer_at_one(n: int, lam) -> float:
    """C_n^lambda(1) = (2 lambda)_n / n!, computed in log space."""
    lam = _as_lambda(lam)
    return math.exp(log_pochhammer(2.0 * lam, n) - sps.gammaln(n + 1.0))


def _jacobi_log_sq_norm(n: int, p: JacobiParams) -> float:
    """log of the squared norm of the classical P_n under the
    probability-normalized Jacobi weight."""
    a, b = p.alpha, p.beta
    if n == 0:
        return 0.0
    log_hn = ((a + b + 1.0) * math.log(2.0)
              - math.log(2.0 * n + a + b + 1.0)
              + sps.gammaln(n + a + 1.0) + sps.gammaln(n + b + 1.0)
              - sps.gammaln(n + a + b + 1.0) - sps.gammaln(n + 1.0))
    log_mass = (a + b + 1.0) * math.log(2.0) + log_beta(a + 1.0, b + 1.0)
    return log_hn - log_mass


def _jacobi_classical_table(nmax: int, p: JacobiParams, t: np.ndarray) -> np.ndarray:
    """Classical (unnormalized) Jacobi polynomials P_0..P_nmax at t."""
    a, b = p.alpha, p.beta
    out = np.empty((nmax + 1,) + t.shape, dtype=float)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 0.5 * ((a + b + 2.0) * t + (a - b))
    for n in range(2, nmax + 1):
        s = 2.0 * n + a + b
        c1 = 2.0 * n * (n + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (a * a - b * b)
        c3 = (s - 2.0) * (s - 1.0) * s
        c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s
        out[n] = ((c2 + c3 * t) * out[n - 1] - c4 * out[n - 2]) / c1
    return out


def jacobi_orthonormal_table(nmax: int, p: JacobiParams, t) -> np.ndarray:
    """Orthonormal Jacobi polynomials p_0..p_nmax at t (probability weight).

    ``quad(p_n * p_m * c_{a,b} * (1-t)^a (1+t)^b) = delta_{nm}`` and
    p_n(1) > 0.  Output shape is ``(nmax + 1,) + t.shape``.
    """
    if not isinstance(p, JacobiParams):
        p = JacobiParams(*p)
    if nmax < 0:
        raise ValueError("degree must be nonnegative")
    t = _check_t(t)
    tab = _jacobi_classical_table(nmax, p, t)
    for n in range(nmax + 1):
        tab[n] *= math.exp(-0.5 * _jacobi_log_sq_norm(n, p))
    return tab


def jacobi_orthonormal(n: int, p: JacobiParams, t):
    """Orthonormal Jacobi polynomial p_n at t."""
    res = jacobi_orthonormal_table(n, p, np.asarray(t, dtype=float))[n]
    return res if res.ndim else float(res)


def jacobi_at_one(n: int, p: JacobiParams) -> float:
    """p_n(1), in log space: P_n(1) = (alpha+1)_n / n! divided by the norm."""
    if not isinstance(p, JacobiParams):
        p = JacobiParams(*p)
    log_p1 = log_pochhammer(p.alpha + 1.0, n) - sps.gammaln(n + 1.0)
    return math.exp(log_p1 - 0.5 * _jacobi_log_sq_norm(n, p))


_HYP_MAX_TERMS = 6000
_HYP_RTOL = 1e-13
_HYP_SPLIT = 0.95


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0.0 and abs(x - round(x)) < 1e-12


def _hyp_series(a: float, b: float, c: float, z: np.ndarray) -> np.ndarray:
    """Direct power series of 2F1; z must keep it convergent."""
    z = np.asarray(z, dtype=float)
    term = np.ones_like(z)
    total = np.ones_like(z)
    # terminating case: stop once the Pochhammer factor hits zero
    for k in range(_HYP_MAX_TERMS):
        factor = (a + k) * (b + k) / ((c + k) * (k + 1.0))
        term = term * factor * z
        total += term
        if np.all(np.abs(term) <= _HYP_RTOL * np.maximum(np.abs(total), 1e-300)):
            return total
    raise NonConvergenceError("2F1 series did not converge within the term budget")


def hyp2f1(a: float, b: float, c: float, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for 0 <= z < 1.

    Uses the direct series for z <= 0.95 and the z -> 1-z linear
    transformation above; when c - a - b is (numerically) an integer the
    transformation degenerates and the evaluation is delegated to
    scipy's implementation of the logarithmic case.
    """
    if _is_nonpositive_int(c):
        raise ValueError("c must not be a nonpositive integer")
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < -1e-15) or np.any(z_arr >= 1.0):
        raise ValueError("argument must lie in [0, 1)")
    z_arr = np.clip(z_arr, 0.0, 1.0)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    out = np.empty_like(z_arr)

    near = z_arr <= _HYP_SPLIT
    if np.any(near):
        out[near] = _hyp_series(a, b, c, z_arr[near])
    far = ~near
    if np.any(far):
        if _is_nonpositive_int(a) or _is_nonpositive_int(b):
            # polynomial case: the series terminates and converges anywhere
            out[far] = _hyp_series(a, b, c, z_arr[far])
        else:
            s = c - a - b
            if abs(s - round(s)) < 1e-8:
                out[far] = sps.hyp2f1(a, b, c, z_arr[far])
            else:
                w = 1.0 - z_arr[far]
                g = sps.gammaln
                sg = sps.gammasgn
                lead1 = (g(c) + g(s) - g(c - a) - g(c - b))
                sgn1 = sg(c) * sg(s) * sg(c - a) * sg(c - b)
                lead2 = (g(c) + g(-s) - g(a) - g(b))
                sgn2 = sg(c) * sg(-s) * sg(a) * sg(b)
                out[far] = (sgn1 * np.exp(lead1) * _hyp_series(a, b, 1.0 - s, w)
                            + sgn2 * np.exp(lead2 + s * np.log(w))
                            * _hyp_series(c - a, c - b, 1.0 + s, w))
    return float(out[0]) if scalar else out


def norm_constants(kappa, mu: float = 0.0, d: int | None = None) -> NormConstants:
    """Normalization constants for the product weight configuration.

    ``kappa`` holds either the d+1 sphere exponents (then ``mu`` must be
    0) or the d ball/simplex exponents together with ``mu``.  Every
    constant is the reciprocal of the corresponding weighted mass,
    computed from Beta-function closed forms in log space.
    """
    kappa = tuple(float(k) for k in np.atleast_1d(kappa))
    if any(k < 0.0 for k in kappa):
        raise ValueError("multiplicity entries must be nonnegative")
    if mu < 0.0:
        raise ValueError("mu must be nonnegative")
    if d is None:
        d = len(kappa) - 1 if mu == 0.0 else len(kappa)
    if len(kappa) == d + 1:
        if mu != 0.0:
            raise ValueError("mu must be 0 when kappa already has d+1 entries")
        full = kappa
    elif len(kappa) == d:
        full = kappa + (mu,)
    else:
        raise ValueError(f"kappa must have d or d+1 entries for d={d}")

    gamma = float(sum(full))
    lam = gamma + (d - 1) / 2.0
    log_gam1 = sps.gammaln(lam + 1.0)

    log_a = math.log(2.0) + sum(sps.gammaln(k + 0.5) for k in full) - log_gam1
    log_c = 0.5 * math.log(math.pi) + sps.gammaln(lam + 0.5) - log_gam1
    if gamma > 0.0:
        log_A = (0.5 * (d + 1) * math.log(math.pi)
                 + sps.gammaln(gamma) - log_gam1)
        A_kappa = math.exp(-log_A)
    else:
        A_kappa = math.inf
    log_ab = sum(sps.gammaln(k + 0.5) for k in full) - log_gam1
    a_ball = math.exp(-log_ab)
    return NormConstants(
        c_lambda=math.exp(-log_c),
        a_kappa=math.exp(-log_a),
        A_kappa=A_kappa,
        a_kappa_mu=a_ball,
        a_kappa_mu_T=a_ball,
        gamma_kappa=gamma,
    )
