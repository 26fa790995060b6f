"""Quadrature rules for the normalized product weights.

Gauss-Jacobi rules on [-1, 1] and product rules on the sphere S^d (in
R^(d+1)), the ball B^d and the simplex T^d, each exact for polynomials
up to a declared degree against the *normalized* weighted measure.  A
seeded Monte Carlo estimator provides an independent oracle.

Sphere rules are built by iterated polar slicing.  Every 1-D factor has
the even weight |t|^(2 kappa) (1 - t^2)^sigma; the substitution u = t^2
turns it into a standard Jacobi weight, and restoring both signs of t
symmetrically keeps odd monomials exactly at zero.  Ball rules are
sphere rules on the lifted sphere with the last coordinate dropped;
simplex rules are ball rules pushed through the square map.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sps

from .specfun import JacobiParams, NormConstants, norm_constants

__all__ = [
    "WeightSpec",
    "QuadRule1D",
    "DomainRule",
    "gauss_jacobi",
    "sphere_rule",
    "ball_rule",
    "simplex_rule",
    "mc_oracle",
    "rule_cache_key",
]

DOMAINS = ("sphere", "ball", "simplex")

#: product rules refuse to grow beyond this many nodes
NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class WeightSpec:
    """A product weight configuration.

    ``kappa`` has d+1 entries for a sphere weight (h_kappa on R^(d+1),
    ``mu`` must be 0) or d entries for a ball/simplex weight together
    with the exponent ``mu`` on (1 - |x|^2)^(mu - 1/2), resp.
    (1 - |x|)^(mu - 1/2).  ``lambda_kappa = sum(kappa) + (d-1)/2``; the
    working Gegenbauer index is ``lambda_kappa`` on the sphere and
    ``lambda_kappa + mu`` on the ball and simplex.
    """

    d: int
    kappa: tuple[float, ...]
    mu: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", tuple(float(k) for k in np.atleast_1d(self.kappa)))
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        if len(self.kappa) not in (self.d, self.d + 1):
            raise ValueError(f"kappa needs d or d+1 entries for d={self.d}")
        if any(k < 0.0 for k in self.kappa):
            raise ValueError("multiplicity entries must be nonnegative")
        if self.mu < 0.0:
            raise ValueError("mu must be nonnegative")
        if len(self.kappa) == self.d + 1 and self.mu != 0.0:
            raise ValueError("sphere-style spec must have mu = 0")
        if not self.index > 0.0:
            raise ValueError("effective Gegenbauer index must be positive")

    @property
    def gamma(self) -> float:
        return float(sum(self.kappa))

    @property
    def lambda_kappa(self) -> float:
        return self.gamma + (self.d - 1) / 2.0

    @property
    def index(self) -> float:
        """Working Gegenbauer index: lambda_kappa (+ mu off the sphere)."""
        return self.lambda_kappa + self.mu

    @property
    def full_kappa(self) -> tuple[float, ...]:
        """All d+1 exponents of the associated sphere weight."""
        if len(self.kappa) == self.d + 1:
            return self.kappa
        return self.kappa + (self.mu,)

    def lifted(self) -> "WeightSpec":
        """Sphere spec of the lifted weight h_kappa(x) |x_{d+1}|^mu."""
        return WeightSpec(self.d, self.full_kappa, 0.0)

    def constants(self) -> NormConstants:
        return norm_constants(self.kappa, self.mu, self.d)


@dataclass(frozen=True)
class QuadRule1D:
    """Gauss rule for a normalized Jacobi weight on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    params: JacobiParams
    exactness: int

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ values)


@dataclass(frozen=True)
class DomainRule:
    """Product rule on one of the supported domains.

    ``points`` has shape (n, dim) with dim = d+1 on the sphere and d on
    the ball/simplex; ``weights`` sum to 1 and integrate against the
    normalized weighted measure exactly for polynomials of total degree
    up to ``exactness``.
    """

    domain: str
    points: np.ndarray
    weights: np.ndarray
    weight_spec: WeightSpec
    exactness: int

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ values)

    def to_csv(self) -> str:
        """Serialize to the documented text format (coordinates, weight)."""
        spec = self.weight_spec
        buf = io.StringIO()
        buf.write(f"# domain={self.domain} d={spec.d}\n")
        buf.write(f"# kappa={','.join(repr(k) for k in spec.kappa)}\n")
        buf.write(f"# mu={spec.mu!r} exactness={self.exactness}\n")
        dim = self.points.shape[1]
        buf.write(",".join(f"x{i}" for i in range(dim)) + ",weight\n")
        for p, w in zip(self.points, self.weights):
            buf.write(",".join(f"{v:.17e}" for v in p) + f",{w:.17e}\n")
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str) -> "DomainRule":
        meta: dict[str, str] = {}
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    k, _, v = tok.partition("=")
                    meta[k] = v
            elif not line.startswith("x0"):
                rows.append([float(v) for v in line.split(",")])
        arr = np.asarray(rows, dtype=float)
        spec = WeightSpec(
            int(meta["d"]),
            tuple(float(v) for v in meta["kappa"].split(",")),
            float(meta["mu"]),
        )
        return DomainRule(meta["domain"], arr[:, :-1], arr[:, -1], spec,
                          int(meta["exactness"]))


def rule_cache_key(domain: str, spec: WeightSpec, exactness: int) -> str:
    kap = "_".join(f"{k:g}" for k in spec.kappa)
    return f"{domain}_d{spec.d}_k{kap}_mu{spec.mu:g}_N{exactness}"


def gauss_jacobi(n: int, p: JacobiParams) -> QuadRule1D:
    """n-point Gauss rule for the normalized weight (1-t)^a (1+t)^b dt.

    Exact for degrees up to 2n - 1; weights are positive and sum to 1.
    """
    if not isinstance(p, JacobiParams):
        p = JacobiParams(*p)
    if n < 1:
        raise ValueError("point count must be >= 1")
    nodes, weights = sps.roots_jacobi(n, p.alpha, p.beta)
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
        raise ArithmeticError("Gauss-Jacobi construction did not converge")
    order = np.argsort(nodes)
    nodes, weights = nodes[order], weights[order]
    weights = weights / weights.sum()
    return QuadRule1D(nodes, weights, p, 2 * n - 1)


def _even_factor_rule(kappa: float, sigma: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric rule for the normalized even weight |t|^(2k) (1-t^2)^s.

    Substituting u = t^2 reduces the even part to the Jacobi weight
    (1-v)^sigma (1+v)^(kappa-1/2) in v = 2u - 1.  The returned 2m nodes
    are mirrored in sign, so odd monomials integrate to exactly zero and
    even monomials of degree <= 4m - 2 are exact.
    """
    base = gauss_jacobi(m, JacobiParams(sigma, kappa - 0.5))
    t = np.sqrt((1.0 + base.nodes) / 2.0)
    nodes = np.concatenate([-t[::-1], t])
    weights = 0.5 * np.concatenate([base.weights[::-1], base.weights])
    return nodes, weights


def _slice_points(N: int) -> int:
    # 2m symmetric points are exact through degree 4m - 2 (even) and all odd
    return N // 4 + 1


def sphere_rule(spec: WeightSpec, N: int) -> DomainRule:
    """Product rule on S^d exact to degree N for a_kappa h_kappa^2 domega."""
    if N < 0:
        raise ValueError("exactness must be nonnegative")
    kappa = spec.full_kappa
    d = spec.d
    # S^0 in R^1: two signed points; |x|^(2k) = 1 on them
    pts = np.array([[-1.0], [1.0]])
    wts = np.array([0.5, 0.5])
    for k in range(2, d + 2):
        # append coordinate k: weight |t|^(2 kappa_k) (1-t^2)^(gamma' + (k-3)/2)
        sigma = float(sum(kappa[: k - 1])) + (k - 3) / 2.0
        t, tw = _even_factor_rule(kappa[k - 1], sigma, _slice_points(N))
        if len(wts) * len(tw) > NODE_BUDGET:
            raise ValueError("requested exactness exceeds the node budget")
        scale = np.sqrt(1.0 - t**2)
        new_pts = np.empty((len(pts) * len(t), k))
        new_pts[:, : k - 1] = np.repeat(pts, len(t), axis=0) * np.tile(scale, len(pts))[:, None]
        new_pts[:, k - 1] = np.tile(t, len(pts))
        wts = (wts[:, None] * tw[None, :]).ravel()
        pts = new_pts
    return DomainRule("sphere", pts, wts, spec, N)


def ball_rule(spec: WeightSpec, N: int) -> DomainRule:
    """Product rule on B^d for the normalized weight h^2 (1-|x|^2)^(mu-1/2)."""
    if len(spec.kappa) != spec.d:
        raise ValueError("ball spec needs d kappa entries plus mu")
    lifted = sphere_rule(spec.lifted(), N)
    return DomainRule("ball", lifted.points[:, : spec.d], lifted.weights, spec, N)


def simplex_rule(spec: WeightSpec, N: int) -> DomainRule:
    """Product rule on T^d for the normalized simplex product weight.

    Obtained from the matching ball rule through the square map; a
    degree-N polynomial on the simplex pulls back to degree 2N.
    """
    if len(spec.kappa) != spec.d:
        raise ValueError("simplex spec needs d kappa entries plus mu")
    ball = ball_rule(spec, 2 * N)
    return DomainRule("simplex", ball.points**2, ball.weights, spec, N)


def ball_lift(points: np.ndarray) -> np.ndarray:
    """Map ball points x to sphere points (x, sqrt(1 - |x|^2))."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    last = np.sqrt(np.clip(1.0 - np.sum(pts**2, axis=1), 0.0, None))
    return np.hstack([pts, last[:, None]])


def simplex_lift(points: np.ndarray) -> np.ndarray:
    """Map simplex points x to sphere points (sqrt(x), sqrt(1 - |x|))."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    last = np.sqrt(np.clip(1.0 - np.sum(pts, axis=1), 0.0, None))
    return np.hstack([np.sqrt(np.clip(pts, 0.0, None)), last[:, None]])


def domain_rule(domain: str, spec: WeightSpec, N: int) -> DomainRule:
    if domain == "sphere":
        return sphere_rule(spec, N)
    if domain == "ball":
        return ball_rule(spec, N)
    if domain == "simplex":
        return simplex_rule(spec, N)
    raise ValueError(f"unknown domain {domain!r}")


def _sample_sphere(spec: WeightSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Exact sampler for a_kappa h_kappa^2 domega on S^d.

    Squared coordinates of the normalized measure follow a Dirichlet law
    with parameters kappa_i + 1/2; signs are symmetric.
    """
    alpha = np.asarray(spec.full_kappa) + 0.5
    u = rng.dirichlet(alpha, size=n)
    signs = rng.integers(0, 2, size=u.shape) * 2 - 1
    return signs * np.sqrt(u)


def sample_points(domain: str, spec: WeightSpec, n: int, seed: int) -> np.ndarray:
    """n seeded points drawn exactly from the normalized weighted measure."""
    rng = np.random.default_rng(seed)
    if domain == "sphere":
        return _sample_sphere(spec, n, rng)
    if domain == "ball":
        return _sample_sphere(spec.lifted(), n, rng)[:, : spec.d]
    if domain == "simplex":
        return _sample_sphere(spec.lifted(), n, rng)[:, : spec.d] ** 2
    raise ValueError(f"unknown domain {domain!r}")


def mc_oracle(domain: str, spec: WeightSpec, f, samples: int, seed: int) -> tuple[float, float]:
    """Seeded Monte Carlo estimate of the normalized weighted integral.

    Samples are drawn exactly from the normalized measure (per-coordinate
    Beta/Dirichlet factors), so the plain sample mean is unbiased.
    Returns (estimate, standard error).
    """
    if samples < 1000:
        raise ValueError("use at least 1000 samples")
    rng = np.random.default_rng(seed)
    if domain == "sphere":
        pts = _sample_sphere(spec, samples, rng)
    elif domain == "ball":
        pts = _sample_sphere(spec.lifted(), samples, rng)[:, : spec.d]
    elif domain == "simplex":
        pts = _sample_sphere(spec.lifted(), samples, rng)[:, : spec.d] ** 2
    else:
        raise ValueError(f"unknown domain {domain!r}")
    vals = np.asarray(f(pts), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ArithmeticError("integrand returned non-finite values at sample points")
    est = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return est, stderr
