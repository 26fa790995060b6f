"""Versioned catalog of built-in test functions.

Adding or changing a function is a code change, never config, so every
reported number has fixed provenance.  The four entries cover the
regularity classes the convergence experiments need: smooth, integrable
point singularity, jump discontinuity, and a sign-type singularity
along a coordinate hyperplane.
"""
from __future__ import annotations

import math

import numpy as np

from ..quadrature import WeightSpec, sample_points
from ..transform import ScalarField

__all__ = ["CATALOG_VERSION", "CATALOG_NAMES", "catalog_field",
           "random_polynomial", "evaluation_points"]

CATALOG_VERSION = 1

CATALOG_NAMES = ("smooth", "point_singularity", "jump", "abs_power")

# fixed anchor direction, truncated/normalized per dimension
_ANCHOR = np.array([0.6, -0.5, 0.45, 0.3, -0.25])


def _unit_anchor(dim: int) -> np.ndarray:
    v = _ANCHOR[:dim]
    return v / np.linalg.norm(v)


def _interior_anchor(domain: str, dim: int) -> np.ndarray:
    if domain == "sphere":
        return _unit_anchor(dim)
    if domain == "ball":
        return 0.35 * _unit_anchor(dim)
    # simplex: interior point away from faces
    base = np.full(dim, 1.0 / (2.0 * dim))
    base[0] *= 1.4
    return base


def catalog_field(name: str, domain: str, dim: int) -> ScalarField:
    """Instantiate a catalog function on one domain.

    ``dim`` is the point dimension: d+1 on the sphere, d otherwise.
    """
    if name == "smooth":
        v = 0.4 * _unit_anchor(dim)
        return ScalarField(domain, lambda p: np.exp(p @ v), "smooth")
    if name == "point_singularity":
        x0 = _interior_anchor(domain, dim)
        a = 0.9

        def f(p):
            r = np.linalg.norm(p - x0[None, :], axis=1)
            return np.minimum(r, 2.0) ** (-a)

        return ScalarField(domain, f, "point_singularity")
    if name == "jump":
        u = _unit_anchor(dim)
        c = 0.2 if domain == "sphere" else 0.1
        return ScalarField(domain, lambda p: (p @ u >= c).astype(float), "jump")
    if name == "abs_power":
        return ScalarField(domain, lambda p: np.abs(p[:, 0]) ** 0.3, "abs_power")
    raise ValueError(f"unknown catalog function {name!r}; catalog v{CATALOG_VERSION}"
                     f" provides {CATALOG_NAMES}")


def random_polynomial(dim: int, degree: int, rng: np.random.Generator,
                      domain: str = "sphere") -> tuple[ScalarField, int]:
    """Seeded random polynomial of total degree ``degree`` on R^dim.

    Coefficients are damped by degree so values stay O(1) on the unit
    domains.  Returns (field, degree).
    """
    exps = [e for e in _exponents(dim, degree)]
    E = np.asarray(exps, dtype=float)
    coeffs = rng.uniform(-1.0, 1.0, size=len(exps)) / (1.0 + E.sum(axis=1))

    def f(p):
        p = np.atleast_2d(p)
        return np.prod(p[:, None, :] ** E[None, :, :], axis=2) @ coeffs

    return ScalarField(domain, f, f"poly(deg={degree})"), degree


def _exponents(dim: int, degree: int):
    if dim == 0:
        yield ()
        return
    for head in range(degree + 1):
        for rest in _exponents(dim - 1, degree - head):
            yield (head,) + rest


def evaluation_points(domain: str, spec: WeightSpec, n: int, seed: int) -> np.ndarray:
    """Seeded evaluation points drawn from the normalized measure."""
    return sample_points(domain, spec, n, seed)
