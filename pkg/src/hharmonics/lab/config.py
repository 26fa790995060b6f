"""Flat key-value experiment configuration.

Config files are plain text, one ``key = value`` per line, ``#`` starts
a comment.  Lists are comma separated.  Documented keys:

    domain            sphere | ball | simplex          (default sphere)
    d                 dimension                        (default 2)
    kappa             comma floats (d+1 sphere / d otherwise)
    mu                ball/simplex exponent            (default 0)
    seed              RNG seed                         (default 7)
    exactness         quadrature rule degree           (verb-specific default)
    nmax              truncation degree                (default 32)
    method            poisson | dlvp | cesaro          (converge)
    schedule          comma list, increasing           (converge)
    delta             cesaro order                     (converge/audit)
    function          smooth | point_singularity | jump | abs_power
    points            number of seeded evaluation points (default 20)
    grid_angles       maximal-function grid size       (default 64)
    methods           comma verbs for audit            (default poisson,dlvp)
    poisson_schedule  audit schedule                   (default 0.5,0.7,0.9,0.95)
    dlvp_schedule     audit schedule                   (default 8,16,32)
    cesaro_schedule   audit schedule                   (default 8,16,32)
    family            kernel-table profile family
    r / n             profile parameters (family-specific)
    grid_points       kernel-table theta resolution    (default 181)
    out               output stem (CSV + JSON side file)
    selftest_corruption   factor injected into one identity suite
                          (harness self-test fixture; default 1 = off)
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..quadrature import DOMAINS, WeightSpec

__all__ = ["ConfigError", "ExperimentConfig", "parse_config_text"]


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


@dataclass
class ExperimentConfig:
    """Typed view over the flat key-value map."""

    raw: dict[str, str] = field(default_factory=dict)

    @staticmethod
    def from_file(path: str) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return ExperimentConfig(parse_config_text(fh.read()))

    # -- typed getters ----------------------------------------------------
    def _get(self, key: str, default):
        return self.raw.get(key, default)

    def str_(self, key: str, default: str) -> str:
        return str(self._get(key, default))

    def int_(self, key: str, default: int) -> int:
        try:
            return int(str(self._get(key, default)))
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: expected integer") from exc

    def float_(self, key: str, default: float) -> float:
        try:
            return float(str(self._get(key, default)))
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: expected number") from exc

    def floats(self, key: str, default: str) -> tuple[float, ...]:
        text = str(self._get(key, default))
        if not text:
            return ()
        try:
            return tuple(float(v) for v in text.split(","))
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: expected comma-separated numbers") from exc

    def strs(self, key: str, default: str) -> tuple[str, ...]:
        text = str(self._get(key, default))
        return tuple(v.strip() for v in text.split(",") if v.strip())

    # -- assembled objects -------------------------------------------------
    @property
    def domain(self) -> str:
        dom = self.str_("domain", "sphere")
        if dom not in DOMAINS:
            raise ConfigError(f"unknown domain {dom!r}")
        return dom

    @property
    def seed(self) -> int:
        return self.int_("seed", 7)

    def weight_spec(self) -> WeightSpec:
        d = self.int_("d", 2)
        dom = self.domain
        default_kappa = ",".join(["0"] * (d + 1 if dom == "sphere" else d))
        kappa = self.floats("kappa", default_kappa)
        mu = self.float_("mu", 0.0)
        want = d + 1 if dom == "sphere" else d
        if len(kappa) != want:
            raise ConfigError(
                f"domain {dom!r} with d={d} needs {want} kappa entries, got {len(kappa)}")
        try:
            return WeightSpec(d, kappa, mu if dom != "sphere" else 0.0)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self) -> dict:
        """Full provenance for reports."""
        out = dict(self.raw)
        out.setdefault("domain", self.str_("domain", "sphere"))
        out.setdefault("d", str(self.int_("d", 2)))
        out.setdefault("seed", str(self.seed))
        return out
