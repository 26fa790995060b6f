"""Experiment runner: identity suites, convergence sweeps, maximal
function audits and kernel tables, driven by flat key-value configs."""

from .config import ConfigError, ExperimentConfig
from .reports import Report, Verdict
from .verbs import (expand, kernel_table, run_audit, run_convergence,
                    run_maximal, verify_identities)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "Report",
    "Verdict",
    "verify_identities",
    "run_convergence",
    "run_maximal",
    "run_audit",
    "kernel_table",
    "expand",
]
