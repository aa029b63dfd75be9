"""Chain-ladder reserving with Mack-type bootstraps."""

from ._core import (
    BootstrapRun,
    MackbootError,
    MackFit,
    Triangle,
    bootstrap,
    estimation_variance_limit_tilde,
    fit,
    kolmogorov_survival,
    ks_two_sample,
    oracle_roots,
    parse_triangle,
    process_variance_limit,
    read_triangle,
    residual_pool,
    run_experiment,
    simulate_triangle,
)

__version__ = "0.1.0"

__all__ = [
    "BootstrapRun",
    "MackbootError",
    "MackFit",
    "Triangle",
    "bootstrap",
    "estimation_variance_limit_tilde",
    "fit",
    "kolmogorov_survival",
    "ks_two_sample",
    "oracle_roots",
    "parse_triangle",
    "process_variance_limit",
    "read_triangle",
    "residual_pool",
    "run_experiment",
    "simulate_triangle",
]
