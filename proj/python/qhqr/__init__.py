"""Toeplitz operators with quasi-homogeneous quasi-radial symbols."""

from ._core import (
    ConfigError,
    QuasiRadialSymbol,
    Symbol,
    basis,
    comm_condition,
    domain_volume,
    gamma,
    invariance_max_dev,
    log_gamma,
    matrix_closed,
    matrix_oracle,
    monomial_inner_product,
    pair_commutes,
    radial_pair_commutes,
    restricted_commutator_max_abs,
    run,
    sphere_monomial_integral,
    validate_akh,
)

__all__ = [
    "ConfigError",
    "QuasiRadialSymbol",
    "Symbol",
    "basis",
    "comm_condition",
    "domain_volume",
    "gamma",
    "invariance_max_dev",
    "log_gamma",
    "matrix_closed",
    "matrix_oracle",
    "monomial_inner_product",
    "pair_commutes",
    "radial_pair_commutes",
    "restricted_commutator_max_abs",
    "run",
    "sphere_monomial_integral",
    "validate_akh",
]
