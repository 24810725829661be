"""Matrix variance inequalities for Integrated Pearson and Cumulative Ord members."""

import json

from ._varbounds import (
    ClassMembershipError,
    Distribution,
    InvalidArgument,
    NoSampler,
    SingularCoefficient,
    catalog,
    catalog_names,
    distribution_from_argument,
    infer_quadratic,
    mc_cross_check,
    moment_finiteness,
    parse_distribution,
    run_cli,
    verify_membership,
)
from ._varbounds import compute_bounds as _compute_bounds


def compute_bounds(distribution, functions, n, **kwargs):
    """Bound report of order n as a dict (matrices as nested lists)."""
    return json.loads(_compute_bounds(distribution, list(functions), n, **kwargs))


__all__ = [
    "ClassMembershipError",
    "Distribution",
    "InvalidArgument",
    "NoSampler",
    "SingularCoefficient",
    "catalog",
    "catalog_names",
    "compute_bounds",
    "distribution_from_argument",
    "infer_quadratic",
    "mc_cross_check",
    "moment_finiteness",
    "parse_distribution",
    "run_cli",
    "verify_membership",
]
