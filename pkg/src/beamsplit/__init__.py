"""Beamsplitter addition of distributions on the non-negative integers.

``Z = X [+]_eta Y`` is the photon-count law at one output port of a
beamsplitter with transmissivity ``eta`` fed by independent inputs X and Y.
The package computes it through products of generating functions and
Laguerre inversion, and checks the heat equation, de Bruijn identity and
entropy inequalities that go with it.
"""

from .beamsplitter import BeamsplitConfig, beamsplit_add, beamsplit_moments, check_eta
from .continuous import RadialDensity, check_log_sum, continuous_relative_entropy, radial_density
from .dynamics import (
    EvolveConfig,
    check_entropy_concavity,
    check_log_sobolev,
    debruijn_lhs_numeric,
    debruijn_rhs,
    evolve_heat,
    heat_rhs,
    score,
    tilted_pair,
)
from .errors import BeamsplitError, NumericalError, ValidationError
from .laguerre import gauss_laguerre_rule, laguerre_eval, laguerre_functions
from .pmf import (
    GeometricSpec,
    Pmf,
    entropy,
    geometric_mixture_pmf,
    geometric_pmf,
    make_pmf,
    mean,
    point_mass,
    relative_entropy,
    total_variation,
)
from .transforms import (
    binomial_moments,
    continuous_moments,
    eval_H,
    eval_H_tilde,
    eval_phi,
    eval_phi_tilde,
    laguerre_invert,
    pmf_from_binomial_moments,
    quadrature_order,
)

__version__ = "0.1.0"

__all__ = [
    "BeamsplitConfig",
    "BeamsplitError",
    "EvolveConfig",
    "GeometricSpec",
    "NumericalError",
    "Pmf",
    "RadialDensity",
    "ValidationError",
    "beamsplit_add",
    "beamsplit_moments",
    "binomial_moments",
    "check_entropy_concavity",
    "check_eta",
    "check_log_sobolev",
    "check_log_sum",
    "continuous_moments",
    "continuous_relative_entropy",
    "debruijn_lhs_numeric",
    "debruijn_rhs",
    "entropy",
    "eval_H",
    "eval_H_tilde",
    "eval_phi",
    "eval_phi_tilde",
    "evolve_heat",
    "gauss_laguerre_rule",
    "geometric_mixture_pmf",
    "geometric_pmf",
    "heat_rhs",
    "laguerre_eval",
    "laguerre_functions",
    "laguerre_invert",
    "make_pmf",
    "mean",
    "pmf_from_binomial_moments",
    "point_mass",
    "quadrature_order",
    "radial_density",
    "relative_entropy",
    "score",
    "tilted_pair",
    "total_variation",
]
