"""Rational-approximation radiation boundary conditions for the wave equation."""

from .branchcut_quadrature import (
    QuadratureReport,
    QuadratureRule,
    exact_branchcut_integral,
    gauss_chebyshev_u_rule,
    gauss_legendre_folded_rule,
    pole_sum,
    quadrature_report,
    rule_sum,
)
from .error_bounds import bound_check, estimate_M, integrated_bound, per_mode_bound
from .modes import REGISTRY, AnalyticMode, get_mode
from .rational_dtn import (
    RationalDtN,
    branch_jump,
    chebyshev_u_eval,
    continued_fraction_tail,
    partial_fraction_eval,
    poles_and_residues,
    sqrt_dtn_approx,
)
from .wave_sim import ModeSimConfig, ReflectionReport, run_simulation, sweep

__version__ = "0.1.0"
