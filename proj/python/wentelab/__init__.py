"""Weighted Wente inequality toolkit on the unit disk."""

from ._core import (
    DegenerateInputError,
    EvaluationError,
    Grid,
    GridMismatchError,
    ParameterError,
    SolverError,
    catalog,
    closed_form_norms,
    decompose,
    grad_a_tilde_quadrature,
    gradient,
    integrate,
    jacobian,
    k_factor,
    lorentz,
    lorentz_weak,
    make_grid,
    oracle_compare,
    run_suite,
    s_alpha,
    sample,
    solve,
    sweep,
    weighted_energy,
    weighted_sup,
)

__all__ = [
    "DegenerateInputError",
    "EvaluationError",
    "Grid",
    "GridMismatchError",
    "ParameterError",
    "SolverError",
    "catalog",
    "closed_form_norms",
    "decompose",
    "grad_a_tilde_quadrature",
    "gradient",
    "integrate",
    "jacobian",
    "k_factor",
    "lorentz",
    "lorentz_weak",
    "make_grid",
    "oracle_compare",
    "run_suite",
    "s_alpha",
    "sample",
    "solve",
    "sweep",
    "weighted_energy",
    "weighted_sup",
]
