"""Determinacy analysis for symmetric moment problems via Jacobi sequences."""

from momentdet._core import (
    JacobiSequence,
    check_carleman,
    check_condition_star,
    column_convergence_trace,
    d_tail,
    decide_sc,
    deficiency_norm,
    eval_sequence,
    extremal_measure_pair,
    gap_estimate,
    ig_at_i,
    jacobi_from_moments,
    moments_from_jacobi,
    quadrature_measure,
    reference_names,
    resolvent_column,
    run_trace,
    stieltjes_at_i,
    validate_reference,
    __version__,
)

__all__ = [
    "JacobiSequence",
    "check_carleman",
    "check_condition_star",
    "column_convergence_trace",
    "d_tail",
    "decide_sc",
    "deficiency_norm",
    "eval_sequence",
    "extremal_measure_pair",
    "gap_estimate",
    "ig_at_i",
    "jacobi_from_moments",
    "moments_from_jacobi",
    "quadrature_measure",
    "reference_names",
    "resolvent_column",
    "run_trace",
    "stieltjes_at_i",
    "validate_reference",
    "__version__",
]
