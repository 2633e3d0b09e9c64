"""Strategic-litigation model against courts that learn from precedent."""

from ._precedent import (
    InconsistentPrecedent,
    ScenarioError,
    check_achievable,
    discrepancy_1d,
    is_separable,
    nn_fit,
    render_svg,
    run_scenario,
    svm_fit,
    teach_two_points,
    teach_with_overturning,
    validate_scenario,
)

__all__ = [
    "InconsistentPrecedent",
    "ScenarioError",
    "check_achievable",
    "discrepancy_1d",
    "is_separable",
    "nn_fit",
    "render_svg",
    "run_scenario",
    "svm_fit",
    "teach_two_points",
    "teach_with_overturning",
    "validate_scenario",
]
