"""Classifier-independent performance bounds of binary classification datasets."""

from ._databound import (
    ArgumentError,
    BudgetExceeded,
    DataError,
    Dataset,
    Error,
    PatternTable,
    SingleClassError,
    accuracy_upper,
    ar_max_numeric,
    ar_min_heuristic,
    auc_pr_upper,
    auc_roc_upper,
    best_subset,
    bounds_for_subset,
    bounds_report,
    delta_lower_bound,
    expected_accuracy_upper,
    expected_delta,
    expected_min_hinge,
    load_csv,
    min_loss,
    optimal_dimension_kstar,
    optimal_pr_curve,
    optimal_roc_curve,
    optimal_scores,
    overlap_index,
)

__all__ = [
    "ArgumentError",
    "BudgetExceeded",
    "DataError",
    "Dataset",
    "Error",
    "PatternTable",
    "SingleClassError",
    "accuracy_upper",
    "ar_max_numeric",
    "ar_min_heuristic",
    "auc_pr_upper",
    "auc_roc_upper",
    "best_subset",
    "bounds_for_subset",
    "bounds_report",
    "delta_lower_bound",
    "expected_accuracy_upper",
    "expected_delta",
    "expected_min_hinge",
    "load_csv",
    "min_loss",
    "optimal_dimension_kstar",
    "optimal_pr_curve",
    "optimal_roc_curve",
    "optimal_scores",
    "overlap_index",
]
