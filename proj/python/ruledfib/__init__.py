"""Python access to the ruledfib classifier and checks."""

from ._ruledfib import (
    Error,
    classify_curve,
    classify_symbolic,
    curve_summary,
    enumerate_fibers,
    ku_check,
    run_acceptance,
    sym_split,
)

__all__ = [
    "Error",
    "classify_curve",
    "classify_symbolic",
    "curve_summary",
    "enumerate_fibers",
    "ku_check",
    "run_acceptance",
    "sym_split",
]
