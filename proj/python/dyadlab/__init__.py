"""Python surface of the dyadlab workbench: prompt assembly, scenario
enumeration, the mock conversation runner and the statistical kernels."""

from ._core import (
    DyadConfigError,
    DyadSchemaError,
    SeparationError,
    adf_test,
    assemble_system_prompt,
    bin_turn,
    cli_main,
    count_runs,
    enumerate_scenarios,
    granger_lag1,
    lexicon_score,
    list_personality_combos,
    logit_fit,
    ols_fit,
    pvalue_summary,
    run_mock_conversation,
)

__all__ = [
    "DyadConfigError",
    "DyadSchemaError",
    "SeparationError",
    "adf_test",
    "assemble_system_prompt",
    "bin_turn",
    "cli_main",
    "count_runs",
    "enumerate_scenarios",
    "granger_lag1",
    "lexicon_score",
    "list_personality_combos",
    "logit_fit",
    "ols_fit",
    "pvalue_summary",
    "run_mock_conversation",
]
