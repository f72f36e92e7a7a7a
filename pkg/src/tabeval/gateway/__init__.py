"""Client for chat-completion endpoints: matching, judging, classification, hints."""

from .client import LlmClient, LlmEndpointConfig
from .ops import (
    HINT_CATEGORIES,
    VALIDATION_FUZZY,
    VALIDATION_UNVERIFIED,
    VALIDATION_VERBATIM,
    VALIDATION_WHITESPACE,
    ComplexityResult,
    Hint,
    JudgeVerdict,
    MatchRecord,
    classify_complexity,
    generate_hints,
    judge_pair,
    match_tables,
    post_validate,
)

__all__ = [
    "LlmClient",
    "LlmEndpointConfig",
    "MatchRecord",
    "JudgeVerdict",
    "ComplexityResult",
    "Hint",
    "HINT_CATEGORIES",
    "VALIDATION_VERBATIM",
    "VALIDATION_WHITESPACE",
    "VALIDATION_FUZZY",
    "VALIDATION_UNVERIFIED",
    "match_tables",
    "post_validate",
    "judge_pair",
    "classify_complexity",
    "generate_hints",
]
