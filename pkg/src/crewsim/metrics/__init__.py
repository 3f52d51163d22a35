"""Researcher tooling: questionnaire scoring and session log summaries."""

from .logs import parse_log_lines, summarize_log
from .scoring import (
    cohesion_score,
    ipq_scores,
    load_ipq_mapping,
    load_ssq_weights,
    ssq_scores,
    sus_score,
)

__all__ = [
    "cohesion_score",
    "ipq_scores",
    "load_ipq_mapping",
    "load_ssq_weights",
    "parse_log_lines",
    "ssq_scores",
    "summarize_log",
    "sus_score",
]
