"""Collaborative multi-robot task planning from LTLf specifications."""

from ._colplan import (
    ColplanError,
    Options,
    Report,
    Scenario,
    collaborative_template,
    exact_problem,
    generate,
    parse_lp,
    plan,
)

__all__ = [
    "ColplanError",
    "Options",
    "Report",
    "Scenario",
    "collaborative_template",
    "exact_problem",
    "generate",
    "parse_lp",
    "plan",
]
