"""Embeddable tabled logic-programming engine with linear tabling."""

from .analysis import AnnotatedProgram, analyze
from .engine import (
    EAGER,
    LAZY,
    Engine,
    EngineError,
    EngineOptions,
    InvariantViolation,
    RunStats,
    StepBudgetExceeded,
    run_query,
)
from .parser import ProgramSyntaxError, parse_program, parse_query
from .oracle import OracleInapplicable, oracle_solve

__all__ = [
    "AnnotatedProgram",
    "EAGER",
    "Engine",
    "EngineError",
    "EngineOptions",
    "InvariantViolation",
    "LAZY",
    "OracleInapplicable",
    "ProgramSyntaxError",
    "RunStats",
    "StepBudgetExceeded",
    "analyze",
    "load_program",
    "oracle_solve",
    "parse_program",
    "parse_query",
    "run_query",
]


def load_program(text: str) -> AnnotatedProgram:
    """Parse and analyze program text into a runnable program handle."""
    return analyze(parse_program(text))
