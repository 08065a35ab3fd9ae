"""Batch driver: experiment specs in, reports out."""

from .experiment import ExperimentSpec, emit, parse_spec, run, validate_spec
from .expr import compile_rule
from .main import main

__all__ = [
    "ExperimentSpec",
    "compile_rule",
    "emit",
    "main",
    "parse_spec",
    "run",
    "validate_spec",
]
