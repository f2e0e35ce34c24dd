"""Command-line interface and input formats."""

from .main import build_parser, main
from .modelio import (
    ModelFile,
    RunOptions,
    derivation_to_json,
    load_derivation,
    load_model,
    loads_strict,
    model_from_json,
    model_to_json,
)
from .parser import ParseError, format_equation, parse_algebraic_expression, tokenize

__all__ = [
    "build_parser", "main", "ModelFile", "RunOptions", "derivation_to_json", "load_derivation",
    "load_model", "loads_strict", "model_from_json", "model_to_json", "ParseError",
    "format_equation", "parse_algebraic_expression", "tokenize",
]
