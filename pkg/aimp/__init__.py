"""
A-IMP word-problem compiler.

Translates grade-school arithmetic word problems into programs of the small
imperative language A-IMP, then typechecks and runs them.
"""
from aimp.config import PipelineConfig, load_config
from aimp.language import Program, exec_cmd, parse_program, print_program
from aimp.pipeline import Compiler, compile, solve

__all__ = [
    "Compiler",
    "PipelineConfig",
    "Program",
    "compile",
    "exec_cmd",
    "load_config",
    "parse_program",
    "print_program",
    "solve",
]
