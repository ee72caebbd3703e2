"""Satisfiability and model finding for multi-level syllogistic with singleton."""

from .certificate import Certificate, CheckResult, check_certificate
from .hf import EMPTY, HFSet, hf_from, hf_ordinal, hf_single, hf_universe, render
from .levels import LevelEnv, Typing, Untypeable, infer
from .parser import ParseError, parse, pretty, pretty_term
from .semantics import oracle_sat, satisfies
from .solver import BudgetExceeded, InternalError, Sat, Unsat, decide, extract_model
from .syntax import (
    And, AtomF, Diff, Empty, Eq, Formula, Inter, Literal, Mem, Neg, Or, Single, Term, Union, Var,
)

__all__ = [
    "And", "AtomF", "BudgetExceeded", "Certificate", "CheckResult", "Diff", "EMPTY", "Empty", "Eq",
    "Formula", "HFSet", "InternalError", "Inter", "LevelEnv", "Literal", "Mem", "Neg", "Or",
    "ParseError", "Sat", "Single", "Term", "Typing", "Union", "Unsat", "Untypeable", "Var",
    "check_certificate", "decide", "extract_model", "hf_from", "hf_ordinal", "hf_single",
    "hf_universe", "infer", "oracle_sat", "parse", "pretty", "pretty_term", "render", "satisfies",
]
