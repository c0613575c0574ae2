"""Hypergeometric terms: model, parser, balance/support analysis, evaluation."""

from .analysis import (
    InfiniteSupportError,
    OutsideSupportError,
    UnbalancedTermError,
    check_balance,
    check_finiteness,
    enumerate_support,
    eval_binomial_form,
    eval_term,
    fm_eliminate,
    fm_feasible_point,
    recession_witness,
    support_box,
    to_binomial_form,
)
from .model import BalancedTerm, BinomialForm, LinearForm, SupportSlice
from .parser import (
    NonIntegerCoefficientError,
    TermParseError,
    TermSyntaxError,
    UnknownVariableError,
    parse_term,
)

__all__ = [
    "BalancedTerm", "BinomialForm", "InfiniteSupportError", "LinearForm",
    "NonIntegerCoefficientError", "OutsideSupportError", "SupportSlice", "TermParseError",
    "TermSyntaxError", "UnbalancedTermError", "UnknownVariableError", "check_balance",
    "check_finiteness", "enumerate_support", "eval_binomial_form", "eval_term",
    "fm_eliminate", "fm_feasible_point", "parse_term", "recession_witness", "support_box",
    "to_binomial_form",
]
