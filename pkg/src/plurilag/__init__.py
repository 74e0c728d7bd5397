"""Exact differential-algebra engine for variational symmetries and pluri-Lagrangian 2-forms."""

from .calculus import (
    EvolutionaryField,
    divergence,
    euler_operator,
    prolong_apply,
    restricted_delta_u,
    restricted_delta_u_k,
    restricted_delta_u_km,
    total_derivative,
    total_derivative_multi,
)
from .jet import Context, Expr, JetVar, max_order, normalize, partial
from .parser import parse_expr
from .printer import print_expr
from .reduction import EquationSystem, Rule, check_confluence_samples, is_consequence, reduce

__version__ = "0.1.0"

__all__ = [
    "Context",
    "EquationSystem",
    "EvolutionaryField",
    "Expr",
    "JetVar",
    "Rule",
    "check_confluence_samples",
    "divergence",
    "euler_operator",
    "is_consequence",
    "max_order",
    "normalize",
    "parse_expr",
    "partial",
    "print_expr",
    "prolong_apply",
    "reduce",
    "restricted_delta_u",
    "restricted_delta_u_k",
    "restricted_delta_u_km",
    "total_derivative",
    "total_derivative_multi",
]
