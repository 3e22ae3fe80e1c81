"""Symbolic-numeric engine for reduction identities of signed cyclic sums of
Mordell-Tornheim zeta and L-values, with high-precision verification."""

from .numerics import EvalConfig, EvalResult, eval_expr
from .reduction import cyclic_sum_identity, depth2_identity, subset_reduction
from .symexpr import Expr

__version__ = "0.1.0"

__all__ = [
    "EvalConfig",
    "EvalResult",
    "Expr",
    "cyclic_sum_identity",
    "depth2_identity",
    "subset_reduction",
    "eval_expr",
    "__version__",
]
